#include "d2dsim/oracles.hpp"

#include <cmath>
#include <vector>

namespace d2dsim::oracle {
namespace {

// SINR constraints written as linear inequalities in (x = P^d, y = P^c):
//   cu:  g_cu_bs*y - eps_c*h_d2d_bs*x >= eps_c*sigma^2
//   d2d: g_d2d*x - eps_d*h_cu_d2d*y   >= eps_d*sigma^2
struct LinearConstraints {
  double cu_y, cu_x, cu_rhs;
  double d2d_x, d2d_y, d2d_rhs;

  bool holds(double x, double y) const {
    return cu_y * y - cu_x * x >= cu_rhs && d2d_x * x - d2d_y * y >= d2d_rhs;
  }
};

LinearConstraints linearise(const PairGains& g, const SinrThresholds& t, double noise) {
  return {g.g_cu_bs, t.cu * g.h_d2d_bs, t.cu * noise, g.g_d2d, t.d2d * g.h_cu_d2d, t.d2d * noise};
}

double rate(double signal, double interference, double noise) {
  return std::log2(1.0 + signal / (noise + interference));
}

}  // namespace

std::optional<GridOptimum> grid_best_power(const PairGains& g, const SinrThresholds& t,
                                           const PowerLimits& limits, std::size_t points) {
  const double noise = limits.noise_mw;
  std::optional<GridOptimum> best;
  for (std::size_t a = 0; a < points; ++a) {
    const double pd = limits.p_max_d2d_mw * static_cast<double>(a) / static_cast<double>(points - 1);
    for (std::size_t b = 0; b < points; ++b) {
      const double pc = limits.p_max_cu_mw * static_cast<double>(b) / static_cast<double>(points - 1);
      const double sinr_c = pc * g.g_cu_bs / (noise + pd * g.h_d2d_bs);
      const double sinr_d = pd * g.g_d2d / (noise + pc * g.h_cu_d2d);
      if (sinr_c < t.cu || sinr_d < t.d2d || pc <= 0.0 || pd <= 0.0) continue;
      const double f = rate(pc * g.g_cu_bs, pd * g.h_d2d_bs, noise) +
                       rate(pd * g.g_d2d, pc * g.h_cu_d2d, noise);
      if (!best || f > best->sum_rate_bpshz) best = GridOptimum{pc, pd, f};
    }
  }
  return best;
}

bool grid_feasible(const PairGains& g, const SinrThresholds& t, const PowerLimits& limits,
                   std::size_t points) {
  const LinearConstraints lc = linearise(g, t, limits.noise_mw);
  const double xmax = limits.p_max_d2d_mw;
  const double ymax = limits.p_max_cu_mw;

  for (std::size_t a = 1; a < points; ++a) {
    const double x = xmax * static_cast<double>(a) / static_cast<double>(points - 1);
    for (std::size_t b = 1; b < points; ++b) {
      const double y = ymax * static_cast<double>(b) / static_cast<double>(points - 1);
      if (lc.holds(x, y)) return true;
    }
  }

  struct Cell {
    double x0, x1, y0, y1;
  };
  std::vector<Cell> frontier{{0.0, xmax, 0.0, ymax}};
  constexpr int kMaxDepth = 64;
  constexpr std::size_t kMaxCells = 1u << 16;
  for (int depth = 0; depth < kMaxDepth && !frontier.empty(); ++depth) {
    std::vector<Cell> next;
    for (const Cell& c : frontier) {
      // Best case of each constraint over the cell sits at one corner.
      const bool cu_possible = lc.cu_y * c.y1 - lc.cu_x * c.x0 >= lc.cu_rhs;
      const bool d2d_possible = lc.d2d_x * c.x1 - lc.d2d_y * c.y0 >= lc.d2d_rhs;
      if (!cu_possible || !d2d_possible) continue;
      for (double x : {c.x0, c.x1, 0.5 * (c.x0 + c.x1)})
        for (double y : {c.y0, c.y1, 0.5 * (c.y0 + c.y1)})
          if (x > 0.0 && y > 0.0 && lc.holds(x, y)) return true;
      const double xm = 0.5 * (c.x0 + c.x1);
      const double ym = 0.5 * (c.y0 + c.y1);
      next.push_back({c.x0, xm, c.y0, ym});
      next.push_back({xm, c.x1, c.y0, ym});
      next.push_back({c.x0, xm, ym, c.y1});
      next.push_back({xm, c.x1, ym, c.y1});
    }
    if (next.size() > kMaxCells) next.resize(kMaxCells);
    frontier = std::move(next);
  }
  return false;
}

}  // namespace d2dsim::oracle
