#include "d2dsim/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace d2dsim {

WeightMatrix::WeightMatrix(std::size_t n_cu, std::size_t n_d2d)
    : n_cu_(n_cu), n_d2d_(n_d2d), delta_(n_cu * n_d2d, 0.0), mask_(n_cu * n_d2d, 0) {}

void WeightMatrix::set(std::size_t cu, std::size_t d2d, double delta) {
  delta_[cu * n_d2d_ + d2d] = delta;
  mask_[cu * n_d2d_ + d2d] = 1;
}

void WeightMatrix::exclude(std::size_t cu, std::size_t d2d) {
  delta_[cu * n_d2d_ + d2d] = 0.0;
  mask_[cu * n_d2d_ + d2d] = 0;
}

std::size_t Assignment::served() const {
  return static_cast<std::size_t>(
      std::count_if(d2d_to_cu.begin(), d2d_to_cu.end(), [](const auto& c) { return c.has_value(); }));
}

std::vector<std::size_t> Assignment::unserved() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < d2d_to_cu.size(); ++j)
    if (!d2d_to_cu[j]) out.push_back(j);
  return out;
}

WeightMatrix build_weights(const CandidateSets& candidates, const GainTable& gains,
                           const PowerLimits& limits) {
  WeightMatrix w(gains.n_cu(), gains.n_d2d());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    for (const ReuseCandidate& c : candidates[j]) {
      w.set(c.cu, j, c.power.sum_rate_bpshz - cu_solo_rate(gains.g_cu_bs[c.cu], limits));
    }
  }
  return w;
}

void exclude_unprofitable(WeightMatrix& weights) {
  for (std::size_t i = 0; i < weights.n_cu(); ++i)
    for (std::size_t j = 0; j < weights.n_d2d(); ++j)
      if (weights.is_candidate(i, j) && weights.delta(i, j) < 0.0) weights.exclude(i, j);
}

double match_weight_tolerance(double optimum) { return 1e-9 * (1.0 + std::abs(optimum)); }

double assignment_weight(const WeightMatrix& weights, const Assignment& a) {
  double total = 0.0;
  for (std::size_t j = 0; j < a.d2d_to_cu.size(); ++j)
    if (a.d2d_to_cu[j]) total += weights.delta(*a.d2d_to_cu[j], j);
  return total;
}

namespace {

// Lexicographic cost: tier counts unserved D2Ds (and forbidden edges),
// value is the negated increment. Forms an ordered group, which is all the
// Hungarian method needs.
struct LexCost {
  long long tier = 0;
  double value = 0.0;

  friend LexCost operator+(LexCost a, LexCost b) { return {a.tier + b.tier, a.value + b.value}; }
  friend LexCost operator-(LexCost a, LexCost b) { return {a.tier - b.tier, a.value - b.value}; }
  friend bool operator<(LexCost a, LexCost b) {
    return a.tier != b.tier ? a.tier < b.tier : a.value < b.value;
  }
};

constexpr LexCost kInfinity{std::numeric_limits<long long>::max() / 4, 0.0};

struct Solution {
  std::vector<std::size_t> row_to_col;
  std::vector<LexCost> u;  // row potentials
  std::vector<LexCost> v;  // column potentials
  LexCost total;
};

// Minimum-cost assignment of every row to a distinct column, rows <= cols.
// Shortest augmenting path with potentials; cost(r, c) must be total.
template <typename CostFn>
Solution solve_assignment(std::size_t rows, std::size_t cols, CostFn cost) {
  Solution s;
  // 1-based with a virtual column 0, as in the classical formulation.
  std::vector<LexCost> u(rows + 1), v(cols + 1);
  std::vector<std::size_t> col_owner(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t r = 1; r <= rows; ++r) {
    col_owner[0] = r;
    std::size_t c0 = 0;
    std::vector<LexCost> minv(cols + 1, kInfinity);
    std::vector<char> used(cols + 1, 0);
    do {
      used[c0] = 1;
      const std::size_t r0 = col_owner[c0];
      LexCost delta = kInfinity;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= cols; ++c) {
        if (used[c]) continue;
        const LexCost cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= cols; ++c) {
        if (used[c]) {
          u[col_owner[c]] = u[col_owner[c]] + delta;
          v[c] = v[c] - delta;
        } else {
          minv[c] = minv[c] - delta;
        }
      }
      c0 = c1;
    } while (col_owner[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      col_owner[c0] = col_owner[c1];
      c0 = c1;
    } while (c0 != 0);
  }

  s.row_to_col.assign(rows, 0);
  for (std::size_t c = 1; c <= cols; ++c)
    if (col_owner[c] != 0) s.row_to_col[col_owner[c] - 1] = c - 1;
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  for (std::size_t r = 0; r < rows; ++r) s.total = s.total + cost(r, s.row_to_col[r]);
  return s;
}

// Bipartite instance: D2D rows against N CU columns followed by one
// "unserved" column per row.
class MatchProblem {
 public:
  explicit MatchProblem(const WeightMatrix& w)
      : w_(w), forbidden_{static_cast<long long>(w.n_d2d()) + 1, 0.0} {}

  std::size_t n_cu() const { return w_.n_cu(); }
  std::size_t n_d2d() const { return w_.n_d2d(); }

  // Column index >= n_cu means unserved.
  LexCost cost(std::size_t d2d, std::size_t col) const {
    if (col >= n_cu()) return {1, 0.0};
    if (!w_.is_candidate(col, d2d)) return forbidden_;
    return {0, -w_.delta(col, d2d)};
  }

  // Optimal assignment of the given rows over the given columns.
  Solution solve(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
    return solve_assignment(rows.size(), cols.size(),
                            [&](std::size_t r, std::size_t c) { return cost(rows[r], cols[c]); });
  }

 private:
  const WeightMatrix& w_;
  LexCost forbidden_;
};

bool same_optimum(LexCost a, LexCost b) {
  return a.tier == b.tier && std::abs(a.value - b.value) <= match_weight_tolerance(b.value);
}

}  // namespace

Assignment hungarian_match(const WeightMatrix& weights) {
  const MatchProblem problem(weights);
  const std::size_t n = weights.n_cu();
  const std::size_t m = weights.n_d2d();

  Assignment out;
  out.d2d_to_cu.assign(m, std::nullopt);
  if (m == 0) return out;

  std::vector<std::size_t> rows(m), cols(n + m);
  for (std::size_t j = 0; j < m; ++j) rows[j] = j;
  for (std::size_t c = 0; c < n + m; ++c) cols[c] = c;

  Solution current = problem.solve(rows, cols);
  const LexCost optimum = current.total;
  LexCost fixed_cost{};

  // Fix D2Ds in order, each to the smallest CU that still admits an optimal
  // completion. Complementary slackness: with optimal potentials every
  // optimal assignment uses only edges of zero reduced cost, so the rest are
  // skipped without a solve.
  for (std::size_t k = 0; k < m; ++k) {
    // rows/cols describe the residual problem; rows.front() is D2D k.
    const std::size_t chosen_col = cols[current.row_to_col[0]];
    const bool chosen_is_cu = chosen_col < n;
    const std::size_t limit = chosen_is_cu ? chosen_col : n;
    std::optional<std::size_t> replacement;
    Solution replacement_solution;

    for (std::size_t ci = 0; ci < cols.size() && cols[ci] < limit; ++ci) {
      const std::size_t cu = cols[ci];
      if (!weights.is_candidate(cu, k)) continue;
      const LexCost reduced = problem.cost(k, cu) - current.u[0] - current.v[ci];
      if (reduced.tier > 0 || reduced.value > match_weight_tolerance(optimum.value)) continue;

      std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
      std::vector<std::size_t> sub_cols;
      sub_cols.reserve(cols.size() - 1);
      for (std::size_t c : cols)
        if (c != cu) sub_cols.push_back(c);
      Solution sub = problem.solve(sub_rows, sub_cols);
      const LexCost total = fixed_cost + problem.cost(k, cu) + sub.total;
      if (same_optimum(total, optimum)) {
        replacement = cu;
        replacement_solution = std::move(sub);
        break;
      }
    }

    const std::size_t taken = replacement ? *replacement : chosen_col;
    fixed_cost = fixed_cost + problem.cost(k, taken);
    if (taken < n) out.d2d_to_cu[k] = taken;

    rows.erase(rows.begin());
    if (replacement) {
      cols.erase(std::find(cols.begin(), cols.end(), taken));
      current = std::move(replacement_solution);
    } else {
      // Restricting an optimal primal/dual pair to the residual keeps both optimal.
      const std::size_t ci = current.row_to_col[0];
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(ci));
      current.u.erase(current.u.begin());
      current.v.erase(current.v.begin() + static_cast<std::ptrdiff_t>(ci));
      current.row_to_col.erase(current.row_to_col.begin());
      for (std::size_t& c : current.row_to_col)
        if (c > ci) --c;
    }
  }

  out.total_weight_bpshz = assignment_weight(weights, out);
  return out;
}

Assignment brute_force_match(const WeightMatrix& weights) {
  const std::size_t n = weights.n_cu();
  const std::size_t m = weights.n_d2d();
  if (m > kBruteForceMaxD2d) {
    std::ostringstream msg;
    msg << "brute_force_match supports at most " << kBruteForceMaxD2d << " D2D pairs, got " << m;
    throw MatchSizeError(msg.str());
  }

  // Options per D2D in lexicographic order: candidate CUs ascending, then unmatched.
  std::vector<std::optional<std::size_t>> choice(m);
  std::vector<char> cu_used(n, 0);

  auto enumerate = [&](auto&& self, std::size_t j, std::size_t served, double weight,
                       auto&& visit) -> bool {
    if (j == m) return visit(served, weight);
    for (std::size_t i = 0; i < n; ++i) {
      if (cu_used[i] || !weights.is_candidate(i, j)) continue;
      cu_used[i] = 1;
      choice[j] = i;
      const bool stop = self(self, j + 1, served + 1, weight + weights.delta(i, j), visit);
      cu_used[i] = 0;
      if (stop) return true;
    }
    choice[j] = std::nullopt;
    return self(self, j + 1, served, weight, visit);
  };

  std::size_t best_served = 0;
  double best_weight = -std::numeric_limits<double>::infinity();
  enumerate(enumerate, 0, 0, 0.0, [&](std::size_t served, double weight) {
    if (served > best_served || (served == best_served && weight > best_weight)) {
      best_served = served;
      best_weight = weight;
    }
    return false;
  });

  Assignment out;
  out.d2d_to_cu.assign(m, std::nullopt);
  enumerate(enumerate, 0, 0, 0.0, [&](std::size_t served, double weight) {
    if (served == best_served &&
        std::abs(weight - best_weight) <= match_weight_tolerance(best_weight)) {
      out.d2d_to_cu = choice;
      return true;
    }
    return false;
  });
  out.total_weight_bpshz = assignment_weight(weights, out);
  return out;
}

}  // namespace d2dsim
