#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "d2dsim/geometry_channel.hpp"
#include "d2dsim/qos.hpp"

namespace d2dsim {

struct PowerLimits {
  double p_max_cu_mw = 0.0;
  double p_max_d2d_mw = 0.0;
  double noise_mw = 0.0;

  void validate() const;
};

/// The four gains that couple CU i and D2D pair j on a shared channel.
struct PairGains {
  double g_cu_bs = 0.0;   // g_{i,B}
  double g_d2d = 0.0;     // g_j
  double h_cu_d2d = 0.0;  // h_{i,j}
  double h_d2d_bs = 0.0;  // h_{j,B}
};

PairGains pair_gains(const GainTable& gains, std::size_t cu, std::size_t d2d);

struct SinrThresholds {
  double cu = 0.0;
  double d2d = 0.0;
};

inline SinrThresholds thresholds(const QosSpec& q) { return {q.sinr_min_cu, q.sinr_min_d2d}; }

struct PowerPair {
  double p_cu_mw = 0.0;
  double p_d2d_mw = 0.0;
  double sum_rate_bpshz = 0.0;
};

/// Point A: both minimum-SINR constraints hold with equality.
struct FeasiblePoint {
  double p_cu_A_mw = 0.0;
  double p_d2d_A_mw = 0.0;
};

struct ReuseCandidate {
  std::size_t cu = 0;
  PowerPair power;
};

// Candidate lists indexed by D2D pair j; entries sorted by CU index.
using CandidateSets = std::vector<std::vector<ReuseCandidate>>;

double cu_sinr(const PairGains& g, double p_cu_mw, double p_d2d_mw, double noise_mw);
double d2d_sinr(const PairGains& g, double p_cu_mw, double p_d2d_mw, double noise_mw);
double pair_sum_rate(const PairGains& g, double p_cu_mw, double p_d2d_mw, double noise_mw);

/// CU rate with the channel to itself at full power.
double cu_solo_rate(double g_cu_bs, const PowerLimits& limits);

/// Minimum powers on the axes (no interference from the partner).
double min_cu_power(const PairGains& g, const SinrThresholds& t, double noise_mw);
double min_d2d_power(const PairGains& g, const SinrThresholds& t, double noise_mw);

/// True iff the D2D boundary line is steeper than the CU boundary line,
/// i.e. g_j g_{i,B} - eps_c eps_d h_{i,j} h_{j,B} > 0 (strict).
bool slope_condition(const PairGains& g, const SinrThresholds& t);

/// Intersection of the two boundary lines. nullopt when the lines do not
/// meet in the positive quadrant.
std::optional<FeasiblePoint> intersection_point(const PairGains& g, const SinrThresholds& t,
                                                double noise_mw);

/// Point A when the pair is a reuse candidate: the intersection exists and
/// lies inside the (P_max^c, P_max^d) box.
std::optional<FeasiblePoint> admissible_point(const PairGains& g, const SinrThresholds& t,
                                              const PowerLimits& limits);

class AllocationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Sum-rate maximising powers for an admissible pair. The optimum sits on a
/// vertex of the feasible region with at least one power at its maximum;
/// the vertex set is the max-power corner, the two points where a boundary
/// line crosses a max-power edge, and their clipped counterparts when the
/// crossing lies outside the box. Ties go to the larger CU power.
/// Throws AllocationError if no vertex is feasible (pair not admissible).
PowerPair optimal_power(const PairGains& g, const SinrThresholds& t, const PowerLimits& limits);

/// Admission plus power optimisation for every (CU, D2D) pair.
CandidateSets reuse_candidates(const GainTable& gains, const SinrThresholds& t,
                               const PowerLimits& limits);

/// Relative slack used when testing points that lie on a constraint line.
inline constexpr double kSinrRelTol = 1e-9;

bool satisfies_constraints(const PairGains& g, const SinrThresholds& t,
                           const PowerLimits& limits, double p_cu_mw, double p_d2d_mw,
                           double rel_tol = kSinrRelTol);

}  // namespace d2dsim
