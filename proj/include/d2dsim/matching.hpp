#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "d2dsim/allocation.hpp"

namespace d2dsim {

/// Rate increments Delta_{i,j} for letting D2D j reuse CU i's channel.
/// Pairs outside R_j are masked out entirely rather than given weight 0.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t n_cu, std::size_t n_d2d);

  std::size_t n_cu() const { return n_cu_; }
  std::size_t n_d2d() const { return n_d2d_; }

  double delta(std::size_t cu, std::size_t d2d) const { return delta_[cu * n_d2d_ + d2d]; }
  bool is_candidate(std::size_t cu, std::size_t d2d) const {
    return mask_[cu * n_d2d_ + d2d] != 0;
  }

  void set(std::size_t cu, std::size_t d2d, double delta);
  void exclude(std::size_t cu, std::size_t d2d);

 private:
  std::size_t n_cu_ = 0;
  std::size_t n_d2d_ = 0;
  std::vector<double> delta_;
  std::vector<unsigned char> mask_;
};

struct Assignment {
  std::vector<std::optional<std::size_t>> d2d_to_cu;
  double total_weight_bpshz = 0.0;

  std::size_t served() const;
  std::vector<std::size_t> unserved() const;
};

WeightMatrix build_weights(const CandidateSets& candidates, const GainTable& gains,
                           const PowerLimits& limits);

/// Removes edges with negative increment (ablation of forced unprofitable reuse).
void exclude_unprofitable(WeightMatrix& weights);

/// Optimal matching: serve as many D2D pairs as the candidate sets allow,
/// then maximise the summed increment. Among optima (weights within
/// kMatchWeightTol) returns the lexicographically smallest CU-index vector,
/// an unmatched D2D sorting after every CU. O((N+M)^3) per solve.
Assignment hungarian_match(const WeightMatrix& weights);

class MatchSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kBruteForceMaxD2d = 8;

/// Exhaustive reference for hungarian_match, same objective and tie-break.
/// Throws MatchSizeError for more than kBruteForceMaxD2d D2D pairs.
Assignment brute_force_match(const WeightMatrix& weights);

// Two totals count as the same optimum when within this of each other.
double match_weight_tolerance(double optimum);

/// Sum of increments over the assignment's matched pairs, in D2D order.
double assignment_weight(const WeightMatrix& weights, const Assignment& a);

}  // namespace d2dsim
