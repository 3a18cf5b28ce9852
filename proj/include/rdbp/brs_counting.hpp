#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rdbp/distributions.hpp"

namespace rdbp {

/// Outcome of serving claims weakest-first from a pool.
struct WfResult {
  std::size_t count = 0;
  /// accepted[k] is set for claims inside the served prefix; ties between
  /// equal claims go to the lower original index.
  std::vector<bool> accepted;
  /// Largest accepted claim, 0 when nothing is accepted.
  double threshold = 0.0;
  /// Sum of accepted claims.
  double consumed = 0.0;
};

/// Largest k such that the k smallest claims sum to at most s. Sort based.
WfResult wf_count(std::span<const double> claims, double s);

/// Same result as wf_count, computed by recursive partitioning in expected
/// linear time. Used by the simulator on large generations.
WfResult wf_select(std::span<const double> claims, double s);

/// Largest k such that the k largest claims sum to at most s.
std::size_t sf_count(std::span<const double> claims, double s);

struct BoundResult {
  double tau = 0.0;
  double bound = 0.0;
  std::vector<double> per_marginal_terms;
  bool saturated = false;
};

/// tau = inf{t : sum_k Phi_k(t) >= s} and the bound sum_k F_k(tau).
BoundResult solve_bound_tau(std::span<const ClaimDistribution> marginals, double s);

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Mean weakest-first count over `reps` draws of one claim per marginal.
/// Replicate k uses substream (seed, k).
McEstimate mc_expected_count(std::span<const ClaimDistribution> marginals, double s,
                             std::size_t reps, std::uint64_t seed);

/// N(n, s) / (n F(tau(n, s))) for one draw of n i.i.d. claims.
double asymptotic_ratio(const ClaimDistribution& dist, std::size_t n, double s,
                        std::uint64_t seed);

}  // namespace rdbp
