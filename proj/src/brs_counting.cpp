#include "rdbp/brs_counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rdbp/numerics.hpp"
#include "rdbp/parallel.hpp"

namespace rdbp {
namespace {

void check_inputs(std::span<const double> claims, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("resource pool s must be nonnegative");
  for (double c : claims) {
    if (!(c >= 0.0)) throw std::invalid_argument("claims must be nonnegative");
  }
}

}  // namespace

WfResult wf_count(std::span<const double> claims, double s) {
  check_inputs(claims, s);
  WfResult out;
  out.accepted.assign(claims.size(), false);
  std::vector<std::size_t> order(claims.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return claims[a] < claims[b]; });
  double sum = 0.0;
  for (std::size_t idx : order) {
    if (sum + claims[idx] > s) break;
    sum += claims[idx];
    out.accepted[idx] = true;
    out.threshold = claims[idx];
    ++out.count;
  }
  out.consumed = sum;
  return out;
}

WfResult wf_select(std::span<const double> claims, double s) {
  check_inputs(claims, s);
  WfResult out;
  out.accepted.assign(claims.size(), false);
  std::vector<std::uint32_t> idx(claims.size());
  std::iota(idx.begin(), idx.end(), std::uint32_t{0});
  // (claim, index) order reproduces the stable sort of wf_count.
  const auto less = [&](std::uint32_t a, std::uint32_t b) {
    return claims[a] < claims[b] || (claims[a] == claims[b] && a < b);
  };

  auto first = idx.begin();
  auto last = idx.end();
  double consumed = 0.0;
  while (last - first > 32) {
    auto mid = first + (last - first) / 2;
    std::nth_element(first, mid, last, less);
    double lower = 0.0;
    for (auto it = first; it != mid; ++it) lower += claims[*it];
    if (consumed + lower <= s) {
      consumed += lower;
      for (auto it = first; it != mid; ++it) out.accepted[*it] = true;
      out.count += static_cast<std::size_t>(mid - first);
      first = mid;
    } else {
      last = mid;
    }
  }
  std::sort(first, last, less);
  for (auto it = first; it != last; ++it) {
    if (consumed + claims[*it] > s) break;
    consumed += claims[*it];
    out.accepted[*it] = true;
    ++out.count;
  }
  for (std::size_t k = 0; k < claims.size(); ++k) {
    if (out.accepted[k]) out.threshold = std::max(out.threshold, claims[k]);
  }
  out.consumed = consumed;
  return out;
}

std::size_t sf_count(std::span<const double> claims, double s) {
  check_inputs(claims, s);
  std::vector<double> sorted(claims.begin(), claims.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::size_t k = 0;
  double sum = 0.0;
  for (double c : sorted) {
    if (sum + c > s) break;
    sum += c;
    ++k;
  }
  return k;
}

BoundResult solve_bound_tau(std::span<const ClaimDistribution> marginals, double s) {
  if (marginals.empty()) throw std::invalid_argument("solve_bound_tau needs marginals");
  if (!(s >= 0.0)) throw std::invalid_argument("resource pool s must be nonnegative");
  BoundResult out;
  double lo = marginals.front().lo();
  double hi = marginals.front().hi();
  double total_mean = 0.0;
  for (const auto& d : marginals) {
    lo = std::min(lo, d.lo());
    hi = std::max(hi, d.hi());
    total_mean += d.mean();
  }
  lo = std::min(lo, 0.0);
  const auto phi = [&](double t) {
    double v = 0.0;
    for (const auto& d : marginals) v += d.partial_mean(t);
    return v;
  };
  if (s >= total_mean) {
    out.tau = hi;
    out.saturated = true;
  } else {
    out.tau = numerics::infimum_crossing(phi, s, lo, hi, 0.0).root;
  }
  for (const auto& d : marginals) {
    out.per_marginal_terms.push_back(d.cdf(out.tau));
    out.bound += out.per_marginal_terms.back();
  }
  if (out.saturated) out.bound = static_cast<double>(marginals.size());
  return out;
}

McEstimate mc_expected_count(std::span<const ClaimDistribution> marginals, double s,
                             std::size_t reps, std::uint64_t seed) {
  if (reps == 0) throw std::invalid_argument("mc_expected_count needs reps >= 1");
  std::vector<double> counts(reps);
  parallel_for(reps, [&](std::size_t r) {
    RngStream stream = RngStream::substream(seed, r);
    std::vector<double> claims;
    claims.reserve(marginals.size());
    for (const auto& d : marginals) claims.push_back(d.sample(stream));
    counts[r] = static_cast<double>(wf_count(claims, s).count);
  });
  double mean = 0.0;
  for (double c : counts) mean += c;
  mean /= static_cast<double>(reps);
  double ss = 0.0;
  for (double c : counts) ss += (c - mean) * (c - mean);
  McEstimate out;
  out.estimate = mean;
  if (reps > 1) {
    out.standard_error = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return out;
}

double asymptotic_ratio(const ClaimDistribution& dist, std::size_t n, double s,
                        std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("asymptotic_ratio needs n >= 1");
  RngStream stream(seed);
  std::vector<double> claims(n);
  for (double& c : claims) c = dist.sample(stream);
  const std::size_t count = wf_select(claims, s).count;
  const double tau = dist.partial_mean(dist.hi()) * static_cast<double>(n) <= s
                         ? dist.hi()
                         : numerics::infimum_crossing(
                               [&](double t) { return static_cast<double>(n) * dist.partial_mean(t); },
                               s, std::min(0.0, dist.lo()), dist.hi(), 0.0)
                               .root;
  return static_cast<double>(count) / (static_cast<double>(n) * dist.cdf(tau));
}

}  // namespace rdbp
