#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdbp/equilibrium.hpp"

namespace rdbp {
namespace {

void check_thresholds(std::span<const double> thresholds) {
  if (thresholds.empty() || thresholds.front() != 0.0) {
    throw std::invalid_argument("thresholds must start at 0");
  }
  for (std::size_t l = 1; l < thresholds.size(); ++l) {
    if (!(thresholds[l] > thresholds[l - 1])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
  }
}

/// Served consumption and multiplier as functions of the position x in
/// [0, levels]: levels below floor(x) are served whole, level floor(x) in
/// proportion x - floor(x). Both are piecewise linear.
class LevelProfile {
 public:
  LevelProfile(const ClaimDistribution& claims, std::span<const double> thresholds,
               std::span<const double> means, double default_mean) {
    const std::size_t levels = thresholds.size();
    if (!means.empty() && means.size() != levels) {
      throw std::invalid_argument("need one offspring mean per threshold level");
    }
    consumption_.assign(levels + 1, 0.0);
    multiplier_.assign(levels + 1, 0.0);
    for (std::size_t l = 0; l < levels; ++l) {
      const double lower = l == 0 ? 0.0 : claims.cdf_left(thresholds[l]);
      const double upper = l + 1 < levels ? claims.cdf_left(thresholds[l + 1]) : 1.0;
      const double p = std::max(0.0, upper - lower);
      const double m = means.empty() ? default_mean : means[l];
      if (!(m > 0.0)) throw std::invalid_argument("level offspring means must be positive");
      consumption_[l + 1] = consumption_[l] + m * thresholds[l] * p;
      multiplier_[l + 1] = multiplier_[l] + m * p;
    }
  }

  std::size_t levels() const { return consumption_.size() - 1; }
  double consumption(double x) const { return interpolate(consumption_, x); }
  double multiplier(double x) const { return interpolate(multiplier_, x); }
  double consumption_at(std::size_t l) const { return consumption_[l]; }
  double multiplier_at(std::size_t l) const { return multiplier_[l]; }

 private:
  double interpolate(const std::vector<double>& v, double x) const {
    const auto l = std::min(static_cast<std::size_t>(std::floor(x)), levels() - 1);
    const double q = x - static_cast<double>(l);
    return v[l] + q * (v[l + 1] - v[l]);
  }

  std::vector<double> consumption_;
  std::vector<double> multiplier_;
};

}  // namespace

QuantizedSingle solve_quantized_single(const ClaimDistribution& claims, double r,
                                       std::span<const double> thresholds,
                                       std::span<const double> level_means) {
  check_thresholds(thresholds);
  if (level_means.size() != thresholds.size()) {
    throw std::invalid_argument("need one offspring mean per threshold level");
  }
  const LevelProfile profile(claims, thresholds, level_means, 0.0);
  const std::size_t levels = profile.levels();
  QuantizedSingle out;
  if (profile.consumption_at(levels) <= r) {
    out.saturated = true;
    out.tau = thresholds.back();
    out.fill = 1.0;
    out.effective_rate = profile.multiplier_at(levels);
    return out;
  }
  std::size_t l = 0;
  while (l + 1 < levels && profile.consumption_at(l + 1) <= r) ++l;
  const double slope = profile.consumption_at(l + 1) - profile.consumption_at(l);
  out.tau = thresholds[l];
  out.fill = (r - profile.consumption_at(l)) / slope;
  out.effective_rate = profile.multiplier(static_cast<double>(l) + out.fill);
  return out;
}

std::vector<EquilibriumCandidate> solve_quantized_model1(const SubpopulationSpec& home,
                                                         const SubpopulationSpec& imm,
                                                         std::span<const double> thresholds,
                                                         const LevelMeans& means) {
  check_thresholds(thresholds);
  const LevelProfile ph(home.claims, thresholds, means.home, home.m());
  const LevelProfile pi(imm.claims, thresholds, means.imm, imm.m());
  const std::size_t levels = ph.levels();

  std::vector<double> positions;
  for (std::size_t l = 0; l < levels; ++l) {
    const double d0 = ph.multiplier_at(l) - pi.multiplier_at(l);
    const double d1 = ph.multiplier_at(l + 1) - pi.multiplier_at(l + 1);
    if (d0 == 0.0 && d1 == 0.0) {
      // A flat stretch is a single point only if nothing is consumed on it.
      const bool flat = ph.consumption_at(l) == ph.consumption_at(l + 1) &&
                        pi.consumption_at(l) == pi.consumption_at(l + 1);
      if (flat) positions.push_back(static_cast<double>(l));
      continue;
    }
    if (d0 == 0.0) {
      positions.push_back(static_cast<double>(l));
    } else if (std::signbit(d0) != std::signbit(d1) && d1 != 0.0) {
      positions.push_back(static_cast<double>(l) + d0 / (d0 - d1));
    }
    if (l + 1 == levels && d1 == 0.0) positions.push_back(static_cast<double>(levels));
  }

  std::vector<EquilibriumCandidate> out;
  for (double x : positions) {
    EquilibriumCandidate c;
    c.model = "I-quantized";
    const auto l = std::min(static_cast<std::size_t>(std::floor(x)), levels - 1);
    c.tau = thresholds[l];
    c.atom_fill = x - static_cast<double>(l);
    c.lambda = ph.multiplier(x);
    if (c.lambda < 1.0 - kCriticalTolerance) continue;
    c.residual_constraint = std::abs(c.lambda - pi.multiplier(x));
    const double num = home.r() - ph.consumption(x);
    const double den = pi.consumption(x) - imm.r();
    if (std::abs(num) < 1e-9 && std::abs(den) < 1e-9) {
      c.residual_eq = std::max(std::abs(num), std::abs(den));
      c.classification = Classification::perfect_self_sufficiency;
    } else {
      if (den == 0.0) continue;
      const double alpha = num / den;
      if (!(alpha > 0.0) || !std::isfinite(alpha)) continue;
      c.alpha = alpha;
      c.residual_eq = std::abs(ph.consumption(x) + alpha * pi.consumption(x) - home.r() -
                               alpha * imm.r());
      c.classification = num > 1e-9    ? Classification::home_net_contributor
                         : num < -1e-9 ? Classification::immigrant_net_contributor
                                       : Classification::perfect_self_sufficiency;
    }
    if (c.residual_eq >= kResidualTolerance || c.residual_constraint >= kResidualTolerance) {
      continue;
    }
    c.criticality = std::abs(c.lambda - 1.0) <= kCriticalTolerance ? Criticality::critical
                                                                    : Criticality::supercritical;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.tau < b.tau || (a.tau == b.tau && *a.atom_fill < *b.atom_fill);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) {
                          return a.tau == b.tau && *a.atom_fill == *b.atom_fill;
                        }),
            out.end());
  return out;
}

}  // namespace rdbp
