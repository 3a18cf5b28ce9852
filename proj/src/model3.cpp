#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdbp/equilibrium.hpp"
#include "rdbp/numerics.hpp"

namespace rdbp {

std::string_view to_string(Model3Variant v) {
  return v == Model3Variant::as_printed ? "as-printed" : "derivation-consistent";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Model3Terms {
  double fh, fi, fni;
  double ph, pi, pni;
};

class Model3System {
 public:
  Model3System(const SubpopulationSpec& home, const SubpopulationSpec& imm,
               const SubpopulationSpec& newcomer, double phi, double ell, Model3Variant variant)
      : home_(home), imm_(imm), newcomer_(newcomer), phi_(phi), ell_(ell), variant_(variant) {}

  Model3Terms terms(double tau) const {
    return {home_.claims.cdf(tau),         imm_.claims.cdf(tau),
            newcomer_.claims.cdf(tau),     home_.claims.partial_mean(tau),
            imm_.claims.partial_mean(tau), newcomer_.claims.partial_mean(tau)};
  }

  // Positive roots in alpha of the balance equation at tau, ascending.
  //
  // With G = K / (1 + phi a) the balance equation times (1 + phi a) is a
  // quadratic in a.
  std::array<double, 2> alpha_roots(double tau) const {
    const Model3Terms t = terms(tau);
    if (!(t.fh > 0.0)) return {kNaN, kNaN};
    const double a1 = home_.m() * t.ph - home_.r();
    const double b1 = (1.0 - phi_) * (imm_.m() * t.pi - imm_.r());
    const double k = t.fni * newcomer_.m() * ell_ / (t.fh * home_.m());
    const double g = arrival_child_consumption(t) - newcomer_.r();
    const double qa = a1 * phi_ * phi_ + b1 * phi_;
    const double qb = 2.0 * a1 * phi_ + b1 + ell_ * t.pni * phi_;
    const double qc = a1 + k * g + ell_ * t.pni;
    std::array<double, 2> roots{kNaN, kNaN};
    if (qa == 0.0) {
      if (qb != 0.0) roots[0] = -qc / qb;
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) return roots;
      const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
      roots[0] = q / qa;
      roots[1] = q != 0.0 ? qc / q : kNaN;
      if (roots[1] < roots[0]) std::swap(roots[0], roots[1]);
    }
    for (double& r : roots) {
      if (!(r > 0.0) || !std::isfinite(r)) r = kNaN;
    }
    return roots;
  }

  double home_multiplier(double tau, double alpha) const {
    return home_.m() * (1.0 + phi_ * alpha) * home_.claims.cdf(tau);
  }

  double imm_multiplier(double tau, double alpha) const {
    const Model3Terms t = terms(tau);
    const double g_ni = arrival_factor(t, alpha);
    const double extra = variant_ == Model3Variant::as_printed ? g_ni : g_ni / alpha;
    return t.fi * (imm_.m() * (1.0 - phi_) + extra);
  }

  // Limiting balance equation, lhs minus rhs.
  double balance(double tau, double alpha) const {
    const Model3Terms t = terms(tau);
    const double g_ni = arrival_factor(t, alpha);
    const double imm_coeff = variant_ == Model3Variant::as_printed
                                 ? imm_.m() * ((1.0 - phi_) * alpha + g_ni)
                                 : imm_.m() * (1.0 - phi_) * alpha + g_ni;
    const double lhs = home_.m() * (1.0 + phi_ * alpha) * t.ph + imm_coeff * t.pi + ell_ * t.pni;
    const double rhs = home_.r() * (1.0 + phi_ * alpha) + imm_.r() * (1.0 - phi_) * alpha +
                       newcomer_.r() * g_ni;
    return lhs - rhs;
  }

  EquilibriumCandidate candidate(double tau, double alpha) const {
    EquilibriumCandidate c;
    c.model = "III";
    c.phi = phi_;
    c.ell_ni = ell_;
    c.tau = tau;
    c.alpha = alpha;
    c.lambda = home_multiplier(tau, alpha);
    c.residual_eq = std::abs(balance(tau, alpha));
    c.residual_constraint = std::abs(c.lambda - imm_multiplier(tau, alpha));
    const double home_balance = home_.r() - home_.m() * home_.claims.partial_mean(tau);
    c.classification = home_balance > 1e-9    ? Classification::home_net_contributor
                       : home_balance < -1e-9 ? Classification::immigrant_net_contributor
                                              : Classification::perfect_self_sufficiency;
    c.criticality = std::abs(c.lambda - 1.0) <= kCriticalTolerance ? Criticality::critical
                                                                    : Criticality::supercritical;
    return c;
  }

 private:
  double arrival_factor(const Model3Terms& t, double alpha) const {
    if (ell_ == 0.0) return 0.0;
    return t.fni * newcomer_.m() * ell_ / (t.fh * home_.m() * (1.0 + phi_ * alpha));
  }

  double arrival_child_consumption(const Model3Terms& t) const {
    return variant_ == Model3Variant::as_printed ? imm_.m() * t.pi : t.pi;
  }

  const SubpopulationSpec& home_;
  const SubpopulationSpec& imm_;
  const SubpopulationSpec& newcomer_;
  double phi_;
  double ell_;
  Model3Variant variant_;
};

}  // namespace

std::vector<EquilibriumCandidate> solve_model3(const SubpopulationSpec& home,
                                               const SubpopulationSpec& imm,
                                               const SubpopulationSpec& newcomer, double phi,
                                               double ell, Model3Variant variant) {
  if (!(phi >= 0.0) || !(phi < 1.0)) throw std::invalid_argument("phi must lie in [0, 1)");
  if (!(ell >= 0.0) || !std::isfinite(ell)) throw std::invalid_argument("ell_ni must be >= 0");
  const Model3System sys(home, imm, newcomer, phi, ell, variant);
  const double lo = std::min({0.0, home.claims.lo(), imm.claims.lo(), newcomer.claims.lo()});
  const double hi = std::max({home.claims.hi(), imm.claims.hi(), newcomer.claims.hi()});

  std::vector<EquilibriumCandidate> out;
  for (std::size_t branch = 0; branch < 2; ++branch) {
    const auto gap = [&](double tau) {
      const double alpha = sys.alpha_roots(tau)[branch];
      if (!std::isfinite(alpha)) return kNaN;
      return sys.home_multiplier(tau, alpha) - sys.imm_multiplier(tau, alpha);
    };
    for (double tau : numerics::scan_roots(gap, lo, hi, kRootScanPoints)) {
      const double alpha = sys.alpha_roots(tau)[branch];
      if (!std::isfinite(alpha)) continue;
      EquilibriumCandidate c = sys.candidate(tau, alpha);
      if (c.lambda < 1.0 - kCriticalTolerance) continue;
      if (c.residual_eq >= kResidualTolerance || c.residual_constraint >= kResidualTolerance) {
        continue;
      }
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.tau < b.tau; });
  return out;
}

}  // namespace rdbp
