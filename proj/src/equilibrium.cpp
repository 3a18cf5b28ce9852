#include "rdbp/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdbp/numerics.hpp"

namespace rdbp {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::perfect_self_sufficiency: return "perfect-self-sufficiency";
    case Classification::home_net_contributor: return "home-net-contributor";
    case Classification::immigrant_net_contributor: return "immigrant-net-contributor";
  }
  return "unknown";
}

std::string_view to_string(Criticality c) {
  switch (c) {
    case Criticality::supercritical: return "supercritical";
    case Criticality::critical: return "critical";
    case Criticality::constraint_unmet: return "constraint-unmet";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBalanceTolerance = 1e-9;

struct Support {
  double lo;
  double hi;
};

Support joint_support(const SubpopulationSpec& a, const SubpopulationSpec& b) {
  return {std::min({0.0, a.claims.lo(), b.claims.lo()}), std::max(a.claims.hi(), b.claims.hi())};
}

Criticality criticality_of(double lambda) {
  return std::abs(lambda - 1.0) <= kCriticalTolerance ? Criticality::critical
                                                      : Criticality::supercritical;
}

Classification classify_balance(double home_balance) {
  if (home_balance > kBalanceTolerance) return Classification::home_net_contributor;
  if (home_balance < -kBalanceTolerance) return Classification::immigrant_net_contributor;
  return Classification::perfect_self_sufficiency;
}

// (1 + phi a)(m_h Phi_h - r_h) + a (1 - phi)(m_i Phi_i - r_i)
double model2_balance(const SubpopulationSpec& home, const SubpopulationSpec& imm, double phi,
                      double alpha, double tau) {
  const double lhs = home.m() * (1.0 + phi * alpha) * home.claims.partial_mean(tau) +
                     imm.m() * alpha * (1.0 - phi) * imm.claims.partial_mean(tau);
  const double rhs = home.r() + imm.r() * alpha + phi * alpha * (home.r() - imm.r());
  return lhs - rhs;
}

double model2_z2(const SubpopulationSpec& home, double phi, double alpha, double tau) {
  return home.m() * (1.0 + alpha * phi) * home.claims.cdf(tau);
}

double model2_z3(const SubpopulationSpec& imm, double phi, double tau) {
  return imm.m() * (1.0 - phi) * imm.claims.cdf(tau);
}

EquilibriumCandidate model2_candidate(const SubpopulationSpec& home, const SubpopulationSpec& imm,
                                      double phi, double alpha, double tau) {
  EquilibriumCandidate c;
  c.model = "II";
  c.phi = phi;
  c.tau = tau;
  c.alpha = alpha;
  c.lambda = model2_z2(home, phi, alpha, tau);
  c.residual_eq = std::abs(model2_balance(home, imm, phi, alpha, tau));
  c.residual_constraint = std::abs(c.lambda - model2_z3(imm, phi, tau));
  c.classification = classify_balance(home.r() - home.m() * home.claims.partial_mean(tau));
  c.criticality = criticality_of(c.lambda);
  return c;
}

bool admissible(const EquilibriumCandidate& c) {
  return c.alpha && std::isfinite(*c.alpha) && *c.alpha > 0.0 &&
         c.lambda >= 1.0 - kCriticalTolerance && c.residual_eq < kResidualTolerance &&
         c.residual_constraint < kResidualTolerance;
}

std::vector<EquilibriumCandidate> model2_given_phi(const SubpopulationSpec& home,
                                                   const SubpopulationSpec& imm, double phi) {
  const auto alpha_of = [&](double tau) {
    const double fh = home.claims.cdf(tau);
    if (!(fh > 0.0)) return kNaN;
    return (imm.m() * (1.0 - phi) * imm.claims.cdf(tau) - home.m() * fh) / (home.m() * phi * fh);
  };
  // Only alpha > 0 can yield a candidate; masking the rest also keeps
  // degenerate stretches (identical classes force alpha = -1, where the
  // balance vanishes identically) out of the scan.
  const auto residual = [&](double tau) {
    const double a = alpha_of(tau);
    return std::isfinite(a) && a > 0.0 ? model2_balance(home, imm, phi, a, tau) : kNaN;
  };
  const Support s = joint_support(home, imm);
  std::vector<EquilibriumCandidate> out;
  for (double tau : numerics::scan_roots(residual, s.lo, s.hi, kRootScanPoints)) {
    EquilibriumCandidate c = model2_candidate(home, imm, phi, alpha_of(tau), tau);
    if (admissible(c)) out.push_back(c);
  }
  return out;
}

std::vector<EquilibriumCandidate> model2_given_alpha(const SubpopulationSpec& home,
                                                     const SubpopulationSpec& imm, double alpha) {
  // The multiplier constraint is linear in phi, so phi follows from tau.
  const auto phi_of = [&](double tau) {
    const double zh = home.m() * home.claims.cdf(tau);
    const double zi = imm.m() * imm.claims.cdf(tau);
    const double den = alpha * zh + zi;
    if (!(den > 0.0)) return kNaN;
    const double phi = (zi - zh) / den;
    return phi >= 0.0 && phi < 1.0 ? phi : kNaN;
  };
  const auto residual = [&](double tau) {
    const double phi = phi_of(tau);
    return std::isfinite(phi) ? model2_balance(home, imm, phi, alpha, tau) : kNaN;
  };
  const Support s = joint_support(home, imm);
  std::vector<EquilibriumCandidate> out;
  for (double tau : numerics::scan_roots(residual, s.lo, s.hi, kRootScanPoints)) {
    EquilibriumCandidate c = model2_candidate(home, imm, phi_of(tau), alpha, tau);
    if (admissible(c)) out.push_back(c);
  }
  return out;
}

std::vector<EquilibriumCandidate> model2_fixed_pair(const SubpopulationSpec& home,
                                                    const SubpopulationSpec& imm, double phi,
                                                    double alpha) {
  const auto residual = [&](double tau) { return model2_balance(home, imm, phi, alpha, tau); };
  const Support s = joint_support(home, imm);
  std::vector<EquilibriumCandidate> out;
  for (double tau : numerics::scan_roots(residual, s.lo, s.hi, kRootScanPoints)) {
    EquilibriumCandidate c = model2_candidate(home, imm, phi, alpha, tau);
    if (c.residual_constraint >= kResidualTolerance) c.criticality = Criticality::constraint_unmet;
    if (c.residual_eq < kResidualTolerance) out.push_back(c);
  }
  return out;
}

}  // namespace

ScarcityCheck scarcity_check(std::span<const SubpopulationSpec> specs) {
  double claims = 0.0;
  double production = 0.0;
  for (const auto& s : specs) {
    claims += s.m() * s.claims.mean();
    production += s.r();
  }
  ScarcityCheck out;
  out.margin = claims - production;
  out.holds = production <= claims;
  return out;
}

TauSolution solve_tau_single(double m, double r, const ClaimDistribution& d) {
  if (!(m > 0.0)) throw std::invalid_argument("mean reproduction m must be positive");
  if (!(r >= 0.0)) throw std::invalid_argument("production r must be nonnegative");
  TauSolution out;
  const double target = r / m;
  if (target > d.mean()) {
    out.tau = d.hi();
    out.effective_rate = m;
    out.saturated = true;
    return out;
  }
  out.tau = numerics::infimum_crossing([&](double t) { return d.partial_mean(t); }, target,
                                       std::min(0.0, d.lo()), d.hi(), 0.0)
                .root;
  out.effective_rate = m * d.cdf(out.tau);
  return out;
}

RateSensitivity rate_sensitivity(double m, double r, const ClaimDistribution& d) {
  const double h = 1e-6 * std::max(1.0, r);
  const TauSolution centre = solve_tau_single(m, r, d);
  const TauSolution up = solve_tau_single(m, r + h, d);
  RateSensitivity out;
  if (centre.saturated || up.saturated) {
    out.saturated = true;
    return out;
  }
  if (r - h < 0.0) {
    out.derivative = (up.effective_rate - centre.effective_rate) / h;
  } else {
    const TauSolution down = solve_tau_single(m, r - h, d);
    out.derivative = (up.effective_rate - down.effective_rate) / (2.0 * h);
  }
  return out;
}

std::vector<ConstraintRoot> model1_constraint_roots(const SubpopulationSpec& home,
                                                    const SubpopulationSpec& imm) {
  const auto delta = [&](double t) {
    return home.m() * home.claims.cdf(t) - imm.m() * imm.claims.cdf(t);
  };
  const Support s = joint_support(home, imm);
  std::vector<ConstraintRoot> out;

  // Coinciding multiplier curves leave tau to the balance equations alone.
  bool identical = true;
  for (double t : numerics::linspace(s.lo, s.hi, kRootScanPoints)) {
    if (std::abs(delta(t)) > 1e-14 * std::max(home.m(), imm.m())) {
      identical = false;
      break;
    }
  }
  std::vector<double> taus;
  if (identical) {
    const TauSolution th = solve_tau_single(home.m(), home.r(), home.claims);
    taus.push_back(th.tau);
  } else {
    taus = numerics::scan_roots(delta, s.lo, s.hi, kRootScanPoints);
  }

  for (double tau : taus) {
    ConstraintRoot root;
    root.tau = tau;
    root.lambda = home.m() * home.claims.cdf(tau);
    root.numerator = home.r() - home.m() * home.claims.partial_mean(tau);
    root.denominator = imm.m() * imm.claims.partial_mean(tau) - imm.r();
    const bool perfect = std::abs(root.numerator) < kBalanceTolerance &&
                         std::abs(root.denominator) < kBalanceTolerance;
    if (root.lambda < 1.0 - kCriticalTolerance) {
      root.verdict = "rejected: multiplier below 1";
    } else if (perfect) {
      root.verdict = "accepted";
    } else if (identical) {
      root.verdict = "rejected: multiplier curves coincide, balance not shared";
    } else if (root.denominator == 0.0) {
      root.verdict = "rejected: alpha undefined";
    } else {
      const double alpha = root.numerator / root.denominator;
      root.verdict = alpha > 0.0 && std::isfinite(alpha) ? "accepted" : "rejected: alpha not positive";
    }
    out.push_back(root);
  }
  return out;
}

std::vector<EquilibriumCandidate> solve_model1(const SubpopulationSpec& home,
                                               const SubpopulationSpec& imm) {
  std::vector<EquilibriumCandidate> out;
  for (const ConstraintRoot& root : model1_constraint_roots(home, imm)) {
    if (root.verdict != "accepted") continue;
    EquilibriumCandidate c;
    c.model = "I";
    c.tau = root.tau;
    c.lambda = root.lambda;
    c.criticality = criticality_of(c.lambda);
    c.residual_constraint =
        std::abs(root.lambda - imm.m() * imm.claims.cdf(root.tau));
    const double phi_h = home.claims.partial_mean(root.tau);
    const double phi_i = imm.claims.partial_mean(root.tau);
    if (std::abs(root.numerator) < kBalanceTolerance &&
        std::abs(root.denominator) < kBalanceTolerance) {
      c.residual_eq = std::max(std::abs(root.numerator), std::abs(root.denominator));
    } else {
      c.alpha = root.numerator / root.denominator;
      c.residual_eq = std::abs(home.m() * phi_h + *c.alpha * imm.m() * phi_i - home.r() -
                               *c.alpha * imm.r());
    }
    if (c.residual_eq >= kResidualTolerance || c.residual_constraint >= kResidualTolerance) {
      continue;
    }
    c.classification = classify_candidate(c, home, imm);
    out.push_back(c);
  }
  return out;
}

Classification classify_candidate(const EquilibriumCandidate& c, const SubpopulationSpec& home,
                                  const SubpopulationSpec& imm) {
  const double num = home.r() - home.m() * home.claims.partial_mean(c.tau);
  if (c.model == "I") {
    const double den = imm.m() * imm.claims.partial_mean(c.tau) - imm.r();
    const bool num_zero = std::abs(num) < kBalanceTolerance;
    const bool den_zero = std::abs(den) < kBalanceTolerance;
    if (num_zero != den_zero || (!num_zero && std::signbit(num) != std::signbit(den))) {
      throw std::logic_error("candidate balance terms disagree in sign");
    }
  }
  return classify_balance(num);
}

std::vector<EquilibriumCandidate> solve_model2(const SubpopulationSpec& home,
                                               const SubpopulationSpec& imm,
                                               const Model2Request& request) {
  const auto check_phi = [&] {
    if (!(request.phi >= 0.0) || !(request.phi < 1.0)) {
      throw std::invalid_argument("phi must lie in [0, 1)");
    }
  };
  const auto check_alpha = [&] {
    if (!(request.alpha > 0.0) || !std::isfinite(request.alpha)) {
      throw std::invalid_argument("alpha must be positive and finite");
    }
  };
  switch (request.mode) {
    case Model2Mode::given_phi: {
      check_phi();
      if (request.phi == 0.0) {
        auto out = solve_model1(home, imm);
        for (auto& c : out) c.model = "II";
        return out;
      }
      return model2_given_phi(home, imm, request.phi);
    }
    case Model2Mode::given_alpha:
      check_alpha();
      return model2_given_alpha(home, imm, request.alpha);
    case Model2Mode::fixed_pair:
      check_phi();
      check_alpha();
      return model2_fixed_pair(home, imm, request.phi, request.alpha);
  }
  return {};
}

std::optional<double> model2_alpha(const SubpopulationSpec& home, const SubpopulationSpec& imm,
                                   double phi, double tau) {
  const double ph = home.claims.partial_mean(tau);
  const double pi = imm.claims.partial_mean(tau);
  const double num = home.r() - home.m() * ph;
  const double den = phi * home.m() * ph + (1.0 - phi) * imm.m() * pi - imm.r() +
                     phi * (imm.r() - home.r());
  if (std::abs(den) < 1e-6) return std::nullopt;
  return num / den;
}

std::vector<SurfaceRow> constraint_surface(const SubpopulationSpec& home,
                                           const SubpopulationSpec& imm, double alpha,
                                           std::size_t phi_steps, std::size_t tau_steps) {
  if (phi_steps < 2 || tau_steps < 2) throw std::invalid_argument("surface grid must be at least 2x2");
  const Support s = joint_support(home, imm);
  std::vector<SurfaceRow> out;
  out.reserve(phi_steps * tau_steps);
  for (double phi : numerics::linspace(0.0, 1.0, phi_steps)) {
    for (double tau : numerics::linspace(s.lo, s.hi, tau_steps)) {
      SurfaceRow row;
      row.phi = phi;
      row.tau = tau;
      row.z2 = model2_z2(home, phi, alpha, tau);
      row.z3 = model2_z3(imm, phi, tau);
      row.alpha = model2_alpha(home, imm, phi, tau);
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace rdbp
