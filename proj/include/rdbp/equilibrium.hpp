#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdbp/population.hpp"

namespace rdbp {

enum class Classification { perfect_self_sufficiency, home_net_contributor, immigrant_net_contributor };
/// constraint_unmet marks fixed-pair rows whose (alpha, phi) were imposed
/// rather than solved, so the multiplier constraint holds only approximately.
enum class Criticality { supercritical, critical, constraint_unmet };

std::string_view to_string(Classification c);
std::string_view to_string(Criticality c);

struct EquilibriumCandidate {
  std::string model;
  double phi = 0.0;
  double ell_ni = 0.0;
  double tau = 0.0;
  /// Empty means "unconstrained" (perfect self-sufficiency, alpha is 0/0).
  std::optional<double> alpha;
  double lambda = 0.0;
  Classification classification = Classification::perfect_self_sufficiency;
  Criticality criticality = Criticality::supercritical;
  double residual_eq = 0.0;
  double residual_constraint = 0.0;
  /// Set when tau sits on an atom of a claim law; the value is the fraction
  /// of that atom's claims that are served.
  std::optional<double> atom_fill;
};

inline constexpr std::size_t kRootScanPoints = 4096;
inline constexpr double kResidualTolerance = 1e-8;
inline constexpr double kCriticalTolerance = 1e-9;

struct ScarcityCheck {
  bool holds = false;
  /// sum m_k mu_k - sum r_k
  double margin = 0.0;
};

ScarcityCheck scarcity_check(std::span<const SubpopulationSpec> specs);

struct TauSolution {
  double tau = 0.0;
  double effective_rate = 0.0;
  bool saturated = false;
};

/// tau = inf{t : Phi(t) >= r/m}; effective rate m F(tau).
TauSolution solve_tau_single(double m, double r, const ClaimDistribution& d);

struct RateSensitivity {
  double derivative = 0.0;
  bool saturated = false;
};

/// Central difference of m F(tau(r, m)) in r with step 1e-6 max(1, r).
RateSensitivity rate_sensitivity(double m, double r, const ClaimDistribution& d);

/// A zero of m_h F_h - m_i F_i with the ingredients of the alpha formula.
struct ConstraintRoot {
  double tau = 0.0;
  double lambda = 0.0;
  double numerator = 0.0;    // r_h - m_h Phi_h(tau)
  double denominator = 0.0;  // m_i Phi_i(tau) - r_i
  std::string verdict;       // "accepted" or the rejection reason
};

/// Every constraint root of the two-class model, kept or not.
std::vector<ConstraintRoot> model1_constraint_roots(const SubpopulationSpec& home,
                                                    const SubpopulationSpec& imm);

/// Equilibrium candidates of the two-class model without integration,
/// ascending in tau.
std::vector<EquilibriumCandidate> solve_model1(const SubpopulationSpec& home,
                                               const SubpopulationSpec& imm);

/// Sign of the home balance r_h - m_h Phi_h(tau); throws std::logic_error if
/// the alpha formula's numerator and denominator disagree in sign.
Classification classify_candidate(const EquilibriumCandidate& c, const SubpopulationSpec& home,
                                  const SubpopulationSpec& imm);

enum class Model2Mode { given_phi, given_alpha, fixed_pair };

struct Model2Request {
  Model2Mode mode = Model2Mode::given_phi;
  double phi = 0.0;
  double alpha = 0.0;
};

/// Candidates with integration fraction phi.
///
/// given_phi eliminates alpha through the multiplier constraint, given_alpha
/// eliminates phi the same way, fixed_pair keeps both and solves the balance
/// equation for tau alone (reporting the constraint residual it leaves).
std::vector<EquilibriumCandidate> solve_model2(const SubpopulationSpec& home,
                                               const SubpopulationSpec& imm,
                                               const Model2Request& request);

/// alpha(phi, tau) solving the integrated balance equation; empty near a
/// vanishing denominator.
std::optional<double> model2_alpha(const SubpopulationSpec& home, const SubpopulationSpec& imm,
                                   double phi, double tau);

struct SurfaceRow {
  double phi = 0.0;
  double tau = 0.0;
  double z1 = 1.0;
  double z2 = 0.0;
  double z3 = 0.0;
  std::optional<double> alpha;
};

/// Grid of both multiplier surfaces for fixed alpha plus the alpha surface,
/// phi in [0, 1] and tau over the joint support, endpoints included.
std::vector<SurfaceRow> constraint_surface(const SubpopulationSpec& home,
                                           const SubpopulationSpec& imm, double alpha,
                                           std::size_t phi_steps, std::size_t tau_steps);

enum class Model3Variant { as_printed, derivation_consistent };

std::string_view to_string(Model3Variant v);

/// Candidates with integration and a proportional arrival stream of limit ell.
std::vector<EquilibriumCandidate> solve_model3(const SubpopulationSpec& home,
                                               const SubpopulationSpec& imm,
                                               const SubpopulationSpec& newcomer, double phi,
                                               double ell, Model3Variant variant);

/// Per-level offspring means for claims listed at threshold level u.
struct LevelMeans {
  std::vector<double> home;
  std::vector<double> imm;
};

/// Two-class model with claims listed at the largest threshold below them.
///
/// Claims are served level by level; the level on the acceptance boundary is
/// served fractionally with the same fraction in both classes.
std::vector<EquilibriumCandidate> solve_quantized_model1(const SubpopulationSpec& home,
                                                         const SubpopulationSpec& imm,
                                                         std::span<const double> thresholds,
                                                         const LevelMeans& means);

struct QuantizedSingle {
  double tau = 0.0;
  double fill = 0.0;
  double effective_rate = 0.0;
  bool saturated = false;
};

/// One class with quantized claims: the largest served position whose listed
/// consumption stays within r.
QuantizedSingle solve_quantized_single(const ClaimDistribution& claims, double r,
                                       std::span<const double> thresholds,
                                       std::span<const double> level_means);

}  // namespace rdbp
