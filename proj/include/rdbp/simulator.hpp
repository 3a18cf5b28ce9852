#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdbp/equilibrium.hpp"
#include "rdbp/population.hpp"
#include "rdbp/rng.hpp"

namespace rdbp {

enum class ModelKind { model1, model2, model3, gw_pair };
enum class StreamKind { none, constant, proportional };
/// causal: arrivals claim on arrival and only the accepted ones reproduce.
/// literal_brs: all arrivals' children are thinned by F_ni(tau_{t-1}).
enum class ArrivalSemantics { causal, literal_brs };
/// Claim law used by the children of arrivals once they join the immigrant class.
enum class ArrivalChildClaims { immigrant, newcomer };

std::string_view to_string(ModelKind k);
std::string_view to_string(StreamKind k);
std::string_view to_string(ArrivalSemantics k);
std::string_view to_string(ArrivalChildClaims k);

struct StreamSpec {
  StreamKind kind = StreamKind::none;
  /// Arrivals per generation for constant streams, the limit ell for proportional ones.
  double value = 0.0;

  bool operator==(const StreamSpec&) const = default;
};

/// Integration fraction per generation: `sequence[t]` while defined, `limit` afterwards.
struct PhiSchedule {
  double limit = 0.0;
  std::vector<double> sequence;

  double at(std::size_t t) const { return t < sequence.size() ? sequence[t] : limit; }

  bool operator==(const PhiSchedule&) const = default;
};

inline constexpr double kDefaultPopulationCap = 1e9;

struct ScenarioSpec {
  ModelKind model = ModelKind::model1;
  SubpopulationSpec home;
  SubpopulationSpec imm;
  std::optional<SubpopulationSpec> newcomer;
  PhiSchedule phi;
  StreamSpec stream;

  std::uint64_t h0 = 1;
  std::uint64_t i0 = 1;
  double s0 = 1.0;
  std::size_t horizon = 60;
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  bool carry_over = false;
  ArrivalSemantics arrival_semantics = ArrivalSemantics::causal;
  ArrivalChildClaims arrival_child_claims = ArrivalChildClaims::immigrant;
  double population_cap = kDefaultPopulationCap;
  /// Record the sup distance between the merged empirical claim CDF and the
  /// count-weighted mixture of the class laws.
  bool track_claim_cdf = false;

  // Solver settings carried by the scenario.
  std::optional<double> alpha;
  Model3Variant variant = Model3Variant::derivation_consistent;
  std::vector<double> thresholds;
  /// Published (tau, alpha) pairs the solve log is compared against.
  std::vector<std::pair<double, double>> reference;

  void validate() const;
  double ell() const { return stream.kind == StreamKind::proportional ? stream.value : 0.0; }

  bool operator==(const ScenarioSpec&) const = default;
};

/// Population state at the start of a generation.
struct SimState {
  std::size_t t = 0;
  std::uint64_t home = 0;
  std::uint64_t imm = 0;
  /// Accepted arrivals of the previous generation (causal semantics).
  std::uint64_t accepted_arrivals = 0;
  /// All arrivals of the previous generation and its threshold (literal semantics).
  std::uint64_t prev_arrivals = 0;
  double prev_tau = 0.0;
  /// Pool carried over from the previous generation.
  double leftover = 0.0;
};

SimState initial_state(const ScenarioSpec& spec);

struct GenerationRecord {
  std::size_t t = 0;
  std::uint64_t pop_home = 0;
  std::uint64_t pop_imm = 0;
  std::uint64_t integrated = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t accepted_arrivals = 0;
  std::uint64_t desc_home = 0;
  std::uint64_t desc_imm = 0;
  std::uint64_t desc_ni = 0;
  double pool = 0.0;
  double consumed = 0.0;
  double tau = 0.0;
  std::optional<double> alpha;
  std::uint64_t accepted_home = 0;
  std::uint64_t accepted_imm = 0;
  /// Cheapest rejected claim, if any claim was rejected.
  std::optional<double> first_rejected;
  std::optional<double> claim_cdf_gap;
};

/// Overrides for tests: replace drawn claims per class or the pool.
struct StepInjection {
  std::optional<std::vector<double>> home_claims;
  std::optional<std::vector<double>> imm_claims;
  std::optional<std::vector<double>> arrival_claims;
  std::optional<double> pool;
};

struct StepResult {
  SimState next;
  GenerationRecord record;
  bool overflow = false;
};

/// One generation: integrate, reproduce, claim, allocate weakest-first.
StepResult step_generation(const SimState& state, const ScenarioSpec& spec, RngStream& stream,
                           const StepInjection* injection = nullptr);

struct Trajectory {
  std::vector<GenerationRecord> rows;
  bool overflow = false;
  /// Both classes alive in the last recorded generation, which is the horizon.
  bool survived = false;
};

/// Generations 0..horizon, stopping early on overflow or when a class dies out.
Trajectory run_trajectory(const ScenarioSpec& spec, RngStream& stream);
Trajectory run_trajectory(const ScenarioSpec& spec, std::uint64_t seed);

struct Quantiles {
  double q05 = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  std::size_t count = 0;
};

/// Linear-interpolation quantiles of a sample (count 0 when empty).
Quantiles quantiles_of(std::vector<double> values);

struct ReplicationSummary {
  std::size_t replicates = 0;
  std::size_t survivors = 0;
  double survival_fraction = 0.0;
  /// Per generation, over surviving replicates.
  std::vector<Quantiles> alpha_by_t;
  std::vector<Quantiles> tau_by_t;
  std::vector<Trajectory> trajectories;
  bool any_overflow = false;
};

/// Replicate k runs on substream (master_seed, k); workers from RDBP_THREADS.
ReplicationSummary run_replications(const ScenarioSpec& spec, std::size_t replicates,
                                    std::uint64_t master_seed);

struct ConvergenceReport {
  /// One entry per surviving trajectory; empty when fewer than 4 usable points.
  std::vector<std::optional<double>> slopes;
  std::optional<double> median_slope;
  bool conditioning_set_empty = false;
  std::size_t usable = 0;
  /// Generations with a recorded claim CDF gap, and how many sat inside the
  /// 99% DKW band.
  std::size_t cdf_checked = 0;
  std::size_t cdf_within_band = 0;
};

/// OLS slope of log|tau_t - tau| over t in [from, to] per surviving trajectory.
std::optional<double> tau_convergence_slope(const Trajectory& traj, double tau, std::size_t from,
                                            std::size_t to);

ConvergenceReport convergence_diagnostics(const std::vector<Trajectory>& trajectories,
                                          double predicted_tau, std::size_t from,
                                          std::size_t to);

/// Width of the DKW band sqrt(ln(2/delta) / (2 n)).
double dkw_band(std::size_t n, double delta);

struct GwSummary {
  std::size_t replicates = 0;
  std::size_t survivors = 0;
  /// Z1_t / Z2_t quantiles per generation over replicates where both survive to T.
  std::vector<Quantiles> ratio_by_t;
  std::vector<double> final_ratios;
};

/// Two unconstrained Galton-Watson processes; process k of replicate r uses
/// substream (seed_k, r), so equal seeds and laws couple the processes exactly.
GwSummary gw_compare(const OffspringLaw& law1, const OffspringLaw& law2, std::uint64_t z1,
                     std::uint64_t z2, std::size_t horizon, std::size_t replicates,
                     std::uint64_t seed1, std::uint64_t seed2);

}  // namespace rdbp
