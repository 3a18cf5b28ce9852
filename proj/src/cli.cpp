#include "rdbp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "rdbp/brs_counting.hpp"
#include "rdbp/csv.hpp"
#include "rdbp/equilibrium.hpp"
#include "rdbp/format.hpp"
#include "rdbp/numerics.hpp"
#include "rdbp/scenario_io.hpp"
#include "rdbp/simulator.hpp"

namespace rdbp::cli {
namespace {

// Matching window for published reference values.
constexpr double kReferenceTauWindow = 5e-4;

struct Options {
  std::string scenario_path;
  std::string output;
  std::string summary;
  std::optional<double> phi;
  std::optional<double> alpha;
  std::optional<double> ell;
  std::optional<std::string> variant;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> horizon;
  std::optional<std::string> grid;
  std::vector<std::string> distributions;
  std::optional<double> budget;
  std::size_t points = 101;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Loaded {
  ScenarioSpec spec;
  std::vector<std::string> warnings;
};

/// The command line minus output destinations, so the same run writes the
/// same bytes wherever it writes them.
std::string joined_args(const std::vector<std::string>& args) {
  std::string out = "rdbp";
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a == "-o" || a == "--output" || a == "--summary") {
      ++k;
      continue;
    }
    if (a.rfind("--output=", 0) == 0 || a.rfind("--summary=", 0) == 0) continue;
    out += " " + a;
  }
  return out;
}

/// Comment block that makes every CSV self-describing and replayable.
std::string header_block(const std::vector<std::string>& args, const ScenarioSpec* spec,
                         const std::vector<std::string>& notes) {
  std::ostringstream os;
  os << "# command: " << joined_args(args) << "\n";
  if (spec) {
    os << "# resolved scenario:\n";
    std::istringstream lines(serialize_scenario(*spec));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) os << "#   " << line << "\n";
    }
  }
  for (const auto& n : notes) os << "# " << n << "\n";
  return os.str();
}

void require_absent(bool present, const std::string& flag, const std::string& why) {
  if (present) throw ValidationError("override " + flag + " is not valid " + why);
}

Loaded load(const Options& opt) {
  if (opt.scenario_path.empty()) throw ValidationError("missing scenario file");
  const ParsedScenario parsed = parse_scenario(read_text_file(opt.scenario_path));
  return {parsed.spec, parsed.warnings};
}

/// Applies the model-level overrides after checking they make sense for the model.
void apply_model_overrides(ScenarioSpec& spec, const Options& opt) {
  const std::string model = "for model " + std::string(to_string(spec.model));
  if (opt.phi) {
    require_absent(spec.model == ModelKind::model1 || spec.model == ModelKind::gw_pair, "--phi",
                   model);
    spec.phi.limit = *opt.phi;
    spec.phi.sequence.clear();
  }
  if (opt.ell) {
    require_absent(spec.model != ModelKind::model3, "--ell", model);
    if (!spec.newcomer) throw ValidationError("--ell needs a [newcomer] section");
    spec.stream = StreamSpec{StreamKind::proportional, *opt.ell};
  }
  if (opt.variant) {
    require_absent(spec.model != ModelKind::model3, "--variant", model);
    if (*opt.variant == "as-printed") {
      spec.variant = Model3Variant::as_printed;
    } else if (*opt.variant == "derivation-consistent") {
      spec.variant = Model3Variant::derivation_consistent;
    } else {
      throw ValidationError("--variant expects as-printed or derivation-consistent");
    }
  }
}

void apply_run_overrides(ScenarioSpec& spec, const Options& opt) {
  if (opt.seed) spec.seed = *opt.seed;
  if (opt.reps) spec.replicates = *opt.reps;
  if (opt.horizon) spec.horizon = *opt.horizon;
}

void forbid_run_overrides(const Options& opt, const std::string& verb) {
  const std::string why = "for " + verb;
  require_absent(opt.seed.has_value(), "--seed", why);
  require_absent(opt.reps.has_value(), "--reps", why);
  require_absent(opt.horizon.has_value(), "--horizon", why);
}

void validate_spec(const ScenarioSpec& spec) {
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw ValidationError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

CsvValue opt_value(const std::optional<double>& v) {
  return v ? CsvValue(*v) : CsvValue(std::monostate{});
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

std::vector<EquilibriumCandidate> solve_candidates(const ScenarioSpec& spec,
                                                   std::vector<std::string>& notes) {
  switch (spec.model) {
    case ModelKind::model1: {
      if (!spec.thresholds.empty()) {
        LevelMeans means;
        means.home.assign(spec.thresholds.size(), spec.home.m());
        means.imm.assign(spec.thresholds.size(), spec.imm.m());
        notes.push_back("quantized claims: tau is the listed level on the acceptance boundary");
        return solve_quantized_model1(spec.home, spec.imm, spec.thresholds, means);
      }
      for (const auto& root : model1_constraint_roots(spec.home, spec.imm)) {
        notes.push_back("constraint root tau=" + format_shortest(root.tau) +
                        " lambda=" + format_shortest(root.lambda) +
                        " numerator=" + format_shortest(root.numerator) +
                        " denominator=" + format_shortest(root.denominator) + ": " + root.verdict);
      }
      return solve_model1(spec.home, spec.imm);
    }
    case ModelKind::model2: {
      Model2Request req;
      req.phi = spec.phi.limit;
      if (spec.alpha) {
        req.alpha = *spec.alpha;
        req.mode = spec.phi.limit > 0.0 ? Model2Mode::fixed_pair : Model2Mode::given_alpha;
      }
      notes.push_back(std::string("model II mode: ") +
                      (req.mode == Model2Mode::given_phi
                           ? "given-phi"
                           : req.mode == Model2Mode::given_alpha ? "given-alpha" : "fixed-pair"));
      return solve_model2(spec.home, spec.imm, req);
    }
    case ModelKind::model3:
      if (!spec.newcomer) throw ValidationError("model III needs a [newcomer] section");
      notes.push_back("model III variant: " + std::string(to_string(spec.variant)));
      return solve_model3(spec.home, spec.imm, *spec.newcomer, spec.phi.limit, spec.ell(),
                          spec.variant);
    case ModelKind::gw_pair:
      break;
  }
  throw ValidationError("solve needs a resource-constrained model (I, II or III)");
}

void compare_references(const ScenarioSpec& spec, const std::vector<EquilibriumCandidate>& found,
                        std::vector<std::string>& notes) {
  if (spec.reference.empty()) return;
  std::size_t matched = 0;
  for (const auto& [tau, alpha] : spec.reference) {
    const EquilibriumCandidate* nearest = nullptr;
    for (const auto& c : found) {
      if (!nearest || std::abs(c.tau - tau) < std::abs(nearest->tau - tau)) nearest = &c;
    }
    std::string line = "reference tau=" + format_shortest(tau) + " alpha=" + format_shortest(alpha);
    if (!nearest || std::abs(nearest->tau - tau) > kReferenceTauWindow) {
      line += ": no candidate within " + format_shortest(kReferenceTauWindow);
      if (nearest) line += " (nearest tau=" + format_shortest(nearest->tau) + ")";
    } else {
      ++matched;
      line += ": candidate tau=" + format_shortest(nearest->tau);
      if (nearest->alpha) {
        line += " alpha=" + format_shortest(*nearest->alpha) +
                " relative_alpha_error=" + format_shortest(std::abs(*nearest->alpha - alpha) / alpha);
      } else {
        line += " alpha=unconstrained";
      }
    }
    notes.push_back(line);
  }
  if (matched != spec.reference.size() || found.size() != spec.reference.size()) {
    notes.push_back("discrepancy: " + std::to_string(found.size()) + " candidates, " +
                    std::to_string(matched) + " of " + std::to_string(spec.reference.size()) +
                    " reference values matched");
  }
}

int run_solve(const std::vector<std::string>& args, const Options& opt, std::ostream& out,
              std::ostream& err) {
  Loaded loaded = load(opt);
  ScenarioSpec& spec = loaded.spec;
  forbid_run_overrides(opt, "solve");
  require_absent(opt.grid.has_value(), "--grid", "for solve");
  apply_model_overrides(spec, opt);
  if (opt.alpha) {
    require_absent(spec.model != ModelKind::model2, "--alpha",
                   "for model " + std::string(to_string(spec.model)));
    spec.alpha = *opt.alpha;
  }
  validate_spec(spec);

  std::vector<std::string> notes;
  for (const auto& w : loaded.warnings) {
    notes.push_back("warning: " + w);
    err << "warning: " << w << "\n";
  }
  const auto candidates = solve_candidates(spec, notes);
  compare_references(spec, candidates, notes);
  for (const auto& c : candidates) {
    if (c.atom_fill) {
      notes.push_back("tau=" + format_shortest(c.tau) + " sits on an atom; served fraction " +
                      format_shortest(*c.atom_fill));
    }
  }

  CsvTable table;
  table.columns = {"model",          "phi",         "ell_ni",      "tau",
                   "alpha",          "lambda",      "classification", "criticality",
                   "residual_eq",    "residual_constraint"};
  for (const auto& c : candidates) {
    table.rows.push_back({c.model, c.phi, c.ell_ni, c.tau,
                          c.alpha ? CsvValue(*c.alpha) : CsvValue(std::string("unconstrained")),
                          c.lambda, std::string(to_string(c.classification)),
                          std::string(to_string(c.criticality)), c.residual_eq,
                          c.residual_constraint});
  }
  Sink sink(opt.output, out);
  sink.stream() << header_block(args, &spec, notes) << emit_csv(table);
  return kExitOk;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  std::size_t p = 0;
  std::size_t t = 0;
  if (x != std::string::npos) {
    const auto r1 = std::from_chars(text.data(), text.data() + x, p);
    const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), t);
    if (r1.ec == std::errc() && r1.ptr == text.data() + x && r2.ec == std::errc() &&
        r2.ptr == text.data() + text.size() && p >= 2 && t >= 2) {
      return {p, t};
    }
  }
  throw ValidationError("--grid expects PxT with both sides at least 2, got '" + text + "'");
}

int run_surface(const std::vector<std::string>& args, const Options& opt, std::ostream& out) {
  Loaded loaded = load(opt);
  ScenarioSpec& spec = loaded.spec;
  forbid_run_overrides(opt, "surface");
  require_absent(opt.phi.has_value(), "--phi", "for surface (phi spans the grid)");
  require_absent(opt.ell.has_value() || opt.variant.has_value(), "--ell/--variant",
                 "for surface");
  if (spec.model != ModelKind::model2) throw ValidationError("surface needs a model II scenario");
  if (opt.alpha) spec.alpha = *opt.alpha;
  if (!spec.alpha) throw ValidationError("surface needs alpha (scenario key or --alpha)");
  validate_spec(spec);
  const auto [phi_steps, tau_steps] = parse_grid(opt.grid.value_or("64x64"));

  const auto rows = constraint_surface(spec.home, spec.imm, *spec.alpha, phi_steps, tau_steps);
  CsvTable table;
  table.columns = {"phi", "tau", "z1", "z2", "z3", "alpha_surface", "alpha_overflow"};
  for (const auto& r : rows) {
    table.rows.push_back({r.phi, r.tau, r.z1, r.z2, r.z3, opt_value(r.alpha),
                          std::int64_t{r.alpha ? 0 : 1}});
  }
  Sink sink(opt.output, out);
  sink.stream() << header_block(args, &spec,
                                {"grid " + std::to_string(phi_steps) + "x" +
                                 std::to_string(tau_steps)})
                << emit_csv(table);
  return kExitOk;
}

int run_simulate(const std::vector<std::string>& args, const Options& opt, std::ostream& out,
                 std::ostream& err) {
  Loaded loaded = load(opt);
  ScenarioSpec& spec = loaded.spec;
  require_absent(opt.alpha.has_value(), "--alpha", "for simulate");
  require_absent(opt.grid.has_value(), "--grid", "for simulate");
  apply_model_overrides(spec, opt);
  apply_run_overrides(spec, opt);
  validate_spec(spec);
  if (spec.replicates == 0) throw ValidationError("replicates must be at least 1");

  const ReplicationSummary summary = run_replications(spec, spec.replicates, spec.seed);

  CsvTable traj;
  traj.columns = {"replicate",     "t",          "pop_home",          "pop_imm",
                  "integrated",    "arrivals",   "accepted_arrivals", "desc_home",
                  "desc_imm",      "desc_ni",    "pool",              "consumed",
                  "tau",           "alpha",      "accepted_home",     "accepted_imm",
                  "first_rejected", "claim_cdf_gap"};
  for (std::size_t k = 0; k < summary.trajectories.size(); ++k) {
    for (const auto& r : summary.trajectories[k].rows) {
      traj.rows.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(r.t),
                           as_int(r.pop_home), as_int(r.pop_imm), as_int(r.integrated),
                           as_int(r.arrivals), as_int(r.accepted_arrivals), as_int(r.desc_home),
                           as_int(r.desc_imm), as_int(r.desc_ni), r.pool, r.consumed, r.tau,
                           opt_value(r.alpha), as_int(r.accepted_home), as_int(r.accepted_imm),
                           opt_value(r.first_rejected), opt_value(r.claim_cdf_gap)});
    }
  }

  CsvTable sum;
  sum.columns = {"t",         "replicates", "survivors", "survival_fraction",
                 "alpha_q05", "alpha_q25",  "alpha_q50", "alpha_q75",
                 "alpha_q95", "alpha_n",    "tau_q05",   "tau_q25",
                 "tau_q50",   "tau_q75",    "tau_q95",   "tau_n"};
  for (std::size_t t = 0; t < summary.alpha_by_t.size(); ++t) {
    const Quantiles& a = summary.alpha_by_t[t];
    const Quantiles& q = summary.tau_by_t[t];
    const auto cell = [](const Quantiles& x, double v) {
      return x.count ? CsvValue(v) : CsvValue(std::monostate{});
    };
    sum.rows.push_back({static_cast<std::int64_t>(t),
                        static_cast<std::int64_t>(summary.replicates),
                        static_cast<std::int64_t>(summary.survivors), summary.survival_fraction,
                        cell(a, a.q05), cell(a, a.q25), cell(a, a.q50), cell(a, a.q75),
                        cell(a, a.q95), static_cast<std::int64_t>(a.count), cell(q, q.q05),
                        cell(q, q.q25), cell(q, q.q50), cell(q, q.q75), cell(q, q.q95),
                        static_cast<std::int64_t>(q.count)});
  }

  std::vector<std::string> notes;
  for (const auto& w : loaded.warnings) {
    notes.push_back("warning: " + w);
    err << "warning: " << w << "\n";
  }
  notes.push_back("survival fraction " + format_shortest(summary.survival_fraction));
  if (summary.any_overflow) notes.push_back("overflow: at least one replicate halted at the cap");
  const std::string header = header_block(args, &spec, notes);
  {
    Sink sink(opt.output, out);
    sink.stream() << header << emit_csv(traj);
  }
  if (!opt.summary.empty()) {
    Sink sink(opt.summary, out);
    sink.stream() << header << emit_csv(sum);
  }
  if (summary.any_overflow) {
    err << "simulation halted: population or pool overflow\n";
    return kExitHalted;
  }
  return kExitOk;
}

/// The candidate a set of runs should approach: the one nearest the median
/// final threshold of the survivors when the solver offers several.
std::optional<EquilibriumCandidate> predicted_candidate(
    const std::vector<EquilibriumCandidate>& candidates, const ReplicationSummary& summary) {
  if (candidates.empty()) return std::nullopt;
  if (candidates.size() == 1 || summary.tau_by_t.empty() || summary.tau_by_t.back().count == 0) {
    return candidates.front();
  }
  const double observed = summary.tau_by_t.back().q50;
  return *std::min_element(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.tau - observed) < std::abs(b.tau - observed);
  });
}

int run_diagnose(const std::vector<std::string>& args, const Options& opt, std::ostream& out) {
  Loaded loaded = load(opt);
  ScenarioSpec& spec = loaded.spec;
  require_absent(opt.alpha.has_value(), "--alpha", "for diagnose");
  require_absent(opt.grid.has_value(), "--grid", "for diagnose");
  apply_model_overrides(spec, opt);
  apply_run_overrides(spec, opt);
  spec.track_claim_cdf = true;
  validate_spec(spec);
  if (spec.replicates == 0) throw ValidationError("replicates must be at least 1");

  std::vector<std::string> notes;
  const auto candidates = solve_candidates(spec, notes);
  const ReplicationSummary summary = run_replications(spec, spec.replicates, spec.seed);
  const auto predicted = predicted_candidate(candidates, summary);
  const std::size_t from = spec.horizon / 2;
  const std::size_t to = spec.horizon;

  CsvTable table;
  table.columns = {"replicate", "survived", "tau_slope"};
  if (!predicted) {
    notes.push_back("no equilibrium candidate; convergence diagnostic absent");
    for (std::size_t k = 0; k < summary.trajectories.size(); ++k) {
      table.rows.push_back({static_cast<std::int64_t>(k),
                            std::int64_t{summary.trajectories[k].survived ? 1 : 0},
                            std::monostate{}});
    }
  } else {
    const ConvergenceReport report =
        convergence_diagnostics(summary.trajectories, predicted->tau, from, to);
    notes.push_back("predicted tau " + format_shortest(predicted->tau) + " (lambda " +
                    format_shortest(predicted->lambda) + ")");
    notes.push_back("window t in [" + std::to_string(from) + ", " + std::to_string(to) + "]");
    if (report.conditioning_set_empty) notes.push_back("conditioning set empty");
    notes.push_back("usable trajectories " + std::to_string(report.usable));
    notes.push_back(report.median_slope
                        ? "median slope " + format_shortest(*report.median_slope)
                        : std::string("median slope absent (fewer than 4 usable points)"));
    notes.push_back("claim cdf within 99% DKW band in " + std::to_string(report.cdf_within_band) +
                    " of " + std::to_string(report.cdf_checked) + " generations");
    std::size_t next = 0;
    for (std::size_t k = 0; k < summary.trajectories.size(); ++k) {
      const bool survived = summary.trajectories[k].survived;
      CsvValue slope = std::monostate{};
      if (survived) {
        if (next < report.slopes.size() && report.slopes[next]) slope = *report.slopes[next];
        ++next;
      }
      table.rows.push_back({static_cast<std::int64_t>(k), std::int64_t{survived ? 1 : 0}, slope});
    }
  }
  Sink sink(opt.output, out);
  sink.stream() << header_block(args, &spec, notes) << emit_csv(table);
  return summary.any_overflow ? kExitHalted : kExitOk;
}

int run_bound(const std::vector<std::string>& args, const Options& opt, std::ostream& out) {
  require_absent(opt.phi || opt.alpha || opt.ell || opt.variant || opt.horizon || opt.grid,
                 "--phi/--alpha/--ell/--variant/--horizon/--grid", "for bound");
  std::vector<ClaimDistribution> marginals;
  double s = 0.0;
  const ScenarioSpec* spec_ptr = nullptr;
  Loaded loaded;
  if (!opt.scenario_path.empty()) {
    require_absent(!opt.distributions.empty(), "--distribution", "together with a scenario");
    loaded = load(opt);
    spec_ptr = &loaded.spec;
    marginals.assign(loaded.spec.h0, loaded.spec.home.claims);
    marginals.insert(marginals.end(), loaded.spec.i0, loaded.spec.imm.claims);
    s = opt.budget.value_or(loaded.spec.s0);
  } else {
    if (opt.distributions.empty()) {
      throw ValidationError("bound needs a scenario or at least one --distribution");
    }
    if (!opt.budget) throw ValidationError("bound needs --budget");
    for (const auto& d : opt.distributions) {
      try {
        marginals.push_back(parse_distribution(d));
      } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
      }
    }
    s = *opt.budget;
  }
  if (!(s >= 0.0)) throw ValidationError("budget must be nonnegative");
  const std::size_t reps = opt.reps.value_or(10000);
  const std::uint64_t seed = opt.seed.value_or(1);
  if (reps == 0) throw ValidationError("--reps must be at least 1");

  const BoundResult bound = solve_bound_tau(marginals, s);
  const McEstimate mc = mc_expected_count(marginals, s, reps, seed);
  CsvTable table;
  table.columns = {"n", "s", "tau", "bound", "saturated", "mc_estimate", "mc_se", "reps", "seed"};
  table.rows.push_back({static_cast<std::int64_t>(marginals.size()), s, bound.tau, bound.bound,
                        std::int64_t{bound.saturated ? 1 : 0}, mc.estimate, mc.standard_error,
                        static_cast<std::int64_t>(reps), static_cast<std::int64_t>(seed)});
  std::vector<std::string> notes;
  for (const auto& d : opt.distributions) notes.push_back("marginal " + parse_distribution(d).descriptor());
  Sink sink(opt.output, out);
  sink.stream() << header_block(args, spec_ptr, notes) << emit_csv(table);
  return kExitOk;
}

int run_transform(const std::vector<std::string>& args, const Options& opt, std::ostream& out) {
  require_absent(!opt.scenario_path.empty(), "scenario", "for transform");
  require_absent(opt.phi || opt.alpha || opt.ell || opt.variant || opt.horizon || opt.grid ||
                     opt.seed || opt.reps || opt.budget,
                 "--phi/--alpha/--ell/--variant/--horizon/--grid/--seed/--reps/--budget",
                 "for transform");
  if (opt.distributions.size() != 1) throw ValidationError("transform needs one --distribution");
  if (opt.points < 2) throw ValidationError("--points must be at least 2");
  ClaimDistribution d;
  try {
    d = parse_distribution(opt.distributions.front());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  std::vector<std::string> notes{"distribution " + d.descriptor(),
                                 "mean " + format_shortest(d.mean())};
  for (const auto& a : d.atoms()) {
    notes.push_back("atom at " + format_shortest(a.location) + " mass " + format_shortest(a.mass));
  }
  CsvTable table;
  table.columns = {"t", "cdf", "cdf_left", "partial_mean"};
  for (double t : numerics::linspace(d.lo(), d.hi(), opt.points)) {
    table.rows.push_back({t, d.cdf(t), d.cdf_left(t), d.partial_mean(t)});
  }
  Sink sink(opt.output, out);
  sink.stream() << header_block(args, nullptr, notes) << emit_csv(table);
  return kExitOk;
}

void add_model_overrides(CLI::App* app, Options& opt) {
  app->add_option("--phi", opt.phi, "integration fraction");
  app->add_option("--alpha", opt.alpha, "immigrant to home ratio");
  app->add_option("--ell", opt.ell, "proportional arrival limit");
  app->add_option("--variant", opt.variant, "as-printed or derivation-consistent");
}

void add_run_overrides(CLI::App* app, Options& opt) {
  app->add_option("--seed", opt.seed, "master seed");
  app->add_option("--reps", opt.reps, "replicates");
  app->add_option("--horizon", opt.horizon, "generations");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Resource-dependent branching processes: equilibria and simulation", "rdbp"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve", "equilibrium candidates of a scenario");
  CLI::App* simulate = app.add_subcommand("simulate", "replicated trajectories of a scenario");
  CLI::App* bound = app.add_subcommand("bound", "expected weakest-first count bound and MC check");
  CLI::App* surface = app.add_subcommand("surface", "multiplier surfaces over (phi, tau)");
  CLI::App* transform = app.add_subcommand("transform", "tabulate a claim distribution");
  CLI::App* diagnose = app.add_subcommand("diagnose", "convergence diagnostics of replicated runs");

  for (CLI::App* sub : {solve, simulate, surface, diagnose}) {
    sub->add_option("scenario", opt.scenario_path, "scenario file")->required();
    add_model_overrides(sub, opt);
    add_run_overrides(sub, opt);
    sub->add_option("--grid", opt.grid, "surface grid PxT");
  }
  bound->add_option("scenario", opt.scenario_path, "scenario file (marginals h0 x home, i0 x imm)");
  bound->add_option("--distribution", opt.distributions, "claim descriptor, one per marginal");
  bound->add_option("--budget", opt.budget, "resource pool s");
  add_model_overrides(bound, opt);
  add_run_overrides(bound, opt);
  bound->add_option("--grid", opt.grid, "surface only");
  transform->add_option("--distribution", opt.distributions, "claim descriptor")->required();
  transform->add_option("--points", opt.points, "grid points");
  for (CLI::App* sub : {solve, simulate, bound, surface, transform, diagnose}) {
    sub->add_option("-o,--output", opt.output, "output CSV (default stdout)");
  }
  simulate->add_option("--summary", opt.summary, "per-generation summary CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve->parsed()) return run_solve(args, opt, out, err);
    if (simulate->parsed()) return run_simulate(args, opt, out, err);
    if (bound->parsed()) return run_bound(args, opt, out);
    if (surface->parsed()) return run_surface(args, opt, out);
    if (transform->parsed()) return run_transform(args, opt, out);
    if (diagnose->parsed()) return run_diagnose(args, opt, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "halted: " << e.what() << "\n";
    return kExitHalted;
  }
  return kExitValidation;
}

}  // namespace rdbp::cli
