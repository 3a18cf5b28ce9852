// Acceptance checks. Run with a criterion number, or with no argument for all.
// Prints one PASS or FAIL line per criterion; exits nonzero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rdbp/brs_counting.hpp"
#include "rdbp/cli.hpp"
#include "rdbp/equilibrium.hpp"
#include "rdbp/numerics.hpp"
#include "rdbp/scenario_io.hpp"
#include "rdbp/simulator.hpp"
#include "test_support.hpp"

using namespace rdbp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

ScenarioSpec load(const std::string& name) {
  return parse_scenario(read_text_file(rdbp::testing::scenario_path(name))).spec;
}

struct CliRun {
  int code = 0;
  std::string out;
  double seconds = 0.0;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const auto start = Clock::now();
  CliRun r;
  r.code = cli::dispatch(args, out, err);
  r.seconds = seconds_since(start);
  r.out = out.str();
  return r;
}

// CSV data rows of a CLI run, split on commas (no quoted fields in solver output).
std::vector<std::map<std::string, std::string>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::map<std::string, std::string>> rows;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < header.size() && k < cells.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(row);
  }
  return rows;
}

Outcome criterion1() {
  const double published[3][2] = {{0.6031, 13.3675}, {0.7795, 0.3681}, {0.8424, 0.0016}};
  const auto swapped = run_cli({"solve", rdbp::testing::scenario_path("sec652_swapped.ini")});
  const auto rows = csv_rows(swapped.out);
  std::string detail;
  bool ok = swapped.code == 0 && rows.size() == 3 && swapped.seconds < 1.0;
  detail += fmt("swapped convention: %zu candidates in %.3f s;", rows.size(), swapped.seconds);
  for (std::size_t k = 0; k < std::min<std::size_t>(rows.size(), 3); ++k) {
    const double tau = std::stod(rows[k].at("tau"));
    const double alpha = std::stod(rows[k].at("alpha"));
    const double req = std::stod(rows[k].at("residual_eq"));
    const double rc = std::stod(rows[k].at("residual_constraint"));
    const double dtau = std::abs(tau - published[k][0]);
    const double rel = std::abs(alpha - published[k][1]) / published[k][1];
    const bool hit = dtau <= 5e-4 && rel <= 0.01 && req < 1e-8 && rc < 1e-8;
    ok = ok && hit;
    detail += fmt(" (tau %.7f dtau %.1e, alpha %.7g rel %.3f%%, residuals %.1e/%.1e)%s", tau, dtau,
                  alpha, 100 * rel, req, rc, hit ? "" : " MISS");
  }
  const auto printed = run_cli({"solve", rdbp::testing::scenario_path("sec652_printed.ini")});
  const auto printed_rows = csv_rows(printed.out);
  const bool logged = printed.out.find("# discrepancy:") != std::string::npos;
  const bool empty = printed_rows.empty();
  ok = ok && empty && logged;
  detail += fmt("; printed convention: %zu candidates (expected 0), discrepancy %s",
                printed_rows.size(), logged ? "logged" : "not logged");
  return {ok, detail};
}

Outcome criterion2() {
  const auto r = run_cli({"solve", rdbp::testing::scenario_path("figure3.ini"), "--alpha", "0.5",
                          "--phi", "0.20"});
  const auto rows = csv_rows(r.out);
  if (r.code != 0 || rows.size() != 1) {
    return {false, fmt("expected one row, got %zu (exit %d)", rows.size(), r.code)};
  }
  const double tau = std::stod(rows[0].at("tau"));
  const bool ok = std::abs(tau - 0.80106) <= 1e-3 && r.seconds < 5.0;
  return {ok, fmt("tau %.7f vs 0.80106 (|d| %.2e <= 1e-3), %s, %.3f s", tau,
                  std::abs(tau - 0.80106), rows[0].at("criticality").c_str(), r.seconds)};
}

Outcome criterion3() {
  const ScenarioSpec s = load("figure2.ini");
  const auto c = solve_model1(s.home, s.imm);
  return {c.empty(), fmt("%zu candidates (expected none)", c.size())};
}

ClaimDistribution random_law(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (std::uniform_int_distribution<int>(0, 3)(gen)) {
    case 0: {
      const double lo = 2 * u(gen);
      return ClaimDistribution::uniform(lo, lo + 0.1 + 2 * u(gen));
    }
    case 1: return ClaimDistribution::beta(0.5 + 5 * u(gen), 0.5 + 5 * u(gen));
    case 2:
      return ClaimDistribution::sinusoid(std::uniform_int_distribution<int>(1, 5)(gen),
                                         u(gen) < 0.5 ? -1 : 1);
    default: {
      const std::vector<WeightedPart> parts{{0.3, ClaimDistribution::uniform(0, 1)},
                                            {0.7, ClaimDistribution::beta(4, 2.5)}};
      return mix(parts);
    }
  }
}

Outcome criterion4() {
  const auto start = Clock::now();
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool ok = true;
  double worst = -1e300;
  for (int config = 0; config < 20; ++config) {
    const int k = std::uniform_int_distribution<int>(1, 5)(gen);
    std::vector<ClaimDistribution> marginals;
    double total_mean = 0.0;
    for (int j = 0; j < k; ++j) {
      marginals.push_back(random_law(gen));
      total_mean += marginals.back().mean();
    }
    const double s = u(gen) * total_mean;
    const auto bound = solve_bound_tau(marginals, s);
    const auto mc = mc_expected_count(marginals, s, 10000, 1000 + config);
    const double excess = mc.estimate - bound.bound - 3 * mc.standard_error;
    worst = std::max(worst, (mc.estimate - bound.bound) / std::max(mc.standard_error, 1e-300));
    if (excess > 0) ok = false;
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 30.0;
  return {ok, fmt("20 configurations, largest (mc - bound)/se = %.2f (limit 3), %.2f s", worst,
                  elapsed)};
}

Outcome criterion5() {
  const std::size_t n = 100000;
  double lo = 1e300;
  double hi = -1e300;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double r = asymptotic_ratio(ClaimDistribution::uniform(0, 1), n, n / 4.0, seed);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo >= 0.99 && hi <= 1.01, fmt("ratios over seeds 1..10 in [%.6f, %.6f]", lo, hi)};
}

// Exhaustive oracle: largest subset whose sum fits the budget, each subset
// summed in ascending order so rounding cannot favor one subset over another.
std::size_t brute_force(const std::vector<double>& claims, double s) {
  std::size_t best = 0;
  std::vector<double> subset;
  for (std::size_t mask = 0; mask < (std::size_t{1} << claims.size()); ++mask) {
    subset.clear();
    for (std::size_t k = 0; k < claims.size(); ++k) {
      if (mask >> k & 1) subset.push_back(claims[k]);
    }
    std::sort(subset.begin(), subset.end());
    double sum = 0.0;
    for (double c : subset) sum += c;
    if (sum <= s) best = std::max(best, subset.size());
  }
  return best;
}

Outcome criterion6() {
  const std::vector<double> values{0.0, 0.1, 0.25, 0.5, 1.0};
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  for (std::size_t len = 0; len <= 6; ++len) {
    std::vector<std::size_t> digits(len, 0);
    while (true) {
      std::vector<double> claims;
      for (auto d : digits) claims.push_back(values[d]);
      for (int b = 0; b < 10; ++b) {
        const double s = 0.35 * b;
        if (wf_count(claims, s).count != brute_force(claims, s)) ++mismatches;
        ++checked;
      }
      std::size_t pos = 0;
      while (pos < len && ++digits[pos] == values.size()) digits[pos++] = 0;
      if (pos == len) break;
    }
  }
  return {mismatches == 0, fmt("%zu (list, budget) pairs, %zu mismatches", checked, mismatches)};
}

bool same_rows(const Trajectory& a, const Trajectory& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& x = a.rows[k];
    const auto& y = b.rows[k];
    if (x.pop_home != y.pop_home || x.pop_imm != y.pop_imm || x.pool != y.pool ||
        x.tau != y.tau || x.consumed != y.consumed || x.accepted_home != y.accepted_home ||
        x.accepted_imm != y.accepted_imm || x.desc_home != y.desc_home ||
        x.desc_imm != y.desc_imm) {
      return false;
    }
  }
  return true;
}

Outcome criterion7() {
  ScenarioSpec m1 = load("model1_equilibrium.ini");
  ScenarioSpec m2 = m1;
  m2.model = ModelKind::model2;
  std::size_t identical = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    if (same_rows(run_trajectory(m1, seed), run_trajectory(m2, seed))) ++identical;
  }
  const ScenarioSpec m3 = load("model3_adjudication.ini");
  double worst = 0.0;
  bool sizes = true;
  std::size_t compared = 0;
  for (auto variant : {Model3Variant::as_printed, Model3Variant::derivation_consistent}) {
    for (double phi : {0.0, 0.05, 0.1}) {
      const auto a = solve_model3(m3.home, m3.imm, *m3.newcomer, phi, 0.0, variant);
      const auto b = solve_model2(m3.home, m3.imm, Model2Request{Model2Mode::given_phi, phi, 0.0});
      if (a.size() != b.size()) {
        sizes = false;
        continue;
      }
      for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max({worst, std::abs(a[k].tau - b[k].tau),
                          std::abs(*a[k].alpha - *b[k].alpha), std::abs(a[k].lambda - b[k].lambda)});
        ++compared;
      }
    }
  }
  const bool ok = identical == 20 && sizes && compared > 0 && worst <= 1e-10;
  return {ok, fmt("phi = 0 trajectories identical for %zu/20 seeds; ell = 0 vs integrated model: "
                  "%zu candidates, max difference %.2e",
                  identical, compared, worst)};
}

struct Criterion8Runs {
  ScenarioSpec spec;
  EquilibriumCandidate candidate;
  ReplicationSummary summary;
  double seconds = 0.0;
};

const Criterion8Runs& criterion8_runs() {
  static const Criterion8Runs runs = [] {
    Criterion8Runs r;
    r.spec = load("model1_equilibrium.ini");
    const auto start = Clock::now();
    const auto c = solve_model1(r.spec.home, r.spec.imm);
    if (c.size() != 1) throw std::runtime_error("criterion-8 scenario must have one candidate");
    r.candidate = c[0];
    r.summary = run_replications(r.spec, r.spec.replicates, r.spec.seed);
    r.seconds = seconds_since(start);
    return r;
  }();
  return runs;
}

Outcome criterion8() {
  const auto& r = criterion8_runs();
  const auto& tau_q = r.summary.tau_by_t.back();
  const auto& alpha_q = r.summary.alpha_by_t.back();
  const double target_alpha = r.candidate.alpha
                                  ? *r.candidate.alpha
                                  : static_cast<double>(r.spec.i0) / static_cast<double>(r.spec.h0);
  const double tau_err = std::abs(tau_q.q50 - r.candidate.tau) / r.candidate.tau;
  const double alpha_err = std::abs(alpha_q.q50 - target_alpha) / target_alpha;
  const bool ok = r.candidate.lambda >= 1.2 && r.spec.replicates == 200 && r.spec.horizon == 40 &&
                  tau_q.count > 0 && tau_err <= 0.02 && alpha_err <= 0.10 && r.seconds < 60.0;
  return {ok, fmt("lambda %.4f; %zu/%zu survive; median tau_T %.5f vs %.5f (%.2f%%, limit 2%%); "
                  "median alpha_T %.5f vs %.5f (%.2f%%, limit 10%%); %.1f s",
                  r.candidate.lambda, r.summary.survivors, r.summary.replicates, tau_q.q50,
                  r.candidate.tau, 100 * tau_err, alpha_q.q50, target_alpha, 100 * alpha_err,
                  r.seconds)};
}

Outcome criterion9() {
  const auto& r = criterion8_runs();
  const auto report = convergence_diagnostics(r.summary.trajectories, r.candidate.tau, 20, 40);
  if (!report.median_slope) return {false, "no usable trajectories"};
  return {*report.median_slope < 0.0,
          fmt("median slope of log|tau_t - tau| over t in [20, 40] = %.4f from %zu trajectories",
              *report.median_slope, report.usable)};
}

Outcome criterion10() {
  bool ok = true;
  double min_derivative = 1e300;
  double worst_closed_form = 0.0;
  for (const auto& law : {ClaimDistribution::uniform(0, 1), ClaimDistribution::beta(4, 2.5)}) {
    for (double m : numerics::linspace(1.1, 3.0, 10)) {
      for (double r : numerics::linspace(0.02, 0.95 * m * law.mean(), 10)) {
        min_derivative = std::min(min_derivative, rate_sensitivity(m, r, law).derivative);
        if (law.kind() == DistributionKind::uniform) {
          const double rate = solve_tau_single(m, r, law).effective_rate;
          worst_closed_form = std::max(worst_closed_form, std::abs(rate - std::sqrt(2 * r * m)));
        }
      }
    }
  }
  ok = min_derivative >= -1e-9 && worst_closed_form <= 1e-6;
  return {ok, fmt("min finite-difference derivative %.4g (>= -1e-9); uniform vs sqrt(2rm) max "
                  "error %.2e (<= 1e-6)",
                  min_derivative, worst_closed_form)};
}

Outcome criterion11() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const int parts_n = std::uniform_int_distribution<int>(2, 4)(gen);
    std::vector<WeightedPart> parts;
    double total = 0.0;
    for (int j = 0; j < parts_n; ++j) {
      parts.push_back({0.1 + u(gen), random_law(gen)});
      total += parts.back().weight;
    }
    for (auto& p : parts) p.weight /= total;
    const auto g = mix(parts);
    const std::size_t n = 1 + static_cast<std::size_t>(20 * u(gen));
    const double s = u(gen) * static_cast<double>(n) * g.mean();
    const std::vector<ClaimDistribution> marginals(n, g);
    const auto b = solve_bound_tau(marginals, s);
    double combination = 0.0;
    for (const auto& p : parts) combination += p.weight * static_cast<double>(n) * p.distribution.cdf(b.tau);
    worst = std::max(worst, std::abs(b.bound - combination));
  }
  return {worst <= 1e-12, fmt("10 mixtures, max |bound - convex combination| = %.2e", worst)};
}

Outcome criterion12() {
  const auto start = Clock::now();
  ScenarioSpec spec = load("model3_adjudication.ini");
  const double ell = spec.ell();
  const double phi = spec.phi.limit;
  std::map<std::string, double> predicted;
  std::string residuals;
  for (auto v : {Model3Variant::as_printed, Model3Variant::derivation_consistent}) {
    const auto c = solve_model3(spec.home, spec.imm, *spec.newcomer, phi, ell, v);
    if (c.size() != 1) {
      return {false, fmt("%s: expected one candidate, got %zu", std::string(to_string(v)).c_str(),
                         c.size())};
    }
    if (c[0].lambda < 1.2) return {false, fmt("lambda %.4f below 1.2", c[0].lambda)};
    predicted[std::string(to_string(v))] = c[0].lambda;
  }

  // Per surviving replicate: geometric mean growth of the immigrant class
  // over the last five generations.
  constexpr std::size_t kWindow = 5;
  const auto summary = run_replications(spec, spec.replicates, spec.seed);
  std::vector<double> growth;
  for (const auto& traj : summary.trajectories) {
    if (!traj.survived) continue;
    const auto& rows = traj.rows;
    const double end = static_cast<double>(rows[spec.horizon].pop_imm);
    const double begin = static_cast<double>(rows[spec.horizon - kWindow].pop_imm);
    growth.push_back(std::pow(end / begin, 1.0 / kWindow));
  }
  if (growth.size() < 2) return {false, "fewer than two surviving replicates"};
  double mean = 0.0;
  for (double g : growth) mean += g;
  mean /= static_cast<double>(growth.size());
  double var = 0.0;
  for (double g : growth) var += (g - mean) * (g - mean);
  var /= static_cast<double>(growth.size() - 1);
  const double se = std::sqrt(var / static_cast<double>(growth.size()));

  std::vector<std::string> matches;
  std::string detail = fmt("empirical multiplier %.7f (se %.2e, %zu/%zu survivors);", mean, se,
                           growth.size(), summary.replicates);
  for (const auto& [name, lambda] : predicted) {
    const double z = (mean - lambda) / se;
    detail += fmt(" %s predicts %.7f (z = %.2f);", name.c_str(), lambda, z);
    if (std::abs(z) <= 3.0) matches.push_back(name);
  }
  detail += fmt(" %.1f s;", seconds_since(start));
  if (matches.size() == 1) {
    detail += " matching variant: " + matches[0];
    return {true, detail};
  }
  detail += matches.empty() ? " neither variant matches" : " both variants match";
  return {false, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  std::vector<int> selected;
  if (argc > 1) {
    for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));
  } else {
    for (int n = 1; n <= 12; ++n) selected.push_back(n);
  }
  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > 12) {
      std::printf("FAIL criterion %d: no such criterion\n", n);
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
