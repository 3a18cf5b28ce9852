#include "rdbp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdbp/brs_counting.hpp"
#include "rdbp/numerics.hpp"
#include "rdbp/parallel.hpp"

namespace rdbp {

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::model1: return "I";
    case ModelKind::model2: return "II";
    case ModelKind::model3: return "III";
    case ModelKind::gw_pair: return "GW-pair";
  }
  return "unknown";
}

std::string_view to_string(StreamKind k) {
  switch (k) {
    case StreamKind::none: return "none";
    case StreamKind::constant: return "constant";
    case StreamKind::proportional: return "proportional";
  }
  return "unknown";
}

std::string_view to_string(ArrivalSemantics k) {
  return k == ArrivalSemantics::causal ? "causal" : "literal-brs";
}

std::string_view to_string(ArrivalChildClaims k) {
  return k == ArrivalChildClaims::immigrant ? "immigrant" : "newcomer";
}

void ScenarioSpec::validate() const {
  home.validate();
  imm.validate();
  if (newcomer) newcomer->validate();
  const auto check_phi = [](double v) {
    if (!(v >= 0.0) || !(v < 1.0)) throw std::invalid_argument("phi must lie in [0, 1)");
  };
  check_phi(phi.limit);
  for (double v : phi.sequence) check_phi(v);
  if (stream.kind != StreamKind::none) {
    if (!(stream.value >= 0.0) || !std::isfinite(stream.value)) {
      throw std::invalid_argument("stream value must be nonnegative");
    }
    if (!newcomer) throw std::invalid_argument("an arrival stream needs a [newcomer] section");
  }
  if (model == ModelKind::model1 && (phi.limit != 0.0 || !phi.sequence.empty())) {
    throw std::invalid_argument("model I has no integration; use model II for phi > 0");
  }
  if ((model == ModelKind::model1 || model == ModelKind::model2) &&
      stream.kind != StreamKind::none) {
    throw std::invalid_argument("arrival streams need model III");
  }
  if (h0 < 1 || i0 < 1) throw std::invalid_argument("h0 and i0 must be at least 1");
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw std::invalid_argument("s0 must be positive");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  if (alpha && (!(*alpha > 0.0) || !std::isfinite(*alpha))) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (!(population_cap >= 1.0)) throw std::invalid_argument("population cap must be >= 1");
}

SimState initial_state(const ScenarioSpec& spec) {
  SimState s;
  s.home = spec.h0;
  s.imm = spec.i0;
  return s;
}

namespace {

// Appends n draws to out.
void draw_claims(const ClaimDistribution& d, std::uint64_t n, std::vector<double>& out,
                 RngStream& stream) {
  for (std::uint64_t k = 0; k < n; ++k) out.push_back(d.sample(stream));
}

double claim_cdf_gap(const std::vector<double>& claims, std::uint64_t n_home,
                     std::uint64_t n_imm, const ClaimDistribution& imm_law, std::uint64_t n_ni,
                     const ClaimDistribution& ni_law, const ClaimDistribution& home_law) {
  if (claims.empty()) return 0.0;
  const double lo = std::min({home_law.lo(), imm_law.lo(), ni_law.lo()});
  const double hi = std::max({home_law.hi(), imm_law.hi(), ni_law.hi()});
  const std::vector<double> grid = numerics::linspace(lo, hi, 65);
  std::vector<std::uint64_t> below(grid.size() + 1, 0);
  for (double c : claims) {
    // Number of grid points strictly below c.
    const auto k = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), c) - grid.begin());
    ++below[k];
  }
  const double n = static_cast<double>(claims.size());
  double cumulative = 0.0;
  double gap = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    cumulative += static_cast<double>(below[g]);
    const double empirical = cumulative / n;
    const double model = (static_cast<double>(n_home) * home_law.cdf(grid[g]) +
                          static_cast<double>(n_imm) * imm_law.cdf(grid[g]) +
                          static_cast<double>(n_ni) * ni_law.cdf(grid[g])) /
                         n;
    gap = std::max(gap, std::abs(empirical - model));
  }
  return gap;
}

}  // namespace

StepResult step_generation(const SimState& state, const ScenarioSpec& spec, RngStream& stream,
                           const StepInjection* injection) {
  StepResult out;
  GenerationRecord& rec = out.record;
  rec.t = state.t;
  rec.pop_home = state.home;
  rec.pop_imm = state.imm;
  if (state.home > 0) rec.alpha = static_cast<double>(state.imm) / static_cast<double>(state.home);

  const bool literal = spec.arrival_semantics == ArrivalSemantics::literal_brs;
  const SubpopulationSpec& newcomer = spec.newcomer ? *spec.newcomer : spec.imm;
  const ClaimDistribution& child_law = spec.arrival_child_claims == ArrivalChildClaims::immigrant
                                           ? spec.imm.claims
                                           : newcomer.claims;

  // Integration.
  const double phi = spec.phi.at(state.t);
  rec.integrated = static_cast<std::uint64_t>(std::floor(phi * static_cast<double>(state.imm)));
  const std::uint64_t home_parents = state.home + rec.integrated;
  const std::uint64_t imm_parents = state.imm - rec.integrated;

  // Parents of the arrival-children channel.
  std::uint64_t ni_parents = state.accepted_arrivals;
  if (literal) ni_parents = state.prev_arrivals;

  // Reproduction.
  rec.desc_home = spec.home.offspring.total_offspring(home_parents, stream);
  rec.desc_imm = spec.imm.offspring.total_offspring(imm_parents, stream);
  std::uint64_t ni_children = newcomer.offspring.total_offspring(ni_parents, stream);
  std::uint64_t ni_producers = state.accepted_arrivals;
  if (literal) {
    ni_children = static_cast<std::uint64_t>(
        std::floor(newcomer.claims.cdf(state.prev_tau) * static_cast<double>(ni_children)));
    ni_producers = ni_children;
  }
  rec.desc_ni = ni_children;

  // Pool: the initial endowment, then production of the current adults.
  if (state.t == 0) {
    rec.pool = spec.s0;
  } else {
    rec.pool = spec.home.production.total(home_parents, stream) +
               spec.imm.production.total(imm_parents, stream) +
               newcomer.production.total(ni_producers, stream);
  }
  rec.pool += state.leftover;
  if (injection && injection->pool) rec.pool = *injection->pool;

  switch (spec.stream.kind) {
    case StreamKind::none: rec.arrivals = 0; break;
    case StreamKind::constant:
      rec.arrivals = static_cast<std::uint64_t>(std::floor(spec.stream.value));
      break;
    case StreamKind::proportional:
      rec.arrivals = static_cast<std::uint64_t>(
          std::floor(spec.stream.value * static_cast<double>(state.home)));
      break;
  }

  const double cap = spec.population_cap;
  if (static_cast<double>(rec.desc_home) > cap ||
      static_cast<double>(rec.desc_imm + rec.desc_ni) > cap ||
      static_cast<double>(rec.arrivals) > cap || !std::isfinite(rec.pool)) {
    out.overflow = true;
    return out;
  }

  SimState& next = out.next;
  next.t = state.t + 1;
  next.prev_arrivals = rec.arrivals;

  if (spec.model == ModelKind::gw_pair) {
    rec.accepted_home = rec.desc_home;
    rec.accepted_imm = rec.desc_imm;
    next.home = rec.accepted_home;
    next.imm = rec.accepted_imm;
    return out;
  }

  // Claims: [home | immigrant class incl. arrival-children | arrivals].
  std::vector<double> claims;
  std::uint64_t n_home = rec.desc_home;
  std::uint64_t n_imm = rec.desc_imm + rec.desc_ni;
  std::uint64_t n_arr = rec.arrivals;
  claims.reserve(n_home + n_imm + n_arr);
  if (injection && injection->home_claims) {
    claims.insert(claims.end(), injection->home_claims->begin(), injection->home_claims->end());
    n_home = injection->home_claims->size();
  } else {
    draw_claims(spec.home.claims, rec.desc_home, claims, stream);
  }
  if (injection && injection->imm_claims) {
    claims.insert(claims.end(), injection->imm_claims->begin(), injection->imm_claims->end());
    n_imm = injection->imm_claims->size();
  } else {
    draw_claims(spec.imm.claims, rec.desc_imm, claims, stream);
    draw_claims(child_law, rec.desc_ni, claims, stream);
  }
  if (injection && injection->arrival_claims) {
    claims.insert(claims.end(), injection->arrival_claims->begin(),
                  injection->arrival_claims->end());
    n_arr = injection->arrival_claims->size();
  } else {
    draw_claims(newcomer.claims, rec.arrivals, claims, stream);
  }

  const WfResult served = wf_select(claims, rec.pool);
  rec.tau = served.threshold;
  rec.consumed = served.consumed;
  for (std::size_t k = 0; k < claims.size(); ++k) {
    if (served.accepted[k]) {
      if (k < n_home) {
        ++rec.accepted_home;
      } else if (k < n_home + n_imm) {
        ++rec.accepted_imm;
      } else {
        ++rec.accepted_arrivals;
      }
    } else if (!rec.first_rejected || claims[k] < *rec.first_rejected) {
      rec.first_rejected = claims[k];
    }
  }
  if (spec.track_claim_cdf && !(injection && (injection->home_claims || injection->imm_claims ||
                                              injection->arrival_claims))) {
    // The arrival-children share the immigrant slot only when they claim like immigrants.
    const bool split = spec.arrival_child_claims == ArrivalChildClaims::newcomer;
    rec.claim_cdf_gap = claim_cdf_gap(claims, n_home, split ? rec.desc_imm : n_imm, spec.imm.claims,
                                      split ? rec.desc_ni + n_arr : n_arr, newcomer.claims,
                                      spec.home.claims);
  }

  next.home = rec.accepted_home;
  next.imm = rec.accepted_imm;
  next.accepted_arrivals = rec.accepted_arrivals;
  next.prev_tau = rec.tau;
  if (spec.carry_over) next.leftover = rec.pool - rec.consumed;
  return out;
}

Trajectory run_trajectory(const ScenarioSpec& spec, RngStream& stream) {
  Trajectory traj;
  SimState state = initial_state(spec);
  const bool arrivals_possible = spec.stream.kind != StreamKind::none;
  for (std::size_t t = 0; t <= spec.horizon; ++t) {
    StepResult step = step_generation(state, spec, stream);
    if (step.overflow) {
      traj.overflow = true;
      break;
    }
    traj.rows.push_back(step.record);
    state = step.next;
    if (t == spec.horizon) break;
    const bool imm_gone = state.imm == 0 && !arrivals_possible;
    if (state.home == 0 || imm_gone) break;
  }
  traj.survived = !traj.overflow && traj.rows.size() == spec.horizon + 1 &&
                  traj.rows.back().pop_home > 0 && traj.rows.back().pop_imm > 0;
  return traj;
}

Trajectory run_trajectory(const ScenarioSpec& spec, std::uint64_t seed) {
  RngStream stream(seed);
  return run_trajectory(spec, stream);
}

Quantiles quantiles_of(std::vector<double> values) {
  Quantiles q;
  q.count = values.size();
  if (values.empty()) return q;
  std::sort(values.begin(), values.end());
  const auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  q.q05 = at(0.05);
  q.q25 = at(0.25);
  q.q50 = at(0.50);
  q.q75 = at(0.75);
  q.q95 = at(0.95);
  return q;
}

ReplicationSummary run_replications(const ScenarioSpec& spec, std::size_t replicates,
                                    std::uint64_t master_seed) {
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  ReplicationSummary out;
  out.replicates = replicates;
  out.trajectories.resize(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    RngStream stream = RngStream::substream(master_seed, r);
    out.trajectories[r] = run_trajectory(spec, stream);
  });
  for (const auto& traj : out.trajectories) {
    if (traj.survived) ++out.survivors;
    if (traj.overflow) out.any_overflow = true;
  }
  out.survival_fraction = static_cast<double>(out.survivors) / static_cast<double>(replicates);
  for (std::size_t t = 0; t <= spec.horizon; ++t) {
    std::vector<double> alphas;
    std::vector<double> taus;
    for (const auto& traj : out.trajectories) {
      if (!traj.survived) continue;
      const GenerationRecord& row = traj.rows[t];
      if (row.alpha) alphas.push_back(*row.alpha);
      taus.push_back(row.tau);
    }
    out.alpha_by_t.push_back(quantiles_of(std::move(alphas)));
    out.tau_by_t.push_back(quantiles_of(std::move(taus)));
  }
  return out;
}

GwSummary gw_compare(const OffspringLaw& law1, const OffspringLaw& law2, std::uint64_t z1,
                     std::uint64_t z2, std::size_t horizon, std::size_t replicates,
                     std::uint64_t seed1, std::uint64_t seed2) {
  law1.validate();
  law2.validate();
  if (z1 < 1 || z2 < 1) throw std::invalid_argument("initial sizes must be at least 1");
  GwSummary out;
  out.replicates = replicates;
  std::vector<std::vector<double>> ratios(replicates);
  std::vector<char> survived(replicates, 0);
  parallel_for(replicates, [&](std::size_t r) {
    RngStream s1 = RngStream::substream(seed1, r);
    RngStream s2 = RngStream::substream(seed2, r);
    std::uint64_t a = z1;
    std::uint64_t b = z2;
    ratios[r].push_back(static_cast<double>(a) / static_cast<double>(b));
    for (std::size_t t = 1; t <= horizon; ++t) {
      a = law1.total_offspring(a, s1);
      b = law2.total_offspring(b, s2);
      if (a == 0 || b == 0) return;
      ratios[r].push_back(static_cast<double>(a) / static_cast<double>(b));
    }
    survived[r] = 1;
  });
  for (std::size_t t = 0; t <= horizon; ++t) {
    std::vector<double> at_t;
    for (std::size_t r = 0; r < replicates; ++r) {
      if (survived[r]) at_t.push_back(ratios[r][t]);
    }
    out.ratio_by_t.push_back(quantiles_of(std::move(at_t)));
  }
  for (std::size_t r = 0; r < replicates; ++r) {
    if (!survived[r]) continue;
    ++out.survivors;
    out.final_ratios.push_back(ratios[r].back());
  }
  return out;
}

}  // namespace rdbp
