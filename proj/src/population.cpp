#include "rdbp/population.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rdbp {

double OffspringLaw::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) m += static_cast<double>(k) * pmf[k];
  return m;
}

double OffspringLaw::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double d = static_cast<double>(k) - m;
    v += d * d * pmf[k];
  }
  return v;
}

void OffspringLaw::validate() const {
  if (pmf.empty()) throw std::invalid_argument("offspring pmf is empty");
  double total = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("offspring pmf entries must be nonnegative");
    }
    total += p;
  }
  if (!(pmf[0] > 0.0)) throw std::invalid_argument("p0 must be strictly positive");
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("offspring pmf must sum to 1");
  }
}

std::uint64_t OffspringLaw::total_offspring(std::uint64_t parents, RngStream& stream) const {
  std::uint64_t remaining = parents;
  double mass_left = 1.0;
  std::uint64_t children = 0;
  for (std::size_t k = 0; k < pmf.size() && remaining > 0; ++k) {
    std::uint64_t n_k = remaining;
    if (k + 1 < pmf.size()) {
      const double p = mass_left > 0.0 ? std::min(1.0, pmf[k] / mass_left) : 1.0;
      n_k = std::binomial_distribution<std::uint64_t>(remaining, p)(stream.engine());
    }
    children += n_k * k;
    remaining -= n_k;
    mass_left -= pmf[k];
  }
  return children;
}

void ProductionLaw::validate() const {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("production mean must be nonnegative");
  }
  if (kind == ProductionKind::gamma && !(shape > 0.0)) {
    throw std::invalid_argument("gamma production shape must be positive");
  }
}

double ProductionLaw::total(std::uint64_t producers, RngStream& stream) const {
  if (producers == 0 || mean == 0.0) return 0.0;
  if (kind == ProductionKind::constant) return mean * static_cast<double>(producers);
  // Sum of n Gamma(k, r/k) variables is Gamma(n k, r/k).
  std::gamma_distribution<double> g(shape * static_cast<double>(producers), mean / shape);
  return g(stream.engine());
}

void SubpopulationSpec::validate() const {
  offspring.validate();
  production.validate();
}

SubpopulationSpec make_subpopulation(std::vector<double> pmf, double r, ClaimDistribution claims) {
  SubpopulationSpec spec{OffspringLaw{std::move(pmf)}, ProductionLaw{ProductionKind::constant, r, 1.0},
                         std::move(claims)};
  spec.validate();
  return spec;
}

}  // namespace rdbp
