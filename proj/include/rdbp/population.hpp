#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdbp/distributions.hpp"
#include "rdbp/rng.hpp"

namespace rdbp {

/// Offspring count law given as a pmf over {0, 1, ..., k_max}.
struct OffspringLaw {
  std::vector<double> pmf;

  double mean() const;
  double variance() const;
  /// Throws unless p0 > 0, all masses are nonnegative and they sum to 1 within 1e-12.
  void validate() const;
  /// Total children of `parents` i.i.d. individuals (multinomial split of parents).
  std::uint64_t total_offspring(std::uint64_t parents, RngStream& stream) const;

  bool operator==(const OffspringLaw&) const = default;
};

enum class ProductionKind { constant, gamma };

/// Resource contribution per accepted adult; mean r, optional gamma shape.
struct ProductionLaw {
  ProductionKind kind = ProductionKind::constant;
  double mean = 0.0;
  double shape = 1.0;

  void validate() const;
  /// Sum of the contributions of `producers` individuals.
  double total(std::uint64_t producers, RngStream& stream) const;

  bool operator==(const ProductionLaw&) const = default;
};

struct SubpopulationSpec {
  OffspringLaw offspring;
  ProductionLaw production;
  ClaimDistribution claims;

  double m() const { return offspring.mean(); }
  double r() const { return production.mean; }
  void validate() const;

  bool operator==(const SubpopulationSpec&) const = default;
};

/// Convenience constructor with constant production.
SubpopulationSpec make_subpopulation(std::vector<double> pmf, double r, ClaimDistribution claims);

}  // namespace rdbp
