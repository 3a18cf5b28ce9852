#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdbp/rng.hpp"

namespace rdbp {

enum class DistributionKind { beta, uniform, sinusoid, mixture, quantized, lottery, empirical };

std::string_view to_string(DistributionKind kind);

/// A point mass of a claim distribution.
struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

namespace detail {
class DistributionModel;
}

/// Immutable distribution of individual resource claims (monetary units).
///
/// Every kind exposes the CDF F, the partial first moment
/// Phi(t) = int_0^t x dF(x), the generalized inverse and an inverse-CDF
/// sampler. Values share their model, so copies are cheap and safe to hand to
/// concurrent workers.
class ClaimDistribution {
 public:
  /// Uniform on [0, 1].
  ClaimDistribution();
  /// Beta(a, b) on [0, 1].
  static ClaimDistribution beta(double a, double b);
  /// Uniform on [lo, hi] with 0 <= lo < hi.
  static ClaimDistribution uniform(double lo, double hi);
  /// F(t) = t + sign * sin(2 n pi t) / (2 n pi) on [0, 1]; sign is +1 or -1.
  static ClaimDistribution sinusoid(int n, int sign);
  /// Equal-mass atoms at the given nonnegative values.
  static ClaimDistribution empirical(std::vector<double> values);

  DistributionKind kind() const;
  double lo() const;
  double hi() const;
  double mean() const;

  /// F(t) = P(X <= t).
  double cdf(double t) const;
  /// P(X < t).
  double cdf_left(double t) const;
  /// Phi(t) = E[X 1{X <= t}]; returns the mean beyond the support.
  double partial_mean(double t) const;
  /// inf{x : F(x) >= p}.
  double quantile(double p) const;
  double sample(RngStream& stream) const;

  /// Point masses, ascending by location; empty for absolutely continuous kinds.
  std::vector<Atom> atoms() const;

  /// Canonical descriptor text, parseable by parse_distribution.
  std::string descriptor() const;

  const detail::DistributionModel& model() const { return *model_; }

  friend bool operator==(const ClaimDistribution& a, const ClaimDistribution& b) {
    return a.descriptor() == b.descriptor();
  }

 private:
  explicit ClaimDistribution(std::shared_ptr<const detail::DistributionModel> model)
      : model_(std::move(model)) {}

  std::shared_ptr<const detail::DistributionModel> model_;

  friend ClaimDistribution make_from_model(std::shared_ptr<const detail::DistributionModel>);
};

struct WeightedPart {
  double weight = 0.0;
  ClaimDistribution distribution;
};

/// G = sum_j a_j F_j. Weights must be positive and sum to 1 within 1e-12.
/// Class mixing is expressed by passing weights #C_j / n.
ClaimDistribution mix(std::span<const WeightedPart> parts);

/// Lists every claim at the largest threshold not above it.
///
/// `thresholds` must start at 0 and be strictly increasing. The result is
/// purely atomic with mass F(s_{l+1}) - F(s_l) at s_l.
ClaimDistribution quantize(const ClaimDistribution& base, std::span<const double> thresholds);

/// Lottery applied to claims above a cutoff.
///
/// A claim X <= cutoff is kept. Above the cutoff the claim is listed as
/// reduction * cutoff with probability `collapse_probability`, otherwise as
/// cutoff + (X - cutoff) / g(X). g is tabulated by `divisor_knots` (x, g(x))
/// with linear interpolation and constant extension; it must be
/// nondecreasing and >= 1.
struct LotteryParams {
  double cutoff = 0.0;
  double reduction = 1.0;
  double collapse_probability = 0.0;
  std::vector<std::pair<double, double>> divisor_knots{{0.0, 1.0}};

  double divisor(double x) const;
  void validate() const;
};

ClaimDistribution lottery_transform(const ClaimDistribution& base, const LotteryParams& params);

/// E(X~ | X = x) for the lottery rule.
double lottery_conditional_mean(const LotteryParams& params, double x);

/// Parses a tagged descriptor such as "kind=beta a=4 b=2.5".
ClaimDistribution parse_distribution(std::string_view text);

namespace detail {

class DistributionModel {
 public:
  virtual ~DistributionModel() = default;
  virtual DistributionKind kind() const = 0;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  virtual double mean() const = 0;
  virtual double cdf(double t) const = 0;
  virtual double partial_mean(double t) const = 0;
  virtual std::vector<Atom> atoms() const { return {}; }
  virtual double cdf_left(double t) const;
  virtual double quantile(double p) const;
  // Maps one uniform draw to a sample; inverse transform unless overridden.
  virtual double sample(double u) const { return quantile(u); }
  virtual std::string descriptor() const = 0;
};

}  // namespace detail

}  // namespace rdbp
