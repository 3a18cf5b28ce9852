#include "rdbp/distributions.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rdbp/format.hpp"
#include "rdbp/numerics.hpp"

namespace rdbp {

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::beta: return "beta";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::sinusoid: return "sinusoid";
    case DistributionKind::mixture: return "mixture";
    case DistributionKind::quantized: return "quantized";
    case DistributionKind::lottery: return "lottery";
    case DistributionKind::empirical: return "empirical";
  }
  return "unknown";
}

namespace detail {

double DistributionModel::cdf_left(double t) const {
  double left = cdf(t);
  for (const Atom& a : atoms()) {
    if (a.location == t) left -= a.mass;
  }
  return std::max(0.0, left);
}

double DistributionModel::quantile(double p) const {
  if (p <= 0.0) return lo();
  if (p >= 1.0) {
    // Smallest x with F(x) = 1 may sit below hi for transformed kinds.
    return numerics::infimum_crossing([this](double x) { return cdf(x); }, 1.0, lo(), hi(),
                                      0.0)
        .root;
  }
  double x = numerics::infimum_crossing([this](double t) { return cdf(t); }, p, lo(), hi(), 0.0)
                 .root;
  // Snap onto an atom when bisection lands on its right edge.
  for (const Atom& a : atoms()) {
    if (a.location <= x && x - a.location <= 1e-12 * std::max(1.0, std::abs(x)) &&
        cdf(a.location) >= p) {
      return a.location;
    }
  }
  return x;
}

namespace {

class BetaModel final : public DistributionModel {
 public:
  BetaModel(double a, double b) : a_(a), b_(b), dist_(a, b) {}
  DistributionKind kind() const override { return DistributionKind::beta; }
  double lo() const override { return 0.0; }
  double hi() const override { return 1.0; }
  double mean() const override { return a_ / (a_ + b_); }
  double cdf(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return boost::math::cdf(dist_, t);
  }
  // int_0^t x f(x; a, b) dx = a / (a + b) * I_t(a + 1, b)
  double partial_mean(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return mean();
    return mean() * boost::math::ibeta(a_ + 1.0, b_, t);
  }
  double quantile(double p) const override {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return boost::math::quantile(dist_, p);
  }
  std::string descriptor() const override {
    return "kind=beta a=" + format_shortest(a_) + " b=" + format_shortest(b_);
  }

 private:
  double a_;
  double b_;
  boost::math::beta_distribution<double> dist_;
};

class UniformModel final : public DistributionModel {
 public:
  UniformModel(double lo, double hi) : lo_(lo), hi_(hi) {}
  DistributionKind kind() const override { return DistributionKind::uniform; }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  double mean() const override { return 0.5 * (lo_ + hi_); }
  double cdf(double t) const override {
    if (t <= lo_) return 0.0;
    if (t >= hi_) return 1.0;
    return (t - lo_) / (hi_ - lo_);
  }
  double partial_mean(double t) const override {
    if (t <= lo_) return 0.0;
    const double c = std::min(t, hi_);
    return (c * c - lo_ * lo_) / (2.0 * (hi_ - lo_));
  }
  double quantile(double p) const override {
    if (p <= 0.0) return lo_;
    if (p >= 1.0) return hi_;
    return lo_ + p * (hi_ - lo_);
  }
  std::string descriptor() const override {
    return "kind=uniform lo=" + format_shortest(lo_) + " hi=" + format_shortest(hi_);
  }

 private:
  double lo_;
  double hi_;
};

class SinusoidModel final : public DistributionModel {
 public:
  SinusoidModel(int n, int sign)
      : n_(n), sign_(sign), omega_(2.0 * std::numbers::pi * static_cast<double>(n)) {}
  DistributionKind kind() const override { return DistributionKind::sinusoid; }
  double lo() const override { return 0.0; }
  double hi() const override { return 1.0; }
  double mean() const override { return 0.5; }
  double cdf(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return std::clamp(t + sign_ * std::sin(omega_ * t) / omega_, 0.0, 1.0);
  }
  // int_0^t x (1 + s cos(w x)) dx = t^2/2 + s (t sin(w t)/w + (cos(w t) - 1)/w^2)
  double partial_mean(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 0.5;
    const double w = omega_;
    return 0.5 * t * t + sign_ * (t * std::sin(w * t) / w + (std::cos(w * t) - 1.0) / (w * w));
  }
  std::string descriptor() const override {
    return "kind=sinusoid n=" + std::to_string(n_) + " sign=" + (sign_ > 0 ? "+" : "-");
  }

 private:
  int n_;
  int sign_;
  double omega_;
};

/// Finite set of point masses; backs quantized and empirical kinds.
class AtomicModel final : public DistributionModel {
 public:
  AtomicModel(DistributionKind kind, std::vector<Atom> atoms, std::string descriptor)
      : kind_(kind), atoms_(std::move(atoms)), descriptor_(std::move(descriptor)) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    cumulative_.reserve(atoms_.size());
    cumulative_moment_.reserve(atoms_.size());
    double c = 0.0;
    double m = 0.0;
    for (const Atom& a : atoms_) {
      c += a.mass;
      m += a.location * a.mass;
      cumulative_.push_back(c);
      cumulative_moment_.push_back(m);
    }
  }
  DistributionKind kind() const override { return kind_; }
  double lo() const override { return atoms_.front().location; }
  double hi() const override { return atoms_.back().location; }
  double mean() const override { return cumulative_moment_.back(); }
  double cdf(double t) const override {
    const std::size_t k = count_at_or_below(t);
    if (k == 0) return 0.0;
    if (k == atoms_.size()) return 1.0;
    return std::min(1.0, cumulative_[k - 1]);
  }
  double cdf_left(double t) const override {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                                     [](const Atom& a, double v) { return a.location < v; });
    const auto k = static_cast<std::size_t>(it - atoms_.begin());
    return k == 0 ? 0.0 : std::min(1.0, cumulative_[k - 1]);
  }
  double partial_mean(double t) const override {
    const std::size_t k = count_at_or_below(t);
    return k == 0 ? 0.0 : cumulative_moment_[k - 1];
  }
  double quantile(double p) const override {
    if (p <= 0.0) return atoms_.front().location;
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
    if (it == cumulative_.end()) return atoms_.back().location;
    return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].location;
  }
  std::vector<Atom> atoms() const override { return atoms_; }
  std::string descriptor() const override { return descriptor_; }

 private:
  std::size_t count_at_or_below(double t) const {
    const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                                     [](double v, const Atom& a) { return v < a.location; });
    return static_cast<std::size_t>(it - atoms_.begin());
  }

  DistributionKind kind_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  std::vector<double> cumulative_moment_;
  std::string descriptor_;
};

class MixtureModel final : public DistributionModel {
 public:
  explicit MixtureModel(std::vector<WeightedPart> parts) : parts_(std::move(parts)) {
    lo_ = parts_.front().distribution.lo();
    hi_ = parts_.front().distribution.hi();
    mean_ = 0.0;
    for (const auto& p : parts_) {
      lo_ = std::min(lo_, p.distribution.lo());
      hi_ = std::max(hi_, p.distribution.hi());
      mean_ += p.weight * p.distribution.mean();
    }
  }
  DistributionKind kind() const override { return DistributionKind::mixture; }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  double mean() const override { return mean_; }
  double cdf(double t) const override {
    double v = 0.0;
    for (const auto& p : parts_) v += p.weight * p.distribution.cdf(t);
    return std::min(1.0, v);
  }
  double cdf_left(double t) const override {
    double v = 0.0;
    for (const auto& p : parts_) v += p.weight * p.distribution.cdf_left(t);
    return std::min(1.0, v);
  }
  double partial_mean(double t) const override {
    double v = 0.0;
    for (const auto& p : parts_) v += p.weight * p.distribution.partial_mean(t);
    return v;
  }
  // Composition: the draw picks a part by weight, and its position within
  // that part's share is reused as the part's own uniform.
  double sample(double u) const override {
    double below = 0.0;
    for (std::size_t j = 0; j + 1 < parts_.size(); ++j) {
      const double w = parts_[j].weight;
      if (u < below + w) return parts_[j].distribution.model().sample((u - below) / w);
      below += w;
    }
    const double w = parts_.back().weight;
    return parts_.back().distribution.model().sample(std::clamp((u - below) / w, 0.0, 1.0));
  }
  std::vector<Atom> atoms() const override {
    std::vector<Atom> out;
    for (const auto& p : parts_) {
      for (Atom a : p.distribution.atoms()) {
        a.mass *= p.weight;
        out.push_back(a);
      }
    }
    std::sort(out.begin(), out.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    return out;
  }
  std::string descriptor() const override {
    std::string out = "kind=mixture";
    for (std::size_t j = 0; j < parts_.size(); ++j) {
      const std::string idx = std::to_string(j + 1);
      out += " w" + idx + "=" + format_shortest(parts_[j].weight);
      out += " d" + idx + "={" + parts_[j].distribution.descriptor() + "}";
    }
    return out;
  }

 private:
  std::vector<WeightedPart> parts_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double mean_ = 0.0;
};

/// Pushforward of the base law under the lottery listing rule.
///
/// Above the cutoff the listed value h(x) = u + (x - u) / g(x) is monotone on
/// every piece where g is linear, so {x > u : h(x) <= y} is a finite union of
/// intervals that can be located in closed form.
class LotteryModel final : public DistributionModel {
 public:
  LotteryModel(ClaimDistribution base, LotteryParams params)
      : base_(std::move(base)), params_(std::move(params)) {
    const double u = params_.cutoff;
    tail_mass_ = 1.0 - base_.cdf(u);
    collapse_point_ = params_.reduction * u;
    std::vector<double> breaks{u};
    for (const auto& [x, g] : params_.divisor_knots) {
      if (x > u && x < base_.hi()) breaks.push_back(x);
    }
    breaks.push_back(std::max(u, base_.hi()));
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
      if (breaks[j + 1] > breaks[j]) segments_.push_back({breaks[j], breaks[j + 1]});
    }
    lo_ = base_.lo();
    if (params_.collapse_probability > 0.0 && tail_mass_ > 0.0) {
      lo_ = std::min(lo_, collapse_point_);
    }
    // Listed claims never exceed the original ones, and h is monotone on each
    // segment, so the largest value sits at a kept claim or a segment end.
    hi_ = base_.lo() <= u ? std::min(base_.hi(), u) : lo_;
    if (params_.collapse_probability > 0.0 && tail_mass_ > 0.0) {
      hi_ = std::max(hi_, collapse_point_);
    }
    if (params_.collapse_probability < 1.0) {
      for (const auto& seg : segments_) {
        hi_ = std::max({hi_, listed_value(seg.a), listed_value(seg.b)});
      }
    }
    mean_ = partial_mean(hi_);
  }

  DistributionKind kind() const override { return DistributionKind::lottery; }
  double lo() const override { return lo_; }
  double hi() const override { return hi_; }
  double mean() const override { return mean_; }

  double cdf(double y) const override {
    if (y < lo_) return 0.0;
    if (y >= hi_) return 1.0;
    const double u = params_.cutoff;
    const double a = params_.collapse_probability;
    double v = base_.cdf(std::min(y, u));
    if (y >= collapse_point_) v += a * tail_mass_;
    double listed = 0.0;
    for (const auto& seg : segments_) {
      const auto [p, q, closed_left] = listed_interval(seg, y);
      if (q > p || (closed_left && q >= p)) {
        listed += base_.cdf(q) - (closed_left ? base_.cdf_left(p) : base_.cdf(p));
      }
    }
    v += (1.0 - a) * listed;
    return std::clamp(v, 0.0, 1.0);
  }

  std::vector<Atom> atoms() const override {
    std::vector<Atom> out;
    for (const Atom& b : base_.atoms()) {
      if (b.location <= params_.cutoff) out.push_back(b);
    }
    const double a = params_.collapse_probability;
    if (a > 0.0 && tail_mass_ > 0.0) out.push_back({collapse_point_, a * tail_mass_});
    for (const Atom& b : base_.atoms()) {
      if (b.location > params_.cutoff && a < 1.0) {
        out.push_back({listed_value(b.location), (1.0 - a) * b.mass});
      }
    }
    std::sort(out.begin(), out.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    return out;
  }

  double partial_mean(double t) const override {
    if (t < lo_) return 0.0;
    const double u = params_.cutoff;
    const double a = params_.collapse_probability;
    double v = base_.partial_mean(std::min(t, u));
    if (t >= collapse_point_) v += a * tail_mass_ * collapse_point_;
    double listed = 0.0;
    for (const auto& seg : segments_) {
      const auto [p, q, closed_left] = listed_interval(seg, t);
      if (q > p) listed += listed_moment(seg, p, q, closed_left);
    }
    v += (1.0 - a) * listed;
    return v;
  }

  std::string descriptor() const override {
    std::string out = "kind=lottery base={" + base_.descriptor() + "}";
    out += " u=" + format_shortest(params_.cutoff);
    out += " c=" + format_shortest(params_.reduction);
    out += " a=" + format_shortest(params_.collapse_probability);
    out += " g=";
    for (std::size_t k = 0; k < params_.divisor_knots.size(); ++k) {
      if (k) out += ",";
      out += format_shortest(params_.divisor_knots[k].first) + ":" +
             format_shortest(params_.divisor_knots[k].second);
    }
    return out;
  }

 private:
  struct Segment {
    double a;
    double b;
  };
  struct Interval {
    double p;
    double q;
    bool closed_left;
  };

  double listed_value(double x) const {
    return params_.cutoff + (x - params_.cutoff) / params_.divisor(x);
  }

  // Sub-interval of the segment (a, b] whose listed value is <= y.
  Interval listed_interval(const Segment& seg, double y) const {
    const double ha = listed_value(seg.a);
    const double hb = listed_value(seg.b);
    if (hb >= ha) {
      if (y < ha) return {seg.a, seg.a, false};
      if (y >= hb) return {seg.a, seg.b, false};
      return {seg.a, invert(seg, y), false};
    }
    if (y < hb) return {seg.b, seg.b, false};
    if (y >= ha) return {seg.a, seg.b, false};
    return {invert(seg, y), seg.b, true};
  }

  double invert(const Segment& seg, double y) const {
    const bool increasing = listed_value(seg.b) >= listed_value(seg.a);
    double lo = seg.a;
    double hi = seg.b;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const bool below = listed_value(mid) <= y;
      if (below == increasing) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return increasing ? lo : hi;
  }

  // int over (p, q] (or [p, q]) of h(x) dF(x), by parts against h'. Within a
  // segment g is affine, so h' = (g - (x - u) g') / g^2 exactly. The
  // remaining integral of F h' is split at the base's atoms and support ends
  // so each piece is smooth.
  double listed_moment(const Segment& seg, double p, double q, bool closed_left) const {
    const double u = params_.cutoff;
    const double slope =
        (params_.divisor(seg.b) - params_.divisor(seg.a)) / (seg.b - seg.a);
    const auto derivative = [&](double x) {
      const double g = params_.divisor(x);
      return (g - (x - u) * slope) / (g * g);
    };
    const double f_p = closed_left ? base_.cdf_left(p) : base_.cdf(p);
    const double boundary = listed_value(q) * base_.cdf(q) - listed_value(p) * f_p;
    std::vector<double> cuts{p, q, base_.lo(), base_.hi()};
    for (const Atom& atom : base_.atoms()) cuts.push_back(atom.location);
    std::sort(cuts.begin(), cuts.end());
    double correction = 0.0;
    double prev = p;
    for (double c : cuts) {
      if (c <= prev || c > q) continue;
      correction += numerics::integrate(
          [&](double x) { return base_.cdf(x) * derivative(x); }, prev, c, 1e-13);
      prev = c;
    }
    return boundary - correction;
  }

  ClaimDistribution base_;
  LotteryParams params_;
  std::vector<Segment> segments_;
  double tail_mass_ = 0.0;
  double collapse_point_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double mean_ = 0.0;
};

}  // namespace
}  // namespace detail

ClaimDistribution make_from_model(std::shared_ptr<const detail::DistributionModel> model) {
  return ClaimDistribution(std::move(model));
}

ClaimDistribution::ClaimDistribution() : model_(std::make_shared<detail::UniformModel>(0.0, 1.0)) {}

ClaimDistribution ClaimDistribution::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("beta distribution requires a > 0 and b > 0");
  }
  return make_from_model(std::make_shared<detail::BetaModel>(a, b));
}

ClaimDistribution ClaimDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform distribution requires 0 <= lo < hi");
  }
  return make_from_model(std::make_shared<detail::UniformModel>(lo, hi));
}

ClaimDistribution ClaimDistribution::sinusoid(int n, int sign) {
  if (n < 1) throw std::invalid_argument("sinusoid distribution requires n >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sinusoid sign must be + or -");
  return make_from_model(std::make_shared<detail::SinusoidModel>(n, sign));
}

ClaimDistribution ClaimDistribution::empirical(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("empirical distribution needs values");
  std::sort(values.begin(), values.end());
  std::vector<Atom> atoms;
  const double w = 1.0 / static_cast<double>(values.size());
  std::string desc = "kind=empirical values=";
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("empirical values must be finite and nonnegative");
    }
    if (k) desc += ",";
    desc += format_shortest(v);
    if (!atoms.empty() && atoms.back().location == v) {
      atoms.back().mass += w;
    } else {
      atoms.push_back({v, w});
    }
  }
  return make_from_model(std::make_shared<detail::AtomicModel>(DistributionKind::empirical,
                                                               std::move(atoms), desc));
}

DistributionKind ClaimDistribution::kind() const { return model_->kind(); }
double ClaimDistribution::lo() const { return model_->lo(); }
double ClaimDistribution::hi() const { return model_->hi(); }
double ClaimDistribution::mean() const { return model_->mean(); }
double ClaimDistribution::cdf(double t) const { return model_->cdf(t); }
double ClaimDistribution::cdf_left(double t) const { return model_->cdf_left(t); }
double ClaimDistribution::partial_mean(double t) const {
  if (t <= 0.0) return t == 0.0 ? model_->partial_mean(0.0) : 0.0;
  return model_->partial_mean(t);
}
double ClaimDistribution::quantile(double p) const { return model_->quantile(p); }
double ClaimDistribution::sample(RngStream& stream) const { return model_->sample(stream.uniform()); }
std::vector<Atom> ClaimDistribution::atoms() const { return model_->atoms(); }
std::string ClaimDistribution::descriptor() const { return model_->descriptor(); }

ClaimDistribution mix(std::span<const WeightedPart> parts) {
  if (parts.empty()) throw std::invalid_argument("mix needs at least one part");
  double total = 0.0;
  for (const auto& p : parts) {
    if (!(p.weight > 0.0)) throw std::invalid_argument("mix weights must be positive");
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mix weights must sum to 1 (got " + format_shortest(total) + ")");
  }
  return make_from_model(std::make_shared<detail::MixtureModel>(
      std::vector<WeightedPart>(parts.begin(), parts.end())));
}

ClaimDistribution quantize(const ClaimDistribution& base, std::span<const double> thresholds) {
  if (thresholds.empty() || thresholds.front() != 0.0) {
    throw std::invalid_argument("quantize thresholds must start at 0");
  }
  for (std::size_t l = 1; l < thresholds.size(); ++l) {
    if (!(thresholds[l] > thresholds[l - 1])) {
      throw std::invalid_argument("quantize thresholds must be strictly increasing");
    }
  }
  std::vector<Atom> atoms;
  for (std::size_t l = 0; l < thresholds.size(); ++l) {
    const double lower = l == 0 ? 0.0 : base.cdf_left(thresholds[l]);
    const double upper = l + 1 < thresholds.size() ? base.cdf_left(thresholds[l + 1]) : 1.0;
    const double mass = upper - lower;
    if (mass > 0.0) atoms.push_back({thresholds[l], mass});
  }
  std::string desc = "kind=quantized base={" + base.descriptor() + "} thresholds=";
  for (std::size_t l = 0; l < thresholds.size(); ++l) {
    if (l) desc += ",";
    desc += format_shortest(thresholds[l]);
  }
  return make_from_model(std::make_shared<detail::AtomicModel>(DistributionKind::quantized,
                                                               std::move(atoms), desc));
}

double LotteryParams::divisor(double x) const {
  const auto& k = divisor_knots;
  if (x <= k.front().first) return k.front().second;
  if (x >= k.back().first) return k.back().second;
  const auto it = std::upper_bound(k.begin(), k.end(), x,
                                   [](double v, const auto& knot) { return v < knot.first; });
  const auto& [x1, g1] = *it;
  const auto& [x0, g0] = *(it - 1);
  return g0 + (g1 - g0) * (x - x0) / (x1 - x0);
}

void LotteryParams::validate() const {
  if (!(cutoff > 0.0)) throw std::invalid_argument("lottery cutoff u must be positive");
  if (!(reduction > 0.0) || reduction > 1.0) {
    throw std::invalid_argument("lottery reduction c must satisfy 0 < c <= 1");
  }
  if (!(collapse_probability >= 0.0) || collapse_probability > 1.0) {
    throw std::invalid_argument("lottery probability a must lie in [0, 1]");
  }
  if (divisor_knots.empty()) throw std::invalid_argument("lottery g needs at least one knot");
  for (std::size_t k = 0; k < divisor_knots.size(); ++k) {
    if (!(divisor_knots[k].second >= 1.0)) {
      throw std::invalid_argument("lottery g must be >= 1 everywhere");
    }
    if (k > 0) {
      if (!(divisor_knots[k].first > divisor_knots[k - 1].first)) {
        throw std::invalid_argument("lottery g knots must have increasing x");
      }
      if (divisor_knots[k].second < divisor_knots[k - 1].second) {
        throw std::invalid_argument("lottery g must be nondecreasing");
      }
    }
  }
}

ClaimDistribution lottery_transform(const ClaimDistribution& base, const LotteryParams& params) {
  params.validate();
  if (!(params.cutoff > base.lo()) || !(params.cutoff < base.hi())) {
    throw std::invalid_argument("lottery cutoff u must lie inside the claim support");
  }
  return make_from_model(std::make_shared<detail::LotteryModel>(base, params));
}

double lottery_conditional_mean(const LotteryParams& params, double x) {
  const double u = params.cutoff;
  if (x <= u) return x;
  const double a = params.collapse_probability;
  return a * params.reduction * u + (1.0 - a) * (u + (x - u) / params.divisor(x));
}

}  // namespace rdbp
