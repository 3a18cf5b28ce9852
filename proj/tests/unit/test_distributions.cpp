#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rdbp/distributions.hpp"
#include "rdbp/numerics.hpp"
#include "test_support.hpp"

using namespace rdbp;
using rdbp::testing::quad;

namespace {

ClaimDistribution lottery_example() {
  LotteryParams p;
  p.cutoff = 0.5;
  p.reduction = 0.5;
  p.collapse_probability = 0.3;
  p.divisor_knots = {{0.0, 1.0}, {1.0, 2.0}};
  return lottery_transform(ClaimDistribution::uniform(0.0, 1.0), p);
}

std::vector<ClaimDistribution> zoo() {
  const std::vector<double> thresholds{0.0, 0.25, 0.5, 0.75};
  const std::vector<WeightedPart> parts{{0.3, ClaimDistribution::beta(4, 2.5)},
                                        {0.7, ClaimDistribution::uniform(0.2, 1.5)}};
  return {ClaimDistribution::beta(4, 2.5),
          ClaimDistribution::beta(4, 6),
          ClaimDistribution::uniform(0.0, 1.0),
          ClaimDistribution::uniform(0.4, 0.9),
          ClaimDistribution::sinusoid(4, 1),
          ClaimDistribution::sinusoid(4, -1),
          ClaimDistribution::empirical({0.3, 0.1, 0.4, 0.1}),
          mix(parts),
          quantize(ClaimDistribution::beta(4, 2.5), thresholds),
          lottery_example()};
}

}  // namespace

TEST_SUITE("distributions") {
  TEST_CASE("constructor examples") {
    CHECK(ClaimDistribution::beta(2, 2).cdf(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ClaimDistribution::sinusoid(4, 1).cdf(0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_NOTHROW(ClaimDistribution::beta(4, 2.5));
    CHECK_NOTHROW(ClaimDistribution::beta(4, 6));
    CHECK_THROWS_AS(ClaimDistribution::beta(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::uniform(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::sinusoid(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::sinusoid(2, 0), std::invalid_argument);
  }

  TEST_CASE("partial mean examples") {
    CHECK(ClaimDistribution::uniform(0, 1).partial_mean(0.5) == doctest::Approx(0.125));
    for (const auto& d : zoo()) CHECK(d.partial_mean(0.0) == 0.0);
    const double oracle = rdbp::testing::sinusoid_partial_mean_oracle(4, -1, 0.6031);
    CHECK(oracle == doctest::Approx(0.17225).epsilon(1e-4 / 0.17225));
    CHECK(ClaimDistribution::sinusoid(4, -1).partial_mean(0.6031) ==
          doctest::Approx(oracle).epsilon(1e-13));
  }

  TEST_CASE("beta closed forms agree with the quadrature oracle") {
    for (auto [a, b] : {std::pair{4.0, 2.5}, std::pair{4.0, 6.0}, std::pair{0.7, 1.3}}) {
      const auto d = ClaimDistribution::beta(a, b);
      for (double t : numerics::linspace(0.0, 1.0, 41)) {
        CHECK(std::abs(d.cdf(t) - rdbp::testing::beta_cdf_oracle(a, b, t)) < 1e-12);
        CHECK(std::abs(d.partial_mean(t) - rdbp::testing::beta_partial_mean_oracle(a, b, t)) < 1e-12);
      }
      CHECK(d.mean() == doctest::Approx(a / (a + b)).epsilon(1e-14));
    }
  }

  TEST_CASE("sinusoid closed forms agree with the quadrature oracle") {
    for (int sign : {1, -1}) {
      const auto d = ClaimDistribution::sinusoid(4, sign);
      for (double t : numerics::linspace(0.0, 1.0, 57)) {
        CHECK(std::abs(d.partial_mean(t) -
                       rdbp::testing::sinusoid_partial_mean_oracle(4, sign, t)) < 1e-13);
      }
      CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-14));
    }
  }

  TEST_CASE("quantile examples") {
    CHECK(ClaimDistribution::uniform(0, 1).quantile(0.3) == doctest::Approx(0.3).epsilon(1e-12));
    for (const auto& d : zoo()) CHECK(d.quantile(0.0) == doctest::Approx(d.lo()).epsilon(1e-12));
    const std::vector<double> th{0.0, 0.5};
    const auto q = quantize(ClaimDistribution::uniform(0, 1), th);
    CHECK(q.quantile(0.7) == 0.5);
    CHECK(q.quantile(0.5) == 0.0);
  }

  TEST_CASE("mixture examples and linearity") {
    const std::vector<WeightedPart> self{{0.5, ClaimDistribution::uniform(0, 1)},
                                         {0.5, ClaimDistribution::uniform(0, 1)}};
    const auto m1 = mix(self);
    for (double t : numerics::linspace(0.0, 1.0, 11)) CHECK(m1.cdf(t) == doctest::Approx(t));

    const std::vector<WeightedPart> two{{0.5, ClaimDistribution::uniform(0, 1)},
                                        {0.5, ClaimDistribution::uniform(0, 2)}};
    const auto m2 = mix(two);
    CHECK(m2.cdf(1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(m2.partial_mean(1.0) == doctest::Approx(0.375).epsilon(1e-14));

    const auto parts_zoo = zoo();
    const std::vector<WeightedPart> many{{0.2, parts_zoo[0]}, {0.5, parts_zoo[4]}, {0.3, parts_zoo[8]}};
    const auto m3 = mix(many);
    for (double t : numerics::linspace(0.0, 1.2, 49)) {
      double f = 0.0;
      double phi = 0.0;
      for (const auto& p : many) {
        f += p.weight * p.distribution.cdf(t);
        phi += p.weight * p.distribution.partial_mean(t);
      }
      CHECK(std::abs(m3.cdf(t) - f) < 1e-12);
      CHECK(std::abs(m3.partial_mean(t) - phi) < 1e-12);
    }
    const std::vector<WeightedPart> bad{{0.5, parts_zoo[0]}, {0.6, parts_zoo[1]}};
    CHECK_THROWS_AS(mix(bad), std::invalid_argument);
  }

  TEST_CASE("quantize examples") {
    const std::vector<double> halves{0.0, 0.5};
    const auto q = quantize(ClaimDistribution::uniform(0, 1), halves);
    const auto atoms = q.atoms();
    REQUIRE(atoms.size() == 2);
    CHECK(atoms[0].location == 0.0);
    CHECK(atoms[0].mass == doctest::Approx(0.5));
    CHECK(atoms[1].location == 0.5);
    CHECK(atoms[1].mass == doctest::Approx(0.5));
    CHECK(q.mean() == doctest::Approx(0.25));

    const std::vector<double> zero{0.0};
    const auto z = quantize(ClaimDistribution::uniform(0, 1), zero);
    CHECK(z.mean() == 0.0);
    CHECK(z.cdf(0.0) == 1.0);

    const std::vector<double> th{0.0, 0.25, 0.5, 0.75};
    const auto qb = quantize(ClaimDistribution::beta(4, 2.5), th);
    const auto ab = qb.atoms();
    REQUIRE(ab.size() == 4);
    double listed_mean = 0.0;
    for (std::size_t l = 0; l < 4; ++l) {
      const double upper = l + 1 < 4 ? th[l + 1] : 1.0;
      const double oracle = rdbp::testing::beta_cdf_oracle(4, 2.5, upper) -
                            rdbp::testing::beta_cdf_oracle(4, 2.5, th[l]);
      CHECK(std::abs(ab[l].mass - oracle) < 1e-12);
      listed_mean += th[l] * ab[l].mass;
    }
    CHECK(std::abs(qb.partial_mean(10.0) - listed_mean) < 1e-12);

    const std::vector<double> unsorted{0.0, 0.5, 0.25};
    CHECK_THROWS_AS(quantize(ClaimDistribution::uniform(0, 1), unsorted), std::invalid_argument);
    const std::vector<double> no_zero{0.1, 0.5};
    CHECK_THROWS_AS(quantize(ClaimDistribution::uniform(0, 1), no_zero), std::invalid_argument);
  }

  TEST_CASE("lottery identity and full collapse") {
    const auto base = ClaimDistribution::beta(4, 2.5);
    LotteryParams id;
    id.cutoff = 0.5;
    id.collapse_probability = 0.0;
    const auto same = lottery_transform(base, id);
    for (double t : numerics::linspace(0.0, 1.0, 21)) {
      CHECK(std::abs(same.cdf(t) - base.cdf(t)) < 1e-12);
      CHECK(std::abs(same.partial_mean(t) - base.partial_mean(t)) < 1e-10);
    }

    LotteryParams collapse;
    collapse.cutoff = 0.5;
    collapse.reduction = 1.0;
    collapse.collapse_probability = 1.0;
    const auto capped = lottery_transform(base, collapse);
    for (double t : numerics::linspace(0.0, 1.0, 21)) {
      const double expect = t < 0.5 ? base.cdf(t) : 1.0;
      CHECK(std::abs(capped.cdf(t) - expect) < 1e-12);
    }
    // E min(X, u) = Phi(u) + u (1 - F(u)).
    CHECK(capped.mean() == doctest::Approx(base.partial_mean(0.5) + 0.5 * (1 - base.cdf(0.5))));
  }

  TEST_CASE("lottery conditional mean") {
    LotteryParams p;
    p.cutoff = 0.5;
    p.reduction = 1.0;
    p.collapse_probability = 0.5;
    p.divisor_knots = {{0.0, 2.0}};
    CHECK(lottery_conditional_mean(p, 0.9) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(lottery_conditional_mean(p, 0.3) == doctest::Approx(0.3).epsilon(1e-14));
  }

  TEST_CASE("lottery with a constant divisor matches a closed-form oracle") {
    // Uniform base, u = 0.5, c = 0.5, a = 0.3, g = 2: excess claims list as
    // u + (X - u)/2 <= t iff X <= 2t - u, and the collapse atom sits at 0.25.
    LotteryParams p;
    p.cutoff = 0.5;
    p.reduction = 0.5;
    p.collapse_probability = 0.3;
    p.divisor_knots = {{0.0, 2.0}};
    const auto d = lottery_transform(ClaimDistribution::uniform(0, 1), p);
    const auto atoms = d.atoms();
    REQUIRE(atoms.size() == 1);
    CHECK(atoms[0].location == doctest::Approx(0.25));
    CHECK(atoms[0].mass == doctest::Approx(0.15));
    for (double t : {0.1, 0.25, 0.4, 0.55, 0.6, 0.7, 0.75}) {
      double f = std::min(t, 0.5) + (t >= 0.25 ? 0.15 : 0.0);
      double phi = std::min(t, 0.5) * std::min(t, 0.5) / 2.0 + (t >= 0.25 ? 0.15 * 0.25 : 0.0);
      if (t > 0.5) {
        const double upper = std::min(2 * t - 0.5, 1.0);
        f += 0.7 * (upper - 0.5);
        phi += 0.7 * quad([](double x) { return 0.5 + (x - 0.5) / 2.0; }, 0.5, upper);
      }
      CHECK(std::abs(d.cdf(t) - f) < 1e-12);
      CHECK(std::abs(d.partial_mean(t) - phi) < 1e-10);
    }
    CHECK(d.hi() == doctest::Approx(0.75));
  }

  TEST_CASE("lottery validation") {
    LotteryParams p;
    p.cutoff = 0.5;
    p.divisor_knots = {{0.0, 0.5}};
    CHECK_THROWS_AS(lottery_transform(ClaimDistribution::uniform(0, 1), p), std::invalid_argument);
    p.divisor_knots = {{0.0, 2.0}, {1.0, 1.5}};
    CHECK_THROWS_AS(lottery_transform(ClaimDistribution::uniform(0, 1), p), std::invalid_argument);
    p.divisor_knots = {{0.0, 1.0}};
    p.collapse_probability = 1.5;
    CHECK_THROWS_AS(lottery_transform(ClaimDistribution::uniform(0, 1), p), std::invalid_argument);
  }

  TEST_CASE("type invariants hold for every kind") {
    for (const auto& d : zoo()) {
      CAPTURE(d.descriptor());
      CHECK(d.cdf(d.hi()) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(d.cdf_left(d.lo()) == doctest::Approx(0.0));
      CHECK(d.partial_mean(d.hi()) == doctest::Approx(d.mean()).epsilon(1e-10));
      double atom_mass = 0.0;
      for (const auto& a : d.atoms()) {
        CHECK(a.mass > 0.0);
        CHECK(a.mass <= 1.0);
        atom_mass += a.mass;
      }
      CHECK(atom_mass <= 1.0 + 1e-12);
      const auto grid = numerics::linspace(0.0, d.hi() * 1.05, 97);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid[k];
        if (x >= d.lo() && x <= d.hi()) CHECK(d.quantile(d.cdf(x)) <= x + 1e-9);
        for (std::size_t j = k; j < grid.size(); j += 7) {
          const double b = grid[j];
          const double dphi = d.partial_mean(b) - d.partial_mean(x);
          CHECK(dphi >= -1e-13);
          CHECK(dphi <= b * (d.cdf(b) - d.cdf(x)) + 1e-12);
          CHECK(d.cdf(b) >= d.cdf(x));
        }
      }
    }
  }

  TEST_CASE("descriptors round-trip") {
    for (const auto& d : zoo()) {
      CAPTURE(d.descriptor());
      const auto back = parse_distribution(d.descriptor());
      CHECK(back == d);
      for (double t : {0.1, 0.37, 0.6, 0.95}) CHECK(back.cdf(t) == d.cdf(t));
    }
    CHECK(parse_distribution("kind=beta a=4 b=2.5").cdf(0.7) ==
          ClaimDistribution::beta(4, 2.5).cdf(0.7));
    CHECK_THROWS_AS(parse_distribution("kind=beta a=4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution("kind=beta a=4 b=2 c=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution("kind=gamma k=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_distribution("kind=uniform lo=0 hi=x"), std::invalid_argument);
  }

  TEST_CASE("sampling: determinism, moments, atomic support, DKW band") {
    const auto u = ClaimDistribution::uniform(0, 1);
    RngStream s1(99);
    RngStream s2(99);
    for (int k = 0; k < 100; ++k) CHECK(u.sample(s1) == u.sample(s2));

    const auto b = ClaimDistribution::beta(4, 2.5);
    RngStream s(2024);
    const std::size_t n = 100000;
    std::vector<double> xs(n);
    double sum = 0.0;
    double sq = 0.0;
    for (auto& x : xs) {
      x = b.sample(s);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 4.0 / 6.5) <= 3.0 * se);

    std::sort(xs.begin(), xs.end());
    const double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
    for (double t : numerics::linspace(0.0, 1.0, 101)) {
      const double ecdf =
          static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / n;
      CHECK(std::abs(ecdf - b.cdf(t)) <= band);
    }

    const std::vector<double> th{0.0, 0.25, 0.5, 0.75};
    const auto q = quantize(b, th);
    for (int k = 0; k < 2000; ++k) {
      const double x = q.sample(s);
      CHECK(std::find(th.begin(), th.end(), x) != th.end());
    }
  }

  TEST_CASE("mixture samples follow the mixture law") {
    // The oracle CDF is the weighted sum of the part CDFs, computed here
    // rather than through the mixture.
    const auto f1 = ClaimDistribution::uniform(0.5, 2);
    const auto f2 = ClaimDistribution::beta(0.7, 1.3);
    const auto f3 = ClaimDistribution::empirical({0.25, 0.75, 0.75});
    const std::vector<WeightedPart> parts{{0.2, f1}, {0.5, f2}, {0.3, f3}};
    const auto g = mix(parts);
    RngStream s(77);
    const std::size_t n = 100000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = g.sample(s);
    std::sort(xs.begin(), xs.end());
    const double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * n));
    for (double t : numerics::linspace(0.0, 2.0, 201)) {
      const double ecdf =
          static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / n;
      const double oracle = 0.2 * f1.cdf(t) + 0.5 * f2.cdf(t) + 0.3 * f3.cdf(t);
      CHECK(std::abs(ecdf - oracle) <= band);
    }
    RngStream a(5);
    RngStream b(5);
    for (int k = 0; k < 100; ++k) CHECK(g.sample(a) == g.sample(b));
  }
}
