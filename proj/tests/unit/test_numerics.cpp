#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rdbp/numerics.hpp"
#include "rdbp/parallel.hpp"
#include "rdbp/rng.hpp"

using namespace rdbp;

TEST_SUITE("numerics") {
  TEST_CASE("infimum crossing lands on the smallest feasible point") {
    const auto r = numerics::infimum_crossing([](double t) { return t * t; }, 0.25, 0.0, 1.0, 0.0);
    CHECK(r.converged);
    CHECK(r.root == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.root * r.root >= 0.25);

    // A step function: the infimum is the jump location.
    const auto step = numerics::infimum_crossing([](double t) { return t < 0.3 ? 0.0 : 1.0; }, 0.5,
                                                 0.0, 1.0, 0.0);
    CHECK(step.root == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("sign-change bisection and scanning") {
    const auto f = [](double t) { return std::cos(10.0 * t); };
    const auto roots = numerics::scan_roots(f, 0.0, 1.0, 4096);
    REQUIRE(roots.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(roots[k] == doctest::Approx((2.0 * k + 1.0) * M_PI / 20.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(numerics::bisect_sign_change([](double t) { return t * t + 1.0; }, -1.0, 1.0, 0.0),
                    std::invalid_argument);
    CHECK(numerics::count_sign_changes(f, 0.0, 1.0, 1000) == 3);
  }

  TEST_CASE("scan treats NaN as a gap, not a crossing") {
    const auto f = [](double t) { return t < 0.5 ? -1.0 : (t < 0.6 ? NAN : 1.0); };
    CHECK(numerics::scan_roots(f, 0.0, 1.0, 100).empty());
  }

  TEST_CASE("integration and grids") {
    CHECK(numerics::integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const auto g = numerics::linspace(0.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == 0.5);
  }

  TEST_CASE("rng substreams are reproducible and distinct") {
    RngStream a = RngStream::substream(11, 3);
    RngStream b = RngStream::substream(11, 3);
    RngStream c = RngStream::substream(11, 4);
    bool differs = false;
    for (int k = 0; k < 16; ++k) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      CHECK(x > 0.0);
      CHECK(x < 1.0);
      differs = differs || x != c.uniform();
    }
    CHECK(differs);
  }

  TEST_CASE("parallel_for runs every index exactly once") {
    for (std::size_t workers : {0u, 1u, 3u}) {
      std::vector<int> hits(257, 0);
      parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, workers);
      for (int h : hits) CHECK(h == 1);
    }
  }
}
