#include "rdbp/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdbp::numerics {

BracketResult infimum_crossing(const std::function<double(double)>& f,
                               double target, double lo, double hi,
                               double tol) {
  BracketResult out;
  if (f(lo) >= target) {
    out.root = lo;
    out.converged = true;
    return out;
  }
  double a = lo;
  double b = hi;
  while (out.iterations < kMaxBisectionIterations) {
    if (b - a <= tol) {
      out.converged = true;
      break;
    }
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b) {
      out.converged = true;
      break;
    }
    if (f(mid) >= target) {
      b = mid;
    } else {
      a = mid;
    }
    ++out.iterations;
  }
  out.root = b;
  return out;
}

BracketResult bisect_sign_change(const std::function<double(double)>& f,
                                 double lo, double hi, double tol) {
  BracketResult out;
  double fa = f(lo);
  double fb = f(hi);
  if (fa == 0.0) {
    out.root = lo;
    out.converged = true;
    return out;
  }
  if (fb == 0.0) {
    out.root = hi;
    out.converged = true;
    return out;
  }
  if (std::signbit(fa) == std::signbit(fb)) {
    throw std::invalid_argument("bisect_sign_change: bracket has no sign change");
  }
  double a = lo;
  double b = hi;
  while (out.iterations < kMaxBisectionIterations) {
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b || b - a <= tol * 1e-6) {
      out.converged = true;
      break;
    }
    const double fm = f(mid);
    if (fm == 0.0) {
      a = b = mid;
      out.converged = true;
      break;
    }
    if (std::signbit(fm) == std::signbit(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
    ++out.iterations;
  }
  // Report the endpoint with the smaller residual.
  out.root = std::abs(fa) <= std::abs(fb) ? a : b;
  if (b - a <= tol) out.converged = true;
  return out;
}

std::size_t count_sign_changes(const std::function<double(double)>& f,
                               double lo, double hi, std::size_t points) {
  std::size_t changes = 0;
  int last_sign = 0;
  for (double t : linspace(lo, hi, points)) {
    const double v = f(t);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
  }
  return changes;
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                               std::size_t points) {
  const std::vector<double> grid = linspace(lo, hi, points);
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = f(grid[k]);
  std::vector<double> roots;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v)) continue;
    if (v == 0.0) {
      if (k == 0 || values[k - 1] != 0.0) roots.push_back(grid[k]);
      continue;
    }
    if (k == 0) continue;
    const double prev = values[k - 1];
    if (!std::isfinite(prev) || prev == 0.0 || std::signbit(prev) == std::signbit(v)) continue;
    const double a = grid[k - 1];
    const double b = grid[k];
    if (count_sign_changes(f, a, b, 33) > 1) {
      throw std::runtime_error("root scan under-resolved: several crossings in one cell");
    }
    roots.push_back(bisect_sign_change(f, a, b, 0.0).root);
  }
  return roots;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(b > a)) return 0.0;
  // Boost's tolerance is relative to the L1 norm, and its error estimate
  // stalls below about 1e-12, where refinement only chases round-off.
  const double rel_tol = std::max(abs_tol / std::max(1.0, b - a), 1e-12);
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, rel_tol);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace rdbp::numerics
