#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rdbp::numerics {

/// Outcome of a bracketing root search.
struct BracketResult {
  double root = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr std::size_t kMaxBisectionIterations = 200;

/// Smallest t in [lo, hi] with f(t) >= target for a nondecreasing f.
///
/// Returns the upper end of the final bracket, so f(root) >= target holds
/// whenever f(hi) >= target. The search stops when the bracket is narrower
/// than `tol` or after kMaxBisectionIterations halvings.
BracketResult infimum_crossing(const std::function<double(double)>& f,
                               double target, double lo, double hi,
                               double tol);

/// Sign-change bisection of an arbitrary continuous f on [lo, hi].
///
/// Requires f(lo) and f(hi) to have opposite signs (or one to vanish). Runs
/// until the bracket collapses to adjacent doubles or `tol` is reached.
BracketResult bisect_sign_change(const std::function<double(double)>& f,
                                 double lo, double hi, double tol);

/// Counts strict sign changes of f on a uniform grid inside [lo, hi]; used to
/// assert that a refinement bracket holds exactly one crossing.
std::size_t count_sign_changes(const std::function<double(double)>& f,
                               double lo, double hi, std::size_t points);

/// Roots of f on [lo, hi] found by a uniform scan followed by bisection of
/// every bracketed sign change. Non-finite values split the scan, so f may
/// return NaN where it is undefined. Grid points where f is exactly zero are
/// roots; a run of zeros yields its first point. Throws std::runtime_error if
/// a refined bracket turns out to hold more than one crossing.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                               std::size_t points);

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

/// `n` equally spaced points from lo to hi inclusive (n >= 2).
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace rdbp::numerics
