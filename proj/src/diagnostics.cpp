#include <algorithm>
#include <cmath>

#include "rdbp/simulator.hpp"

namespace rdbp {

double dkw_band(std::size_t n, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

std::optional<double> tau_convergence_slope(const Trajectory& traj, double tau, std::size_t from,
                                            std::size_t to) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : traj.rows) {
    if (row.t < from || row.t > to) continue;
    const double gap = std::abs(row.tau - tau);
    if (gap == 0.0) continue;
    xs.push_back(static_cast<double>(row.t));
    ys.push_back(std::log(gap));
  }
  if (xs.size() < 4) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  return sxy / sxx;
}

ConvergenceReport convergence_diagnostics(const std::vector<Trajectory>& trajectories,
                                          double predicted_tau, std::size_t from,
                                          std::size_t to) {
  ConvergenceReport out;
  std::vector<double> usable;
  for (const auto& traj : trajectories) {
    if (!traj.survived) continue;
    out.slopes.push_back(tau_convergence_slope(traj, predicted_tau, from, to));
    if (out.slopes.back()) usable.push_back(*out.slopes.back());
    for (const auto& row : traj.rows) {
      if (!row.claim_cdf_gap) continue;
      const std::size_t n = row.desc_home + row.desc_imm + row.desc_ni + row.arrivals;
      if (n == 0) continue;
      ++out.cdf_checked;
      if (*row.claim_cdf_gap <= dkw_band(n, 0.01)) ++out.cdf_within_band;
    }
  }
  out.conditioning_set_empty = out.slopes.empty();
  out.usable = usable.size();
  if (!usable.empty()) {
    std::sort(usable.begin(), usable.end());
    const std::size_t mid = usable.size() / 2;
    out.median_slope = usable.size() % 2 ? usable[mid] : 0.5 * (usable[mid - 1] + usable[mid]);
  }
  return out;
}

}  // namespace rdbp
