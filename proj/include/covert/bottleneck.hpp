// SPDX-License-Identifier: Apache-2.0
//
// The constrained sensing-covertness optimum: covert information via
// constraint inversion, trade-off curves, and the Lagrangian beta-sweep.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "covert/sensing.hpp"

namespace covert {

/// Thrown when a solver bracket does not contain the requested constraint
/// level or fails its monotonicity check.
class bracket_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One point of the parametric (xi_E, xi_A) curve. beta is set when the point
/// was produced by the Lagrangian sweep; at_edge marks maximizers that landed
/// on the search bracket's boundary (not interior saddle points).
struct TradeoffPoint {
  double mu = 0.0;
  double xi_E = 0.0;
  double xi_A = 0.0;
  double delta_xi = 0.0;
  std::optional<double> beta;
  bool at_edge = false;
};

/// Solution of max xi_A subject to xi_E <= d over one probe family.
struct CovertInfoResult {
  double i_c = 0.0;
  double mu_star = 0.0;
  double d = 0.0;
  double xi_E_achieved = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct SolverOptions {
  RateOptions rates;
  double rel_tol = 1e-9;
  int max_iterations = 240;
  int scan_points = 33;
};

namespace detail {

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    g.push_back(std::exp(llo + t * (lhi - llo)));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace detail

/// Best sensing exponent under the covertness constraint xi_E <= d. Both
/// rates increase with probe energy, so the constraint binds and bisection on
/// mu inverts xi_E(mu) = d; the monotonicity precondition is checked at the
/// bracket endpoints.
inline CovertInfoResult covert_information(const ChannelParams& ch,
                                           ProbeFamily family, int copies,
                                           double d, double mu_lo, double mu_hi,
                                           const SolverOptions& opts = {}) {
  ch.validate();
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw bracket_error("covert_information: d must be positive and finite");
  }
  if (!(mu_lo > 0.0) || !(mu_hi > mu_lo)) {
    throw bracket_error("covert_information: need 0 < mu_lo < mu_hi");
  }
  auto rate_at = [&](double mu) {
    const ProbeSpec probe{family, mu, copies};
    return eve_rate(ch, probe, opts.rates);
  };
  const double e_lo = rate_at(mu_lo);
  const double e_hi = rate_at(mu_hi);
  if (!(e_lo <= e_hi)) {
    throw bracket_error("covert_information: eve rate not increasing over bracket");
  }
  auto rel_err = [&](double e) { return std::abs(e - d) / d; };
  CovertInfoResult out;
  out.d = d;
  if (rel_err(e_lo) <= opts.rel_tol) {
    out.mu_star = mu_lo;
    out.xi_E_achieved = e_lo;
  } else if (rel_err(e_hi) <= opts.rel_tol) {
    out.mu_star = mu_hi;
    out.xi_E_achieved = e_hi;
  } else if (d < e_lo || d > e_hi) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "covert_information: d=%.6e outside bracket range "
                  "[%.6e, %.6e]",
                  d, e_lo, e_hi);
    throw bracket_error(msg);
  } else {
    double lo = mu_lo, hi = mu_hi;
    double mu_mid = std::sqrt(lo * hi);
    double e_mid = rate_at(mu_mid);
    while (out.iterations < opts.max_iterations &&
           rel_err(e_mid) > opts.rel_tol) {
      if (e_mid < d) {
        lo = mu_mid;
      } else {
        hi = mu_mid;
      }
      mu_mid = std::sqrt(lo * hi);
      e_mid = rate_at(mu_mid);
      ++out.iterations;
      if ((hi - lo) / mu_mid < 1e-15) break;
    }
    out.mu_star = mu_mid;
    out.xi_E_achieved = e_mid;
  }
  out.converged = rel_err(out.xi_E_achieved) <= 1e-6;
  const ProbeSpec probe{family, out.mu_star, copies};
  out.i_c = alice_rate(ch, probe, opts.rates);
  return out;
}

/// Evaluate the trade-off pair per grid point; output sorted by xi_E.
inline std::vector<TradeoffPoint> tradeoff_curve(const ChannelParams& ch,
                                                 ProbeFamily family, int copies,
                                                 const std::vector<double>& mu_grid,
                                                 const RateOptions& opts = {}) {
  ch.validate();
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!(mu_grid[i] > 0.0)) {
      throw std::domain_error("tradeoff_curve: mu grid must be positive");
    }
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) {
      throw std::domain_error("tradeoff_curve: mu grid must be ascending");
    }
  }
  std::vector<TradeoffPoint> points;
  points.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    const ProbeSpec probe{family, mu, copies};
    const ScenarioRates r = delta_xi(ch, probe, opts);
    TradeoffPoint p;
    p.mu = mu;
    p.xi_E = r.xi_E;
    p.xi_A = r.xi_A;
    p.delta_xi = r.delta_xi;
    points.push_back(p);
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const TradeoffPoint& a, const TradeoffPoint& b) {
                     return a.xi_E < b.xi_E;
                   });
  return points;
}

/// For each beta >= 0, maximize xi_A - beta*xi_E over mu in the bracket:
/// coarse geometric scan, then golden-section refinement in log-mu when the
/// maximizer is interior. Edge maximizers are returned flagged.
inline std::vector<TradeoffPoint> lagrangian_sweep(const ChannelParams& ch,
                                                   ProbeFamily family, int copies,
                                                   const std::vector<double>& betas,
                                                   double mu_lo, double mu_hi,
                                                   const SolverOptions& opts = {}) {
  ch.validate();
  if (!(mu_lo > 0.0) || !(mu_hi > mu_lo)) {
    throw bracket_error("lagrangian_sweep: need 0 < mu_lo < mu_hi");
  }
  for (double beta : betas) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw std::domain_error("lagrangian_sweep: beta must be >= 0");
    }
  }
  const std::vector<double> grid =
      detail::geometric_grid(mu_lo, mu_hi, std::max(opts.scan_points, 5));
  std::vector<ScenarioRates> scan;
  scan.reserve(grid.size());
  for (double mu : grid) {
    scan.push_back(delta_xi(ch, ProbeSpec{family, mu, copies}, opts.rates));
  }
  auto objective = [&](double mu, double beta) {
    const ScenarioRates r = delta_xi(ch, ProbeSpec{family, mu, copies}, opts.rates);
    return r.xi_A - beta * r.xi_E;
  };
  std::vector<TradeoffPoint> points;
  points.reserve(betas.size());
  for (double beta : betas) {
    std::size_t best = 0;
    double best_val = scan[0].xi_A - beta * scan[0].xi_E;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double v = scan[i].xi_A - beta * scan[i].xi_E;
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    double mu_hat;
    bool at_edge = false;
    if (best == 0 || best + 1 == grid.size()) {
      mu_hat = grid[best];
      at_edge = true;
    } else {
      // golden section in log-mu on the bracketing cells
      constexpr double invphi = 0.6180339887498949;
      double lo = std::log(grid[best - 1]);
      double hi = std::log(grid[best + 1]);
      double x1 = hi - invphi * (hi - lo);
      double x2 = lo + invphi * (hi - lo);
      double f1 = objective(std::exp(x1), beta);
      double f2 = objective(std::exp(x2), beta);
      for (int it = 0; it < 120 && (hi - lo) > 1e-10; ++it) {
        if (f1 >= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - invphi * (hi - lo);
          f1 = objective(std::exp(x1), beta);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + invphi * (hi - lo);
          f2 = objective(std::exp(x2), beta);
        }
      }
      mu_hat = std::exp(0.5 * (lo + hi));
    }
    const ScenarioRates r = delta_xi(ch, ProbeSpec{family, mu_hat, copies}, opts.rates);
    TradeoffPoint p;
    p.mu = mu_hat;
    p.xi_E = r.xi_E;
    p.xi_A = r.xi_A;
    p.delta_xi = r.delta_xi;
    p.beta = beta;
    p.at_edge = at_edge;
    points.push_back(p);
  }
  return points;
}

}  // namespace covert
