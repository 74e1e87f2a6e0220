// SPDX-License-Identifier: Apache-2.0
//
// Chernoff and Bhattacharyya information between truncated count
// distributions, analytic Poisson references, and the multi-hypothesis
// minimum-pair rule.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "covert/photon_stats.hpp"

namespace covert {

inline constexpr double kDefaultAlphaTol = 1e-10;

/// Result of a rate computation: nats per mode, the optimizing alpha, the
/// final bracketing width of the search, and an explicit flag for effectively
/// disjoint supports (rather than a large stand-in number).
struct RateResult {
  double rate = 0.0;
  double alpha_star = 0.5;
  double achieved_tol = 0.0;
  bool infinite = false;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !(alpha <= 1.0)) {
    throw std::domain_error("alpha must lie in [0,1]");
  }
}

/// Nonnegative gap alpha*p + (1-alpha)*q - p^alpha q^(1-alpha) for one cell.
/// Computed in a cancellation-free form around q ~ p; zero cells follow the
/// convention that the geometric term vanishes whenever either side is zero.
inline double am_gm_gap(double pv, double qv, double alpha) {
  const double c = 1.0 - alpha;
  if (pv <= 0.0 || qv <= 0.0) {
    return alpha * pv + c * qv;
  }
  if (alpha == 0.5) {
    // exactly symmetric in (p, q), as the Bhattacharyya case requires
    const double diff = std::sqrt(pv) - std::sqrt(qv);
    return 0.5 * diff * diff;
  }
  const double u = (qv - pv) / pv;
  double t;
  if (u > -0.5 && u < 1.0) {
    t = pv * (c * u - std::expm1(c * std::log1p(u)));
  } else {
    t = alpha * pv + c * qv -
        std::exp(alpha * std::log(pv) + c * std::log(qv));
  }
  return t > 0.0 ? t : 0.0;
}

/// Core C_alpha over aligned cells plus one pseudo-cell holding each
/// distribution's mass outside the common region (truncation tails and
/// support mismatch). Summing the per-cell AM-GM gaps gives 1 - S directly,
/// which keeps tiny rates (~1e-9) at full relative precision; the plain
/// log-sum-exp route takes over once S itself is small.
template <class CellRange>
double c_alpha_core(const CellRange& cells, double p_out, double q_out,
                    double alpha) {
  check_alpha(alpha);
  NeumaierSum gap;
  cells([&](double pv, double qv) { gap.add(am_gm_gap(pv, qv, alpha)); });
  gap.add(am_gm_gap(p_out, q_out, alpha));
  double d = gap.value();
  if (d < 0.0) d = 0.0;
  if (d < 0.999999) {
    return -std::log1p(-d);
  }
  const double c = 1.0 - alpha;
  double max_term = -std::numeric_limits<double>::infinity();
  auto log_term = [&](double pv, double qv) {
    if (pv <= 0.0 || qv <= 0.0) return;
    const double t = alpha * std::log(pv) + c * std::log(qv);
    if (t > max_term) max_term = t;
  };
  cells(log_term);
  log_term(p_out, q_out);
  if (!std::isfinite(max_term)) {
    return std::numeric_limits<double>::infinity();
  }
  NeumaierSum s;
  auto add_term = [&](double pv, double qv) {
    if (pv <= 0.0 || qv <= 0.0) return;
    s.add(std::exp(alpha * std::log(pv) + c * std::log(qv) - max_term));
  };
  cells(add_term);
  add_term(p_out, q_out);
  return -(max_term + std::log(s.value()));
}

inline double outside_mass(const Pmf1D& p, std::size_t common) {
  NeumaierSum s;
  for (std::size_t i = common; i < p.size(); ++i) s.add(p.probs[i]);
  s.add(p.tail_mass);
  return std::max(0.0, s.value());
}

inline double outside_mass(const Pmf2D& p, std::size_t common_signal,
                           std::size_t common_idler) {
  NeumaierSum s;
  for (std::size_t k = 0; k < p.signal_size; ++k) {
    for (std::size_t n = 0; n < p.idler_size; ++n) {
      if (k >= common_signal || n >= common_idler) {
        s.add(p.probs[k * p.idler_size + n]);
      }
    }
  }
  s.add(p.tail_mass);
  return std::max(0.0, s.value());
}

}  // namespace detail

/// C_alpha(p, q) = -log sum_x p(x)^alpha q(x)^(1-alpha) in nats.
/// Returns +infinity when the supports share no mass at all.
inline double c_alpha(const Pmf1D& p, const Pmf1D& q, double alpha) {
  const std::size_t common = std::min(p.size(), q.size());
  auto cells = [&](auto&& visit) {
    for (std::size_t i = 0; i < common; ++i) visit(p.probs[i], q.probs[i]);
  };
  return detail::c_alpha_core(cells, detail::outside_mass(p, common),
                              detail::outside_mass(q, common), alpha);
}

inline double c_alpha(const Pmf2D& p, const Pmf2D& q, double alpha) {
  const std::size_t cs = std::min(p.signal_size, q.signal_size);
  const std::size_t ci = std::min(p.idler_size, q.idler_size);
  auto cells = [&](auto&& visit) {
    for (std::size_t k = 0; k < cs; ++k) {
      for (std::size_t n = 0; n < ci; ++n) {
        visit(p.probs[k * p.idler_size + n], q.probs[k * q.idler_size + n]);
      }
    }
  };
  return detail::c_alpha_core(cells, detail::outside_mass(p, cs, ci),
                              detail::outside_mass(q, cs, ci), alpha);
}

/// Bhattacharyya information B = C_{1/2}; symmetric in its arguments.
template <class Pmf>
double bhattacharyya(const Pmf& p, const Pmf& q) {
  return c_alpha(p, q, 0.5);
}

namespace detail {

/// Golden-section maximization of a concave function on [0,1], keeping the
/// best evaluation seen (the top can be flat at round-off scale).
template <class F>
RateResult maximize_over_alpha(F&& f, double alpha_tol) {
  if (!(alpha_tol > 0.0)) throw std::domain_error("alpha_tol must be positive");
  constexpr double invphi = 0.6180339887498949;
  double best_x = 0.5;
  double best_f = f(0.5);
  auto consider = [&](double x, double v) {
    if (v > best_f) {
      best_f = v;
      best_x = x;
    }
  };
  double lo = 0.0, hi = 1.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < 200 && (hi - lo) > alpha_tol; ++it) {
    if (std::isinf(best_f)) break;
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
      consider(x1, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
      consider(x2, f2);
    }
  }
  RateResult out;
  out.rate = best_f;
  out.alpha_star = best_x;
  out.achieved_tol = hi - lo;
  out.infinite = std::isinf(best_f);
  return out;
}

}  // namespace detail

/// Chernoff information: max over alpha in [0,1] of C_alpha(p, q).
template <class Pmf>
RateResult chernoff(const Pmf& p, const Pmf& q,
                    double alpha_tol = kDefaultAlphaTol) {
  return detail::maximize_over_alpha(
      [&](double a) { return c_alpha(p, q, a); }, alpha_tol);
}

/// Closed-form C_alpha between Poisson laws:
/// alpha*l0 + (1-alpha)*l1 - l0^alpha l1^(1-alpha), evaluated without
/// cancellation for nearly equal means.
inline double poisson_c_alpha_closed(double lambda0, double lambda1,
                                     double alpha) {
  detail::check_alpha(alpha);
  detail::check_nonneg_mean(lambda0, "poisson_c_alpha_closed");
  detail::check_nonneg_mean(lambda1, "poisson_c_alpha_closed");
  if (lambda0 == lambda1) return 0.0;
  if (lambda0 == 0.0) return alpha == 0.0 ? 0.0 : (1.0 - alpha) * lambda1;
  if (lambda1 == 0.0) return alpha == 1.0 ? 0.0 : alpha * lambda0;
  double lo = lambda0, hi = lambda1, a = alpha;
  if (lo > hi) {
    std::swap(lo, hi);
    a = 1.0 - a;
  }
  // C_a(lo, hi) = hi - a*(hi - lo) - hi*exp(-a*log(hi/lo)), rearranged so the
  // near-equal-means case is a difference of two small terms.
  const double diff = hi - lo;
  const double dbar = std::log1p(diff / lo);
  const double value = -a * diff - hi * std::expm1(-a * dbar);
  return value > 0.0 ? value : 0.0;
}

/// Exact optimum of the Poisson C_alpha; the stationary point solves
/// lo^a hi^(1-a) = (hi - lo)/log(hi/lo).
inline RateResult poisson_chernoff_closed(double lambda0, double lambda1) {
  detail::check_nonneg_mean(lambda0, "poisson_chernoff_closed");
  detail::check_nonneg_mean(lambda1, "poisson_chernoff_closed");
  RateResult out;
  out.achieved_tol = 0.0;
  if (lambda0 == lambda1) {
    out.rate = 0.0;
    out.alpha_star = 0.5;
    return out;
  }
  if (lambda0 == 0.0 || lambda1 == 0.0) {
    out.rate = std::numeric_limits<double>::infinity();
    out.infinite = true;
    out.alpha_star = lambda0 == 0.0 ? 0.0 : 1.0;
    return out;
  }
  const bool swapped = lambda0 > lambda1;
  const double lo = swapped ? lambda1 : lambda0;
  const double hi = swapped ? lambda0 : lambda1;
  const double diff = hi - lo;
  const double dbar = std::log1p(diff / lo);
  double a_star = std::log(hi * dbar / diff) / dbar;
  a_star = std::min(1.0, std::max(0.0, a_star));
  out.rate = -a_star * diff - hi * std::expm1(-a_star * dbar);
  if (out.rate < 0.0) out.rate = 0.0;
  out.alpha_star = swapped ? 1.0 - a_star : a_star;
  return out;
}

/// Multi-hypothesis rate: minimum pairwise Chernoff information over all
/// unordered pairs; returns the minimizing pair's result.
template <class Pmf>
RateResult min_pair_rate(const std::vector<Pmf>& hypotheses,
                         double alpha_tol = kDefaultAlphaTol) {
  if (hypotheses.size() < 2) {
    throw std::domain_error("min_pair_rate needs at least 2 hypotheses");
  }
  RateResult best;
  bool have = false;
  for (std::size_t i = 0; i + 1 < hypotheses.size(); ++i) {
    for (std::size_t j = i + 1; j < hypotheses.size(); ++j) {
      RateResult r = chernoff(hypotheses[i], hypotheses[j], alpha_tol);
      const bool better =
          !have || (best.infinite && !r.infinite) ||
          (!best.infinite && !r.infinite && r.rate < best.rate);
      if (better) {
        best = r;
        have = true;
      }
    }
  }
  return best;
}

}  // namespace covert
