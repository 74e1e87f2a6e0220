// SPDX-License-Identifier: Apache-2.0
//
// Truncated photon-number distributions and the transformations induced by
// loss channels, thermal/Poisson sources and entangled signal-idler probes.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covert {

/// Default per-distribution truncation budget. Exponent computations are
/// log-scale sensitive, so leaked tail mass must stay far below the smallest
/// rates of interest (~1e-9).
inline constexpr double kDefaultTailEps = 1e-12;

/// Hard cap on the support of any one axis. Hitting it raises
/// truncation_error instead of silently clipping mass.
inline constexpr std::size_t kSupportCeiling = 4096;

/// Thrown when a distribution cannot be represented within the configured
/// tail budget and support ceiling.
class truncation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Neumaier-compensated accumulator; tail masses live at the 1e-12 scale so
/// plain summation over thousands of entries is not good enough.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

inline void check_tail_eps(double eps_tail) {
  if (!(eps_tail > 0.0) || !(eps_tail < 1e-3)) {
    throw std::domain_error("eps_tail must lie in (0, 1e-3), got " +
                            std::to_string(eps_tail));
  }
}

inline void check_nonneg_mean(double mean, const char* what) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw std::domain_error(std::string(what) +
                            " requires a finite nonnegative mean, got " +
                            std::to_string(mean));
  }
}

}  // namespace detail

/// Probability mass function over photon counts n = 0..N_max, truncated so
/// the unrepresented tail stays below tail_budget. Entries are plain
/// probabilities; tail_mass records 1 minus the represented mass.
struct Pmf1D {
  std::vector<double> probs;
  double tail_mass = 0.0;
  double tail_budget = kDefaultTailEps;

  std::size_t size() const { return probs.size(); }

  double operator[](std::size_t n) const {
    return n < probs.size() ? probs[n] : 0.0;
  }

  /// Represented mass (compensated sum of entries).
  double mass() const {
    detail::NeumaierSum s;
    for (double v : probs) s.add(v);
    return s.value();
  }

  double mean() const {
    detail::NeumaierSum s;
    for (std::size_t n = 0; n < probs.size(); ++n) {
      s.add(static_cast<double>(n) * probs[n]);
    }
    return s.value();
  }
};

/// Joint pmf over (signal count, idler count), row-major in the signal index.
struct Pmf2D {
  std::vector<double> probs;
  std::size_t signal_size = 0;
  std::size_t idler_size = 0;
  double tail_mass = 0.0;
  double tail_budget = kDefaultTailEps;

  double at(std::size_t k, std::size_t n) const {
    return (k < signal_size && n < idler_size) ? probs[k * idler_size + n]
                                               : 0.0;
  }

  Pmf1D signal_marginal() const {
    Pmf1D m;
    m.probs.assign(signal_size, 0.0);
    for (std::size_t k = 0; k < signal_size; ++k) {
      detail::NeumaierSum row;
      for (std::size_t n = 0; n < idler_size; ++n) {
        row.add(probs[k * idler_size + n]);
      }
      m.probs[k] = row.value();
    }
    m.tail_mass = tail_mass;
    m.tail_budget = tail_budget;
    return m;
  }

  Pmf1D idler_marginal() const {
    Pmf1D m;
    m.probs.assign(idler_size, 0.0);
    for (std::size_t k = 0; k < signal_size; ++k) {
      for (std::size_t n = 0; n < idler_size; ++n) {
        m.probs[n] += probs[k * idler_size + n];
      }
    }
    m.tail_mass = tail_mass;
    m.tail_budget = tail_budget;
    return m;
  }
};

/// Target/environment parameters: target reflectance, collection
/// efficiencies, mean background photons and number of ranging slots.
struct ChannelParams {
  double kappa = 0.2;
  double eta_A = 1.0;
  double eta_E = 1.0;
  double mu_B = 10.0;
  int m_slots = 2;

  void validate() const {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!in_unit(kappa)) throw std::domain_error("kappa must lie in [0,1]");
    if (!in_unit(eta_A)) throw std::domain_error("eta_A must lie in [0,1]");
    if (!in_unit(eta_E)) throw std::domain_error("eta_E must lie in [0,1]");
    if (!std::isfinite(mu_B) || mu_B < 0.0) {
      throw std::domain_error("mu_B must be finite and nonnegative");
    }
    if (m_slots < 2) throw std::domain_error("m_slots must be at least 2");
  }
};

enum class ProbeFamily { Coherent, Tmsv };

/// Probe family and energy. For Tmsv, `copies` is the number of signal-idler
/// copies per transmission and mu the total mean signal photons across them.
struct ProbeSpec {
  ProbeFamily family = ProbeFamily::Coherent;
  double mu = 0.0;
  int copies = 1;

  double per_copy_mean() const {
    return copies >= 1 ? mu / static_cast<double>(copies) : 0.0;
  }

  void validate() const {
    if (!std::isfinite(mu) || mu < 0.0) {
      throw std::domain_error("probe mu must be finite and nonnegative");
    }
    if (copies < 1) throw std::domain_error("probe copies must be >= 1");
  }
};

namespace detail {

inline Pmf1D delta_at_zero(double eps_tail = kDefaultTailEps) {
  Pmf1D p;
  p.probs = {1.0};
  p.tail_mass = 0.0;
  p.tail_budget = eps_tail;
  return p;
}

/// Grow probs[n] = term(n) until the represented mass reaches 1 - eps_tail
/// and the entries themselves have fallen to eps_tail * 1e-5. The extra
/// entries cost little support but keep comparisons against much wider
/// distributions accurate: what matters for the rate computations is the
/// overlap mass outside the stored support, not just this pmf's own tail.
/// The tail is then recorded by summing the continuation directly: 1 minus
/// the cumulative sum would carry the absolute round-off of the O(1)
/// entries, which is larger than the tail itself.
template <class TermFn>
Pmf1D build_truncated(TermFn&& term, double eps_tail, const char* what) {
  Pmf1D out;
  out.tail_budget = eps_tail;
  NeumaierSum s;
  double prev = -1.0;
  for (std::size_t n = 0; n < kSupportCeiling; ++n) {
    const double t = term(n);
    out.probs.push_back(t);
    s.add(t);
    // Secondary stop: once terms decay to far below eps_tail the remaining
    // mass is negligible even when round-off keeps 1 - s from reaching the
    // cumulative threshold.
    if ((1.0 - s.value() < eps_tail && !(t > eps_tail * 1e-5)) ||
        (t < prev && t * 1e6 < eps_tail)) {
      NeumaierSum tail;
      for (std::size_t m = n + 1; m < n + 1 + 4 * kSupportCeiling; ++m) {
        const double cont = term(m);
        tail.add(cont);
        if (!(cont > tail.value() * 1e-18)) break;
      }
      out.tail_mass = std::max(0.0, tail.value());
      return out;
    }
    prev = t;
  }
  throw truncation_error(std::string(what) + ": support exceeds ceiling " +
                         std::to_string(kSupportCeiling) +
                         " before reaching tail budget");
}

}  // namespace detail

/// Poisson pmf with the given mean, truncated at the smallest N_max whose
/// remaining tail is below eps_tail.
inline Pmf1D poisson_pmf(double mean, double eps_tail = kDefaultTailEps) {
  detail::check_nonneg_mean(mean, "poisson_pmf");
  detail::check_tail_eps(eps_tail);
  if (mean == 0.0) return detail::delta_at_zero(eps_tail);
  if (mean < 700.0) {
    // recurrence from exp(-mean); better relative accuracy than the lgamma
    // form and exact-mass cancellation between nearby means
    double value = 0.0;
    return detail::build_truncated(
        [&, value](std::size_t n) mutable {
          if (n == 0) {
            value = std::exp(-mean);
          } else {
            value *= mean / static_cast<double>(n);
          }
          return value;
        },
        eps_tail, "poisson_pmf");
  }
  const double log_mean = std::log(mean);
  return detail::build_truncated(
      [&](std::size_t n) {
        return std::exp(-mean + static_cast<double>(n) * log_mean -
                        std::lgamma(static_cast<double>(n) + 1.0));
      },
      eps_tail, "poisson_pmf");
}

/// Thermal (geometric) pmf: p(n) = mu^n / (1+mu)^(n+1).
inline Pmf1D thermal_pmf(double mean, double eps_tail = kDefaultTailEps) {
  detail::check_nonneg_mean(mean, "thermal_pmf");
  detail::check_tail_eps(eps_tail);
  if (mean == 0.0) return detail::delta_at_zero(eps_tail);
  const double ratio = mean / (1.0 + mean);
  double value = 1.0 / (1.0 + mean);
  return detail::build_truncated(
      [&](std::size_t n) {
        const double v = value;
        (void)n;
        value *= ratio;
        return v;
      },
      eps_tail, "thermal_pmf");
}

/// Photon-count law of `copies` independent thermal modes carrying
/// total_mean photons in aggregate: negative binomial with integer shape.
inline Pmf1D multithermal_pmf(int copies, double total_mean,
                              double eps_tail = kDefaultTailEps) {
  if (copies < 1) throw std::domain_error("multithermal_pmf: copies must be >= 1");
  detail::check_nonneg_mean(total_mean, "multithermal_pmf");
  detail::check_tail_eps(eps_tail);
  if (total_mean == 0.0) return detail::delta_at_zero(eps_tail);
  if (copies == 1) return thermal_pmf(total_mean, eps_tail);
  const double mu0 = total_mean / static_cast<double>(copies);
  const double r = static_cast<double>(copies);
  const double ratio = mu0 / (1.0 + mu0);
  const double log_p0 = -r * std::log1p(mu0);
  if (log_p0 > -700.0) {
    // negative-binomial recurrence p(n+1) = p(n) * ratio * (r+n)/(n+1)
    double value = 0.0;
    return detail::build_truncated(
        [&, value](std::size_t n) mutable {
          if (n == 0) {
            value = std::exp(log_p0);
          } else {
            const double nn = static_cast<double>(n);
            value *= ratio * (r + nn - 1.0) / nn;
          }
          return value;
        },
        eps_tail, "multithermal_pmf");
  }
  const double log_ratio = std::log(mu0) - std::log1p(mu0);
  const double log_base = log_p0 - std::lgamma(r);
  return detail::build_truncated(
      [&](std::size_t n) {
        const double nn = static_cast<double>(n);
        return std::exp(log_base + std::lgamma(nn + r) - std::lgamma(nn + 1.0) +
                        nn * log_ratio);
      },
      eps_tail, "multithermal_pmf");
}

/// Binomial thinning: each count survives independently with probability tau.
/// Mass conservation keeps the input tail as tail; the support is unchanged.
inline Pmf1D thin(const Pmf1D& p, double tau) {
  if (!std::isfinite(tau) || tau < 0.0 || tau > 1.0) {
    throw std::domain_error("thin: tau must lie in [0,1]");
  }
  if (tau == 1.0) return p;
  Pmf1D out;
  out.tail_budget = p.tail_budget;
  if (tau == 0.0) {
    out.probs = {p.mass()};
    out.tail_mass = std::max(0.0, 1.0 - out.probs[0]);
    return out;
  }
  const std::size_t n_max = p.size();
  std::vector<double> lg(n_max + 1);
  for (std::size_t i = 0; i <= n_max; ++i) {
    lg[i] = std::lgamma(static_cast<double>(i) + 1.0);
  }
  const double log_tau = std::log(tau);
  const double log_1mt = std::log1p(-tau);
  std::vector<detail::NeumaierSum> acc(n_max);
  for (std::size_t n = 0; n < n_max; ++n) {
    if (p.probs[n] == 0.0) continue;
    for (std::size_t k = 0; k <= n; ++k) {
      const double log_binom = lg[n] - lg[k] - lg[n - k];
      const double w = std::exp(log_binom + static_cast<double>(k) * log_tau +
                                static_cast<double>(n - k) * log_1mt);
      acc[k].add(p.probs[n] * w);
    }
  }
  out.probs.resize(n_max);
  detail::NeumaierSum total;
  for (std::size_t k = 0; k < n_max; ++k) {
    out.probs[k] = acc[k].value();
    total.add(out.probs[k]);
  }
  out.tail_mass = std::max(0.0, 1.0 - total.value());
  return out;
}

namespace detail {

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

inline std::vector<double> convolve_direct(const std::vector<double>& a,
                                           const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

inline std::vector<double> convolve_fft(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  const std::size_t need = a.size() + b.size() - 1;
  std::size_t n = std::bit_ceil(need);
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft_inplace(fa, false);
  fft_inplace(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft_inplace(fa, true);
  std::vector<double> out(need);
  for (std::size_t i = 0; i < need; ++i) {
    // round-off can leave tiny negative values; probabilities are clamped
    out[i] = std::max(0.0, fa[i].real());
  }
  return out;
}

}  // namespace detail

/// Distribution of the sum of two independent counts. Direct summation for
/// small supports, transform-based convolution otherwise.
inline Pmf1D convolve(const Pmf1D& p, const Pmf1D& q) {
  if (p.probs.empty() || q.probs.empty()) {
    throw std::domain_error("convolve: empty pmf");
  }
  // point mass at zero is the identity element; return the partner verbatim
  if (p.size() == 1 && p.probs[0] == 1.0) {
    Pmf1D out = q;
    out.tail_budget += p.tail_budget;
    return out;
  }
  if (q.size() == 1 && q.probs[0] == 1.0) {
    Pmf1D out = p;
    out.tail_budget += q.tail_budget;
    return out;
  }
  Pmf1D out;
  out.tail_budget = p.tail_budget + q.tail_budget;
  out.probs = (p.size() < 256 && q.size() < 256)
                  ? detail::convolve_direct(p.probs, q.probs)
                  : detail::convolve_fft(p.probs, q.probs);
  if (out.probs.size() > kSupportCeiling) {
    throw truncation_error("convolve: result support exceeds ceiling");
  }
  detail::NeumaierSum s;
  for (double v : out.probs) s.add(v);
  out.tail_mass = std::max(0.0, 1.0 - s.value());
  return out;
}

namespace detail {

/// Move trailing entries (at most `allot` total mass) into the tail.
inline void retruncate(Pmf1D& p, double allot) {
  double trimmed = 0.0;
  while (p.probs.size() > 1 && trimmed + p.probs.back() <= allot) {
    trimmed += p.probs.back();
    p.probs.pop_back();
  }
  p.tail_mass += trimmed;
  p.tail_budget += allot;
}

}  // namespace detail

/// Distribution of the sum of `copies` i.i.d. draws from p, via repeated
/// squaring. Each convolution re-truncates within a slice of the tail budget
/// so the total trimmed mass stays below p.tail_budget.
inline Pmf1D iid_power(const Pmf1D& p, int copies) {
  if (copies < 1) throw std::domain_error("iid_power: copies must be >= 1");
  if (copies == 1) return p;
  const unsigned bits = std::bit_width(static_cast<unsigned>(copies));
  const int conv_events =
      static_cast<int>(bits - 1) + std::popcount(static_cast<unsigned>(copies)) - 1;
  const double allot = p.tail_budget / static_cast<double>(std::max(conv_events, 1));
  Pmf1D base = p;
  Pmf1D acc;
  bool have_acc = false;
  unsigned rest = static_cast<unsigned>(copies);
  while (rest != 0) {
    if (rest & 1u) {
      if (have_acc) {
        acc = convolve(acc, base);
        detail::retruncate(acc, allot);
      } else {
        acc = base;
        have_acc = true;
      }
    }
    rest >>= 1;
    if (rest != 0) {
      base = convolve(base, base);
      detail::retruncate(base, allot);
    }
  }
  return acc;
}

/// Independent product of a signal-count law and an idler-count law.
inline Pmf2D product_pmf2d(const Pmf1D& signal, const Pmf1D& idler) {
  Pmf2D out;
  out.signal_size = signal.size();
  out.idler_size = idler.size();
  out.probs.resize(out.signal_size * out.idler_size);
  for (std::size_t k = 0; k < out.signal_size; ++k) {
    for (std::size_t n = 0; n < out.idler_size; ++n) {
      out.probs[k * out.idler_size + n] = signal.probs[k] * idler.probs[n];
    }
  }
  out.tail_mass = signal.tail_mass + idler.tail_mass - signal.tail_mass * idler.tail_mass;
  out.tail_budget = signal.tail_budget + idler.tail_budget;
  return out;
}

/// Joint (signal, idler) count distribution of `copies` two-mode squeezed
/// vacuum copies with total mean mu, after the signal arm passes a loss
/// channel of transmittance tau and picks up Poissonian background mu_B.
///
/// Photon numbers of signal and idler are perfectly correlated per copy, and
/// thinning each copy by the same tau makes the aggregate signal count a
/// Binomial(total idler count, tau) draw; the aggregate background is added
/// once to the signal axis.
inline Pmf2D tmsv_joint(int copies, double total_mean, double tau, double mu_B,
                        double eps_tail = kDefaultTailEps) {
  if (copies < 1) throw std::domain_error("tmsv_joint: copies must be >= 1");
  detail::check_nonneg_mean(total_mean, "tmsv_joint");
  detail::check_nonneg_mean(mu_B, "tmsv_joint background");
  if (!std::isfinite(tau) || tau < 0.0 || tau > 1.0) {
    throw std::domain_error("tmsv_joint: tau must lie in [0,1]");
  }
  detail::check_tail_eps(eps_tail);
  const Pmf1D idler = multithermal_pmf(copies, total_mean, eps_tail / 2.0);
  const Pmf1D background = poisson_pmf(mu_B, eps_tail / 2.0);
  const std::size_t ni = idler.size();
  const std::size_t nk = (ni - 1) + background.size();
  if (nk > kSupportCeiling) {
    throw truncation_error("tmsv_joint: signal support exceeds ceiling");
  }
  Pmf2D out;
  out.signal_size = nk;
  out.idler_size = ni;
  out.probs.assign(nk * ni, 0.0);
  out.tail_budget = eps_tail;

  std::vector<double> lg(ni + 1);
  for (std::size_t i = 0; i <= ni; ++i) {
    lg[i] = std::lgamma(static_cast<double>(i) + 1.0);
  }
  std::vector<double> binom;
  for (std::size_t n = 0; n < ni; ++n) {
    const double w = idler.probs[n];
    if (w == 0.0) continue;
    binom.assign(n + 1, 0.0);
    if (tau == 0.0) {
      binom[0] = 1.0;
    } else if (tau == 1.0) {
      binom[n] = 1.0;
    } else {
      const double lt = std::log(tau);
      const double l1t = std::log1p(-tau);
      for (std::size_t j = 0; j <= n; ++j) {
        binom[j] = std::exp(lg[n] - lg[j] - lg[n - j] +
                            static_cast<double>(j) * lt +
                            static_cast<double>(n - j) * l1t);
      }
    }
    for (std::size_t j = 0; j <= n; ++j) {
      const double wj = w * binom[j];
      if (wj == 0.0) continue;
      for (std::size_t b = 0; b < background.size(); ++b) {
        out.probs[(j + b) * ni + n] += wj * background.probs[b];
      }
    }
  }
  // drop trailing all-zero signal rows (tau = 0 or mu_B = 0 leave them)
  std::size_t used_rows = nk;
  while (used_rows > 1) {
    bool empty_row = true;
    for (std::size_t n = 0; n < ni && empty_row; ++n) {
      empty_row = out.probs[(used_rows - 1) * ni + n] == 0.0;
    }
    if (!empty_row) break;
    --used_rows;
  }
  if (used_rows != nk) {
    out.probs.resize(used_rows * ni);
    out.signal_size = used_rows;
  }
  detail::NeumaierSum s;
  for (double v : out.probs) s.add(v);
  out.tail_mass = std::max(0.0, 1.0 - s.value());
  if (out.tail_mass > out.tail_budget) {
    throw truncation_error("tmsv_joint: tail budget exceeded");
  }
  return out;
}

/// Photon counts returned to a detector by a coherent probe of mean mu after
/// transmittance tau, mixed with Poissonian background mu_B.
inline Pmf1D coherent_return_pmf(double mu, double tau, double mu_B,
                                 double eps_tail = kDefaultTailEps) {
  detail::check_nonneg_mean(mu, "coherent_return_pmf");
  detail::check_nonneg_mean(mu_B, "coherent_return_pmf background");
  if (!std::isfinite(tau) || tau < 0.0 || tau > 1.0) {
    throw std::domain_error("coherent_return_pmf: tau must lie in [0,1]");
  }
  return poisson_pmf(tau * mu + mu_B, eps_tail);
}

/// Zero-pad to a fixed support length (entries beyond keep probability 0).
inline Pmf1D pad(const Pmf1D& p, std::size_t size) {
  Pmf1D out = p;
  if (out.probs.size() < size) out.probs.resize(size, 0.0);
  return out;
}

inline Pmf2D pad(const Pmf2D& p, std::size_t signal_size, std::size_t idler_size) {
  signal_size = std::max(signal_size, p.signal_size);
  idler_size = std::max(idler_size, p.idler_size);
  Pmf2D out;
  out.signal_size = signal_size;
  out.idler_size = idler_size;
  out.tail_mass = p.tail_mass;
  out.tail_budget = p.tail_budget;
  out.probs.assign(signal_size * idler_size, 0.0);
  for (std::size_t k = 0; k < p.signal_size; ++k) {
    for (std::size_t n = 0; n < p.idler_size; ++n) {
      out.probs[k * idler_size + n] = p.probs[k * p.idler_size + n];
    }
  }
  return out;
}

/// Flattened independent product of two cell vectors (used to build explicit
/// multi-slot hypotheses). Cell (i,j) of the product sits at i*q.size()+j, so
/// operands must already share support lengths for cross-products to align.
inline Pmf1D product_pmf(const Pmf1D& p, const Pmf1D& q) {
  Pmf1D out;
  out.probs.resize(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      out.probs[i * q.size() + j] = p.probs[i] * q.probs[j];
    }
  }
  out.tail_mass = p.tail_mass + q.tail_mass - p.tail_mass * q.tail_mass;
  out.tail_budget = p.tail_budget + q.tail_budget;
  return out;
}

/// View a joint pmf as a flat distribution over cells.
inline Pmf1D flatten(const Pmf2D& p) {
  Pmf1D out;
  out.probs = p.probs;
  out.tail_mass = p.tail_mass;
  out.tail_budget = p.tail_budget;
  return out;
}

}  // namespace covert
