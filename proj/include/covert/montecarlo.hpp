// SPDX-License-Identifier: Apache-2.0
//
// Empirical validation of the exponents: counter-based sampling, exact-model
// maximum-likelihood decisions, error-probability estimates and the decay
// exponent fit against exp(-M*xi).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "covert/sensing.hpp"

namespace covert {

class insufficient_data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Splitmix-style generator whose state is derived from (seed, substream
/// path); equal paths give bit-identical streams regardless of execution
/// order, which keeps parallel runs reproducible.
struct CounterRng {
  std::uint64_t state = 0;

  static CounterRng substream(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t k = detail::mix64(seed);
    k = detail::mix64(k ^ a);
    k = detail::mix64(k ^ b);
    k = detail::mix64(k ^ c);
    return CounterRng{k};
  }

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }
};

/// Inverse-CDF sampler over flattened cells. Residual tail mass is assigned
/// to the last cell, a documented bias below the pmf's tail budget per draw.
struct FlatSampler {
  std::vector<double> cdf;

  explicit FlatSampler(const std::vector<double>& probs) : cdf(probs.size()) {
    double run = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      run += probs[i];
      cdf[i] = run;
    }
  }

  std::size_t draw(CounterRng& rng) const {
    const double u = rng.next_unit();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return cdf.size() - 1;
    return static_cast<std::size_t>(it - cdf.begin());
  }
};

/// i.i.d. photon-count samples via inverse CDF on the truncated support.
inline std::vector<int> sample(const Pmf1D& p, CounterRng& rng, std::size_t n) {
  const FlatSampler sampler(p.probs);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<int>(sampler.draw(rng));
  }
  return out;
}

inline std::vector<std::pair<int, int>> sample(const Pmf2D& p, CounterRng& rng,
                                               std::size_t n) {
  const FlatSampler sampler(p.probs);
  std::vector<std::pair<int, int>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cell = sampler.draw(rng);
    out[i] = {static_cast<int>(cell / p.idler_size),
              static_cast<int>(cell % p.idler_size)};
  }
  return out;
}

/// Monte Carlo run configuration. Rates are per mode-group; M multiplies
/// them only here and in reporting.
struct McConfig {
  long trials = 100000;
  std::vector<long> M_values;
  std::uint64_t seed = 1;
  ChannelParams channel;
  ProbeSpec probe;
  double eps_tail = kDefaultTailEps;
  double alpha_tol = kDefaultAlphaTol;
  /// Only points with M*xi >= this enter the exponent fit (small-M points
  /// bias the slope).
  double fit_min_mxi = 1.0;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const {
    channel.validate();
    probe.validate();
    if (trials < 1) throw std::domain_error("mc trials must be >= 1");
    if (M_values.empty()) throw std::domain_error("mc M_values must be nonempty");
    for (std::size_t i = 0; i < M_values.size(); ++i) {
      if (M_values[i] < 1) throw std::domain_error("mc M_values must be >= 1");
      if (i > 0 && M_values[i] <= M_values[i - 1]) {
        throw std::domain_error("mc M_values must be ascending");
      }
    }
    detail::check_tail_eps(eps_tail);
    if (!(fit_min_mxi >= 0.0)) throw std::domain_error("fit_min_mxi must be >= 0");
  }
};

struct ErrorPoint {
  long M = 0;
  long trials = 0;
  long errors = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  bool used_in_fit = false;
};

struct ExponentFit {
  double xi_hat = 0.0;
  double half_width = 0.0;
  int points_used = 0;
};

struct PartyResult {
  std::vector<ErrorPoint> points;
  double xi_analytic = 0.0;
  std::optional<ExponentFit> fit;
};

struct McResult {
  PartyResult alice;
  PartyResult eve;
};

/// Weighted least squares of log p_hat on M; the negated slope estimates the
/// decay exponent. Weights come from the binomial standard errors; points
/// with p_hat at 0 or 1 carry no usable log-scale information and are
/// excluded. The half-width is two standard errors of the slope.
///
/// prefactor_exponent adds the known sub-exponential model term: the error
/// of the optimal test decays like M^(-1/2) exp(-M xi), and fitting a pure
/// log-line to that inflates the slope by more than the acceptance band for
/// any window capped at M*xi ~ 5. Pass 0.5 to fit log p + 0.5 log M (used by
/// empirical_error); the default 0 fits the bare log-line.
inline ExponentFit fit_exponent(const std::vector<ErrorPoint>& points,
                                double prefactor_exponent = 0.0) {
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  int used = 0;
  for (const ErrorPoint& pt : points) {
    if (!(pt.p_hat > 0.0) || !(pt.p_hat < 1.0) || pt.trials < 1) continue;
    const double w =
        static_cast<double>(pt.trials) * pt.p_hat / (1.0 - pt.p_hat);
    const double x = static_cast<double>(pt.M);
    const double y = std::log(pt.p_hat) + prefactor_exponent * std::log(x);
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
    ++used;
  }
  if (used < 3) {
    throw insufficient_data_error(
        "fit_exponent needs at least 3 points with 0 < p_hat < 1, got " +
        std::to_string(used));
  }
  const double denom = sw * swxx - swx * swx;
  if (!(denom > 0.0)) {
    throw insufficient_data_error("fit_exponent: degenerate M design");
  }
  const double slope = (sw * swxy - swx * swy) / denom;
  ExponentFit fit;
  fit.xi_hat = -slope;
  fit.half_width = 2.0 * std::sqrt(sw / denom);
  fit.points_used = used;
  return fit;
}

namespace detail {

inline constexpr double kLogZeroCell = -760.0;

/// Cell-aligned ML decision tables for a binary pair of count laws.
struct DecisionModel {
  std::vector<double> llr;  // log present - log absent per flattened cell
  FlatSampler present;
  FlatSampler absent;

  DecisionModel(const std::vector<double>& present_cells,
                const std::vector<double>& absent_cells)
      : present(present_cells), absent(absent_cells) {
    llr.resize(present_cells.size());
    for (std::size_t i = 0; i < present_cells.size(); ++i) {
      const double lp = present_cells[i] > 0.0 ? std::log(present_cells[i])
                                               : kLogZeroCell;
      const double la = absent_cells[i] > 0.0 ? std::log(absent_cells[i])
                                              : kLogZeroCell;
      llr[i] = lp - la;
    }
  }
};

inline DecisionModel make_decision_model(const Pmf1D& present, const Pmf1D& absent) {
  const std::size_t n = std::max(present.size(), absent.size());
  return DecisionModel(pad(present, n).probs, pad(absent, n).probs);
}

inline DecisionModel make_decision_model(const Pmf2D& present, const Pmf2D& absent) {
  const std::size_t ks = std::max(present.signal_size, absent.signal_size);
  const std::size_t ni = std::max(present.idler_size, absent.idler_size);
  return DecisionModel(pad(present, ks, ni).probs, pad(absent, ks, ni).probs);
}

inline constexpr std::uint64_t kAliceStream = 0xA11CEULL;
inline constexpr std::uint64_t kEveStream = 0xE7EULL;

/// One m-slot ranging trial: the true slot draws from the present law, the
/// rest from the absent law; decide by the maximum per-slot LLR sum with
/// uniform tie breaking.
inline bool alice_trial(const DecisionModel& model, int m_slots, long M,
                        std::uint64_t seed, long M_index, long trial) {
  CounterRng rng = CounterRng::substream(
      seed, kAliceStream, static_cast<std::uint64_t>(M_index),
      static_cast<std::uint64_t>(trial));
  const std::uint32_t truth = rng.next_below(static_cast<std::uint32_t>(m_slots));
  std::vector<double> slot_llr(static_cast<std::size_t>(m_slots), 0.0);
  for (long i = 0; i < M; ++i) {
    for (int s = 0; s < m_slots; ++s) {
      const auto& sampler =
          (static_cast<std::uint32_t>(s) == truth) ? model.present : model.absent;
      slot_llr[static_cast<std::size_t>(s)] += model.llr[sampler.draw(rng)];
    }
  }
  double best = slot_llr[0];
  for (int s = 1; s < m_slots; ++s) best = std::max(best, slot_llr[s]);
  std::uint32_t ties = 0;
  int pick = 0;
  for (int s = 0; s < m_slots; ++s) {
    if (slot_llr[static_cast<std::size_t>(s)] == best) ++ties;
  }
  if (ties == 1) {
    for (int s = 0; s < m_slots; ++s) {
      if (slot_llr[static_cast<std::size_t>(s)] == best) pick = s;
    }
  } else {
    std::uint32_t which = rng.next_below(ties);
    for (int s = 0; s < m_slots; ++s) {
      if (slot_llr[static_cast<std::size_t>(s)] == best && which-- == 0) {
        pick = s;
        break;
      }
    }
  }
  return static_cast<std::uint32_t>(pick) != truth;
}

/// One binary detection trial, equiprobable hypotheses, LLR-sum threshold at
/// zero with a fair coin on exact ties.
inline bool eve_trial(const DecisionModel& model, long M, std::uint64_t seed,
                      long M_index, long trial) {
  CounterRng rng = CounterRng::substream(
      seed, kEveStream, static_cast<std::uint64_t>(M_index),
      static_cast<std::uint64_t>(trial));
  const std::uint32_t truth = rng.next_below(2);
  const auto& sampler = truth == 1 ? model.present : model.absent;
  double sum = 0.0;
  for (long i = 0; i < M; ++i) {
    sum += model.llr[sampler.draw(rng)];
  }
  std::uint32_t decide;
  if (sum > 0.0) {
    decide = 1;
  } else if (sum < 0.0) {
    decide = 0;
  } else {
    decide = rng.next_below(2);
  }
  return decide != truth;
}

/// Trials are independent; chunks are fixed-size so the per-chunk integer
/// error counts (and hence the reduction) do not depend on thread schedule.
template <class TrialFn>
long count_errors(long trials, int threads, TrialFn&& trial_fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  const long chunk = 8192;
  const long n_chunks = (trials + chunk - 1) / chunk;
  std::vector<long> chunk_errors(static_cast<std::size_t>(n_chunks), 0);
  auto run_chunk = [&](long ci) {
    const long t0 = ci * chunk;
    const long t1 = std::min(trials, t0 + chunk);
    long errors = 0;
    for (long t = t0; t < t1; ++t) {
      if (trial_fn(t)) ++errors;
    }
    chunk_errors[static_cast<std::size_t>(ci)] = errors;
  };
  if (threads == 1 || n_chunks == 1) {
    for (long ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w]() {
        for (long ci = w; ci < n_chunks; ci += threads) run_chunk(ci);
      });
    }
    for (auto& th : pool) th.join();
  }
  long total = 0;
  for (long e : chunk_errors) total += e;
  return total;
}

inline PartyResult summarize_party(const McConfig& cfg,
                                   std::vector<ErrorPoint> points,
                                   double xi_analytic) {
  PartyResult out;
  out.xi_analytic = xi_analytic;
  std::vector<ErrorPoint> usable;
  for (ErrorPoint& pt : points) {
    const double mxi = static_cast<double>(pt.M) * xi_analytic;
    pt.used_in_fit = pt.p_hat > 0.0 && pt.p_hat < 1.0 && mxi >= cfg.fit_min_mxi;
    if (pt.used_in_fit) usable.push_back(pt);
  }
  out.points = std::move(points);
  if (usable.size() >= 3) {
    out.fit = fit_exponent(usable, 0.5);
  }
  return out;
}

}  // namespace detail

/// Estimate both parties' error probabilities across M and fit the decay
/// exponents, using exact-model maximum-likelihood decisions throughout.
inline McResult empirical_error(const McConfig& cfg) {
  cfg.validate();
  const RateOptions opts{cfg.eps_tail, cfg.alpha_tol, EveStatistics::FiniteCopies};

  std::optional<detail::DecisionModel> alice_model;
  if (cfg.probe.family == ProbeFamily::Coherent) {
    const auto h = alice_hypotheses_coherent(cfg.channel, cfg.probe, cfg.eps_tail);
    alice_model.emplace(detail::make_decision_model(h.present, h.absent));
  } else {
    const auto h = alice_hypotheses_tmsv(cfg.channel, cfg.probe, cfg.eps_tail);
    alice_model.emplace(detail::make_decision_model(h.present, h.absent));
  }
  const auto eve_h = eve_hypotheses(cfg.channel, cfg.probe, cfg.eps_tail);
  const detail::DecisionModel eve_model =
      detail::make_decision_model(eve_h.present, eve_h.absent);

  auto estimate = [&](auto&& trial_fn, long M_index, long M) {
    const long errors = detail::count_errors(
        cfg.trials, cfg.threads,
        [&](long t) { return trial_fn(M_index, M, t); });
    ErrorPoint pt;
    pt.M = M;
    pt.trials = cfg.trials;
    pt.errors = errors;
    pt.p_hat = static_cast<double>(errors) / static_cast<double>(cfg.trials);
    pt.std_err = std::sqrt(pt.p_hat * (1.0 - pt.p_hat) /
                           static_cast<double>(cfg.trials));
    return pt;
  };

  std::vector<ErrorPoint> alice_points, eve_points;
  for (std::size_t mi = 0; mi < cfg.M_values.size(); ++mi) {
    const long M = cfg.M_values[mi];
    alice_points.push_back(estimate(
        [&](long M_index, long M_trials, long t) {
          return detail::alice_trial(*alice_model, cfg.channel.m_slots,
                                     M_trials, cfg.seed, M_index, t);
        },
        static_cast<long>(mi), M));
    eve_points.push_back(estimate(
        [&](long M_index, long M_trials, long t) {
          return detail::eve_trial(eve_model, M_trials, cfg.seed, M_index, t);
        },
        static_cast<long>(mi), M));
  }

  McResult out;
  out.alice = detail::summarize_party(cfg, std::move(alice_points),
                                      alice_rate(cfg.channel, cfg.probe, opts));
  out.eve = detail::summarize_party(cfg, std::move(eve_points),
                                    eve_rate(cfg.channel, cfg.probe, opts));
  return out;
}

}  // namespace covert
