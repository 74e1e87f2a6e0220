// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance run: each criterion prints one pass/fail line and
// enforces its runtime budget; the process exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "covert/bottleneck.hpp"
#include "covert/cli.hpp"
#include "covert/montecarlo.hpp"
#include "covert/sensing.hpp"
#include "properties.hpp"
#include "testutil.hpp"

using namespace covert;
using namespace covert::test;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

ChannelParams fig2a() {
  ChannelParams ch;
  ch.kappa = 0.2;
  ch.eta_A = 1.0;
  ch.eta_E = 1.0;
  ch.mu_B = 10.0;
  return ch;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) {
    g.push_back(std::exp(std::log(lo) + i * (std::log(hi) - std::log(lo)) / (n - 1)));
  }
  return g;
}

bool fail(std::string& why, const std::string& message) {
  if (why.empty()) why = message;
  return false;
}

// ---------------------------------------------------------------- criterion 1

bool criterion_poisson_oracle(std::string& why) {
  bool ok = true;
  for (double kappa : {0.1, 0.2, 0.5}) {
    for (double mu : {0.01, 0.1, 1.0, 10.0}) {
      for (double mu_b : {1.0, 10.0, 100.0}) {
        const double signal = kappa * mu;  // eta_A = 1
        const double numerical =
            2.0 * bhattacharyya(poisson_pmf(mu_b + signal), poisson_pmf(mu_b));
        // closed form kappa mu + 2 mu_B - 2 sqrt(mu_B) sqrt(mu_B + kappa mu),
        // evaluated in its cancellation-free square form
        const double diff = signal / (std::sqrt(mu_b + signal) + std::sqrt(mu_b));
        const double closed = diff * diff;
        if (!rel_close(numerical, closed, 1e-8)) {
          ok = fail(why, fmt("2B mismatch %.3e vs %.3e", numerical, closed));
        }
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_chernoff_oracle(std::string& why) {
  bool ok = true;
  for (double kappa : {0.1, 0.2, 0.5}) {
    for (double mu : {0.01, 0.1, 1.0, 10.0}) {
      for (double mu_b : {1.0, 10.0, 100.0}) {
        const double l1 = mu_b + kappa * mu;
        const RateResult numerical = chernoff(poisson_pmf(mu_b), poisson_pmf(l1));
        const RateResult closed = poisson_chernoff_closed(mu_b, l1);
        if (!rel_close(numerical.rate, closed.rate, 1e-8)) {
          ok = fail(why, fmt("rate mismatch %.3e vs %.3e", numerical.rate,
                             closed.rate));
        }
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_high_background_regime(std::string& why) {
  bool ok = true;
  for (double kappa : {0.2, 0.5}) {
    for (double mu : {0.001, 0.01, 0.1}) {
      for (double ratio : {100.0, 1000.0}) {
        ChannelParams ch = fig2a();
        ch.kappa = kappa;
        ch.mu_B = ratio * mu;
        const ProbeSpec probe{ProbeFamily::Coherent, mu, 1};
        const double exact = eve_rate(ch, probe);
        const double approx = eve_rate_approx(ch, probe);
        if (!(std::abs(exact - approx) / exact < 0.01)) {
          ok = fail(why, fmt("approximation gap %.3e vs %.3e", exact, approx));
        }
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_symmetric_tradeoff(std::string& why) {
  const ChannelParams ch = fig2a();
  const auto grid = log_grid(1e-3, 10.0, 33);
  const auto classical = tradeoff_curve(ch, ProbeFamily::Coherent, 1, grid);
  const auto quantum = tradeoff_curve(ch, ProbeFamily::Tmsv, 1000, grid);
  bool ok = true;
  for (const TradeoffPoint& p : classical) {
    if (!(p.delta_xi < 0.0)) {
      ok = fail(why, fmt("classical delta_xi not negative at mu=%.3e (%.3e)",
                         p.mu, p.delta_xi));
    }
  }
  bool any_positive = false;
  for (const TradeoffPoint& p : quantum) any_positive |= p.delta_xi > 0.0;
  if (!any_positive) ok = fail(why, "no quantum point with positive delta_xi");
  return ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_asymmetric_tradeoff(std::string& why) {
  ChannelParams ch = fig2a();
  ch.eta_E = 0.3;
  const auto grid = log_grid(1e-3, 10.0, 33);
  const auto classical = tradeoff_curve(ch, ProbeFamily::Coherent, 1, grid);
  const auto quantum = tradeoff_curve(ch, ProbeFamily::Tmsv, 1000, grid);
  bool ok = true;
  bool classical_covert = false;
  for (const TradeoffPoint& p : classical) classical_covert |= p.delta_xi > 0.0;
  if (!classical_covert) ok = fail(why, "no classical point with positive delta_xi");
  int compared = 0;
  for (const TradeoffPoint& c : classical) {
    if (c.xi_E < quantum.front().xi_E || c.xi_E > quantum.back().xi_E) continue;
    for (std::size_t i = 1; i < quantum.size(); ++i) {
      if (quantum[i].xi_E >= c.xi_E) {
        const double t = (std::log(c.xi_E) - std::log(quantum[i - 1].xi_E)) /
                         (std::log(quantum[i].xi_E) - std::log(quantum[i - 1].xi_E));
        const double xi_a_q = std::exp((1.0 - t) * std::log(quantum[i - 1].xi_A) +
                                       t * std::log(quantum[i].xi_A));
        ++compared;
        if (!(xi_a_q > c.xi_A)) {
          ok = fail(why, fmt("quantum not above classical at matched rate "
                             "(%.3e vs %.3e)",
                             xi_a_q, c.xi_A));
        }
        break;
      }
    }
  }
  if (compared < 10) ok = fail(why, "too few matched points");
  return ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_delta_xi_shape(std::string& why) {
  bool ok = true;
  std::vector<double> upper_boundaries;
  for (double mu_b : {1.0, 10.0, 100.0}) {
    ChannelParams ch = fig2a();
    ch.mu_B = mu_b;
    const auto grid = log_grid(1e-3, 10.0, 41);
    std::vector<double> dxi;
    for (double mu : grid) {
      dxi.push_back(delta_xi(ch, ProbeSpec{ProbeFamily::Tmsv, mu, 1000}).delta_xi);
    }
    std::size_t argmax = 0;
    bool positive = false, sign_change = false;
    for (std::size_t i = 0; i < dxi.size(); ++i) {
      if (dxi[i] > dxi[argmax]) argmax = i;
      if (dxi[i] > 0.0) positive = true;
      if (positive && dxi[i] < 0.0) sign_change = true;
    }
    if (!positive) ok = fail(why, fmt("no positive region at mu_B=%.0f", mu_b, 0));
    if (!sign_change) ok = fail(why, fmt("no sign change at mu_B=%.0f", mu_b, 0));
    if (argmax == 0 || argmax + 1 == dxi.size()) {
      ok = fail(why, "maximum not interior");
    }
    // non-monotone: rises to the interior max, falls after
    if (!(dxi[argmax] > dxi.front() && dxi[argmax] > dxi.back())) {
      ok = fail(why, "delta_xi not non-monotone");
    }
    // locate the upper sign change by bisection
    double lo = grid[argmax], hi = 10.0;
    for (int i = 0; i < 50; ++i) {
      const double mid = std::sqrt(lo * hi);
      if (delta_xi(ch, ProbeSpec{ProbeFamily::Tmsv, mid, 1000}).delta_xi > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    upper_boundaries.push_back(std::sqrt(lo * hi));
  }
  // the positive region survives every background level and its boundary moves
  for (std::size_t i = 1; i < upper_boundaries.size(); ++i) {
    if (!(upper_boundaries[i] > upper_boundaries[i - 1])) {
      ok = fail(why, fmt("boundary did not shift (%.5f vs %.5f)",
                         upper_boundaries[i - 1], upper_boundaries[i]));
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion_faint_probe_anchor(std::string& why) {
  const ChannelParams ch = fig2a();
  bool ok = true;
  const double coherent = eve_rate(ch, ProbeSpec{ProbeFamily::Coherent, 0.001, 1});
  const double quantum = eve_rate(ch, ProbeSpec{ProbeFamily::Tmsv, 0.001, 1000});
  for (double rate : {coherent, quantum}) {
    if (!(rate >= 5e-9 && rate <= 2e-8)) {
      ok = fail(why, fmt("faint-probe rate %.3e outside [5e-9, 2e-8]", rate, 0));
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_exponent_agreement(std::string& why) {
  ChannelParams ch;
  ch.kappa = 0.5;
  ch.eta_A = 1.0;
  ch.eta_E = 1.0;
  ch.mu_B = 1.0;
  ch.m_slots = 2;
  bool ok = true;
  for (ProbeFamily fam : {ProbeFamily::Coherent, ProbeFamily::Tmsv}) {
    const ProbeSpec probe{fam, 2.0, fam == ProbeFamily::Tmsv ? 1000 : 1};
    for (int party = 0; party < 2; ++party) {
      const double xi = party == 0 ? alice_rate(ch, probe) : eve_rate(ch, probe);
      if (!(xi >= 0.05 && xi <= 0.5)) {
        ok = fail(why, fmt("analytic rate %.4f outside [0.05, 0.5]", xi, 0));
        continue;
      }
      McConfig cfg;
      cfg.trials = 100000;
      cfg.seed = 20250808;
      cfg.channel = ch;
      cfg.probe = probe;
      cfg.fit_min_mxi = 1.5;
      for (double t = 0.5; t <= 5.001; t += 0.5) {
        const long m = std::lround(t / xi);
        if (m >= 1 && (cfg.M_values.empty() || m > cfg.M_values.back())) {
          cfg.M_values.push_back(m);
        }
      }
      const McResult result = empirical_error(cfg);
      const PartyResult& pr = party == 0 ? result.alice : result.eve;
      if (!pr.fit) {
        ok = fail(why, "no exponent fit produced");
        continue;
      }
      const double rel = std::abs(pr.fit->xi_hat - pr.xi_analytic) / pr.xi_analytic;
      std::printf("        %s %s: fitted %.5f vs analytic %.5f (%+.1f%%)\n",
                  fam == ProbeFamily::Coherent ? "coherent" : "tmsv",
                  party == 0 ? "alice" : "eve", pr.fit->xi_hat, pr.xi_analytic,
                  100.0 * (pr.fit->xi_hat / pr.xi_analytic - 1.0));
      if (!(rel < 0.10)) {
        ok = fail(why, fmt("fitted exponent off by %.1f%% (limit 10%%)",
                           100.0 * rel, 0));
      }
    }
  }
  return ok;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_bottleneck_duality(std::string& why) {
  const ChannelParams ch = fig2a();
  bool ok = true;
  for (ProbeFamily fam : {ProbeFamily::Coherent, ProbeFamily::Tmsv}) {
    const int copies = fam == ProbeFamily::Tmsv ? 1000 : 1;
    const std::vector<double> betas = {0.0, 0.05, 0.1, 0.2,  0.5,  1.0,
                                       2.0, 5.0,  10.0, 30.0, 100.0};
    for (const TradeoffPoint& p :
         lagrangian_sweep(ch, fam, copies, betas, 1e-8, 10.0)) {
      if (!(p.xi_E > 0.0)) continue;
      const CovertInfoResult inv =
          covert_information(ch, fam, copies, p.xi_E, 1e-8, 10.0);
      if (!rel_close(inv.i_c, p.xi_A, 1e-6)) {
        ok = fail(why, fmt("sweep/inversion mismatch %.6e vs %.6e", inv.i_c,
                           p.xi_A));
      }
    }
  }
  return ok;
}

// --------------------------------------------------------------- criterion 10

bool criterion_property_suites(std::string& why) {
  bool ok = true;
  for (const PropResult& r : run_all_properties()) {
    if (!r.pass) {
      std::printf("        property failed: %s (%s)\n", r.name.c_str(),
                  r.detail.c_str());
      ok = fail(why, r.name);
    }
  }
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Poisson ranging oracle equality (rel < 1e-8)", 10.0,
       criterion_poisson_oracle},
      {2, "Chernoff search vs closed form (rel < 1e-8)", 30.0,
       criterion_chernoff_oracle},
      {3, "high-background approximation within 1%", 10.0,
       criterion_high_background_regime},
      {4, "symmetric trade-off: classical never covert, quantum covert region",
       120.0, criterion_symmetric_tradeoff},
      {5, "asymmetric trade-off: classical covert region, quantum dominates",
       120.0, criterion_asymmetric_tradeoff},
      {6, "quantum delta-xi shape and background shift", 300.0,
       criterion_delta_xi_shape},
      {7, "faint-probe adversary rate anchor", 1.0, criterion_faint_probe_anchor},
      {8, "Monte Carlo exponent agreement within 10%", 600.0,
       criterion_exponent_agreement},
      {9, "bottleneck duality within 1e-6", 120.0, criterion_bottleneck_duality},
      {10, "module property suites", 600.0, criterion_property_suites},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string why;
    bool pass = false;
    try {
      pass = c.run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > c.budget_seconds) {
      pass = false;
      if (why.empty()) why = "runtime budget exceeded";
    }
    std::printf("[%s] criterion %2d: %s (%.2fs / budget %.0fs)%s%s\n",
                pass ? "PASS" : "FAIL", c.id, c.name.c_str(), elapsed,
                c.budget_seconds, why.empty() ? "" : " - ", why.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures != 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
