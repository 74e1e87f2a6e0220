// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "covert/sensing.hpp"
#include "properties.hpp"
#include "testutil.hpp"

using namespace covert;
using namespace covert::test;

namespace {

ChannelParams fig2a_channel() {
  ChannelParams ch;
  ch.kappa = 0.2;
  ch.eta_A = 1.0;
  ch.eta_E = 1.0;
  ch.mu_B = 10.0;
  return ch;
}

// stable evaluation of kappa*etaA*mu + 2 mu_B - 2 sqrt(mu_B) sqrt(mu_B + kappa*etaA*mu)
double alice_closed_form(double kappa, double eta_a, double mu, double mu_b) {
  const double s = kappa * eta_a * mu;
  const double diff = s / (std::sqrt(mu_b + s) + std::sqrt(mu_b));
  return diff * diff;
}

}  // namespace

TEST_SUITE("sensing") {

TEST_CASE("coherent ranging rate matches the closed form") {
  const ChannelParams ch = fig2a_channel();
  const ProbeSpec probe{ProbeFamily::Coherent, 1.0, 1};
  const double rate = alice_rate(ch, probe);
  CHECK(rel_close(rate, alice_closed_form(0.2, 1.0, 1.0, 10.0), 1e-8));
  CHECK(rel_close(rate, 9.9012e-4, 1e-3));

  ChannelParams mirror = ch;
  mirror.kappa = 0.0;
  CHECK(alice_rate(mirror, probe) == 0.0);
  CHECK(alice_rate(ch, ProbeSpec{ProbeFamily::Coherent, 0.0, 1}) == 0.0);
}

TEST_CASE("quantum probe beats coherent ranging at low energy") {
  const ChannelParams ch = fig2a_channel();
  for (double mu : {0.003, 0.01, 0.03, 0.1}) {
    const double coherent = alice_rate(ch, ProbeSpec{ProbeFamily::Coherent, mu, 1});
    const double quantum = alice_rate(ch, ProbeSpec{ProbeFamily::Tmsv, mu, 1000});
    CHECK(quantum > coherent);
  }
}

TEST_CASE("eve detection rate") {
  const ChannelParams ch = fig2a_channel();
  CHECK(eve_rate(ch, ProbeSpec{ProbeFamily::Coherent, 0.0, 1}) == 0.0);
  CHECK(eve_rate(ch, ProbeSpec{ProbeFamily::Tmsv, 0.0, 100}) == 0.0);

  const ProbeSpec probe{ProbeFamily::Coherent, 1.0, 1};
  const double exact = eve_rate(ch, probe);
  const double approx = eve_rate_approx(ch, probe);
  // eve sees poisson(10) vs poisson(10.8); frozen via the stationary point
  CHECK(rel_close(exact, poisson_chernoff_closed(10.0, 10.8).rate, 1e-8));
  CHECK(rel_close(exact, 7.69547e-3, 1e-4));
  CHECK(rel_close(approx, poisson_c_alpha_closed(10.0, 10.8, 0.5), 1e-12));
  CHECK(rel_close(approx, 7.69515e-3, 1e-4));

  const double faint = eve_rate(ch, ProbeSpec{ProbeFamily::Coherent, 0.001, 1});
  CHECK(faint > 5e-9);
  CHECK(faint < 2e-8);
}

TEST_CASE("eve statistics options") {
  const ChannelParams ch = fig2a_channel();
  RateOptions limit;
  limit.eve_statistics = EveStatistics::PoissonLimit;
  const ProbeSpec qua{ProbeFamily::Tmsv, 1.0, 50};
  CHECK(eve_rate(ch, qua, limit) ==
        eve_rate(ch, ProbeSpec{ProbeFamily::Coherent, 1.0, 1}, limit));
  // finite copy statistics differ at small R but stay close
  const double finite = eve_rate(ch, qua);
  CHECK(finite != eve_rate(ch, qua, limit));
  CHECK(rel_close(finite, eve_rate(ch, qua, limit), 0.05));
}

TEST_CASE("delta xi bundle") {
  const ChannelParams ch = fig2a_channel();
  const ScenarioRates zero = delta_xi(ch, ProbeSpec{ProbeFamily::Coherent, 0.0, 1});
  CHECK(zero.xi_A == 0.0);
  CHECK(zero.xi_E == 0.0);
  CHECK(zero.delta_xi == 0.0);
  CHECK(zero.xi_E_approx == 0.0);

  // classical probe: always-negative difference on the Fig 2A scenario
  for (double mu : {1e-4, 1e-3, 0.01, 0.1, 1.0, 10.0}) {
    const ScenarioRates r = delta_xi(ch, ProbeSpec{ProbeFamily::Coherent, mu, 1});
    CHECK(r.delta_xi < 0.0);
    CHECK(r.delta_xi == r.xi_A - r.xi_E);
  }
  // quantum probe: positive region with an interior maximum and a sign change
  double best = -1e300, best_mu = 0.0;
  bool positive_seen = false, negative_after = false;
  for (double mu : {0.005, 0.02, 0.05, 0.1, 0.15, 0.3, 1.0, 5.0}) {
    const ScenarioRates r = delta_xi(ch, ProbeSpec{ProbeFamily::Tmsv, mu, 1000});
    if (r.delta_xi > 0.0) positive_seen = true;
    if (positive_seen && r.delta_xi < 0.0) negative_after = true;
    if (r.delta_xi > best) {
      best = r.delta_xi;
      best_mu = mu;
    }
  }
  CHECK(positive_seen);
  CHECK(negative_after);
  CHECK(best_mu > 0.005);
  CHECK(best_mu < 5.0);
}

TEST_CASE("asymptotic single-mode rates") {
  const ChannelParams ch = fig2a_channel();
  const AsymptoticRates r = asymptotic_rates(ch, 1.0);
  CHECK(r.xi_A == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.xi_E == doctest::Approx(0.8).epsilon(1e-12));
  const AsymptoticRates zero = asymptotic_rates(ch, 0.0);
  CHECK(zero.xi_A == 0.0);
  CHECK(zero.xi_E == 0.0);
  CHECK_THROWS_AS(asymptotic_rates(ch, -1.0), std::domain_error);
}

TEST_CASE("full alpha search confirms the ranging optimum at one half") {
  ChannelParams ch;
  ch.kappa = 0.3;
  ch.mu_B = 1.0;
  const ProbeSpec coh{ProbeFamily::Coherent, 1.0, 1};
  const RateResult full = alice_rate_full_search(ch, coh);
  CHECK(rel_close(full.rate, alice_rate(ch, coh), 1e-9));
  CHECK(std::abs(full.alpha_star - 0.5) < 1e-4);

  const ProbeSpec qua{ProbeFamily::Tmsv, 0.05, 100};
  const RateResult full_q = alice_rate_full_search(ch, qua);
  CHECK(rel_close(full_q.rate, alice_rate(ch, qua), 1e-9));
  CHECK(std::abs(full_q.alpha_star - 0.5) < 1e-4);
}

TEST_CASE("module invariants") {
  for (const PropResult& r :
       {prop_rate_monotonicity(), prop_min_pair_consistency(), prop_eq12_quality(),
        prop_eve_poisson_limit()}) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}

}  // TEST_SUITE
