#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ancestree/coeffs.hpp"
#include "ancestree/errors.hpp"
#include "ancestree/ldasg.hpp"
#include "ancestree/params.hpp"
#include "ancestree/rng.hpp"

using namespace ancestree;

namespace {

const ModelParams kBase = make_params(2, 1, 1, 0.5);

ModelParams random_params(Philox4x64& rng, int n_min, int n_max) {
  const int N =
      n_min + static_cast<int>(rng.uniform_below(
                  static_cast<std::uint64_t>(n_max - n_min + 1)));
  return make_params(N, 0.01 + 3 * rng.uniform01(), 0.01 + 3 * rng.uniform01(),
                     rng.uniform01());
}

// Time-weighted occupation law of the level count along a jump path.
Pmf occupation(const LDPath& path, int max_level, double horizon) {
  Pmf occ;
  occ.min_state = 1;
  occ.prob.assign(static_cast<std::size_t>(max_level), 0.0);
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double until =
        i + 1 < path.times.size() ? path.times[i + 1] : horizon;
    occ.prob[static_cast<std::size_t>(path.states[i].levels - 1)] +=
        until - path.times[i];
  }
  for (double& v : occ.prob) v /= horizon;
  return occ;
}

}  // namespace

TEST_CASE("line-count generator") {
  SUBCASE("N = 2 baseline entries") {
    const RateMatrix q = ld_rates(kBase);
    CHECK(q.min_state == 1);
    REQUIRE(q.size == 2);
    CHECK(q.at(1, 2) == doctest::Approx(0.5));
    CHECK(q.at(2, 1) == doctest::Approx(2.0));
    CHECK(q.at(1, 1) == doctest::Approx(-0.5));
    CHECK(q.at(2, 2) == doctest::Approx(-2.0));
  }
  SUBCASE("selection-only example") {
    const RateMatrix q = ld_rates(make_params(4, 2, 0, 0.5));
    CHECK(q.at(2, 3) == doctest::Approx(2.0));
    CHECK(q.at(2, 1) == doctest::Approx(0.5));
    CHECK(q.at(2, 4) == 0.0);
  }
  SUBCASE("deep down-jumps all carry the beneficial-mutation rate") {
    const RateMatrix q = ld_rates(make_params(5, 1, 1, 0.5));
    CHECK(q.at(4, 1) == doctest::Approx(0.5));
    CHECK(q.at(4, 2) == doctest::Approx(0.5));
    CHECK(q.at(4, 3) == doctest::Approx(4.0 * 3 / 5 + 3 * 0.5 + 0.5));
    CHECK(q.at(4, 5) == doctest::Approx(4.0 / 5));
    CHECK(q.at(1, 2) == doctest::Approx(4.0 / 5));
  }
  SUBCASE("rows sum to zero with nonnegative off-diagonals") {
    Philox4x64 rng(3, 0);
    for (int rep = 0; rep < 50; ++rep) {
      const ModelParams p = random_params(rng, 1, 25);
      const RateMatrix q = ld_rates(p);
      for (int i = 1; i <= p.N; ++i) {
        double row = 0.0;
        for (int j = 1; j <= p.N; ++j) {
          if (i != j) CHECK(q.at(i, j) >= 0.0);
          row += q.at(i, j);
        }
        CHECK(std::abs(row) < 1e-12);
      }
    }
  }
}

TEST_CASE("stationary line-count law") {
  SUBCASE("N = 2 baseline") {
    const Pmf pi = stationary_ld(kBase);
    REQUIRE(pi.prob.size() == 2);
    CHECK(pi.min_state == 1);
    CHECK(pi.prob[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(pi.prob[1] == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("single line is a point mass") {
    const Pmf pi = stationary_ld(make_params(1, 1, 1, 0.5));
    REQUIRE(pi.prob.size() == 1);
    CHECK(pi.prob[0] == doctest::Approx(1.0));
  }
  SUBCASE("requires selection") {
    try {
      stationary_ld(make_params(3, 0, 1, 0.5));
      FAIL("expected SelectionRequired");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SelectionRequired);
    }
  }
  SUBCASE("solves the balance equations") {
    Philox4x64 rng(7, 0);
    for (int rep = 0; rep < 30; ++rep) {
      const ModelParams p = random_params(rng, 2, 40);
      const Pmf pi = stationary_ld(p);
      const RateMatrix q = ld_rates(p);
      double sum = 0.0;
      for (double v : pi.prob) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (int j = 1; j <= p.N; ++j) {
        double flux = 0.0;
        for (int i = 1; i <= p.N; ++i)
          flux += pi.prob[static_cast<std::size_t>(i - 1)] * q.at(i, j);
        CHECK(std::abs(flux) < 1e-12);
      }
    }
  }
  SUBCASE("tails reproduce the decomposition coefficients") {
    Philox4x64 rng(11, 0);
    for (int rep = 0; rep < 20; ++rep) {
      const ModelParams p = random_params(rng, 2, 50);
      const Pmf pi = stationary_ld(p);
      const CoefficientVector a = solve_coefficients(p);
      for (int n = 0; n < p.N; ++n) {
        double tail = 0.0;
        for (int m = n + 1; m <= p.N; ++m)
          tail += pi.prob[static_cast<std::size_t>(m - 1)];
        CHECK(std::abs(tail - a.a[n]) < 1e-10);
      }
    }
  }
}

TEST_CASE("event-level simulation of levels and immunity") {
  SUBCASE("path structure and invariants") {
    const ModelParams p = make_params(5, 1.5, 0.8, 0.4);
    const LDPath path = simulate_ld(p, 500, 9);
    REQUIRE(!path.times.empty());
    CHECK(path.times[0] == 0.0);
    CHECK(path.states[0].levels == 1);
    CHECK(path.states[0].immune == 1);
    CHECK(path.states.size() == path.events.size() + 1);
    for (std::size_t k = 0; k < path.events.size(); ++k) {
      CHECK(path.times[k + 1] > path.times[k]);
      const LDState& pre = path.states[k];
      const LDState& post = path.states[k + 1];
      CHECK(post.levels >= 1);
      CHECK(post.levels <= p.N);
      CHECK(post.immune >= 1);
      CHECK(post.immune <= post.levels);
      switch (path.events[k].kind) {
        case LDEventKind::Branch:
          CHECK(post.levels == pre.levels + 1);
          break;
        case LDEventKind::Coal:
          CHECK(post.levels == pre.levels - 1);
          break;
        case LDEventKind::Coll:
          CHECK(post.levels == pre.levels);
          CHECK(post.immune == pre.immune);
          break;
        case LDEventKind::XColl:
          CHECK(post.levels == pre.levels);
          break;
        case LDEventKind::Mut0:
          CHECK(post.levels == path.events[k].i);
          CHECK(post.levels <= pre.levels);
          CHECK(post.immune == std::min(pre.immune, path.events[k].i));
          break;
        case LDEventKind::Mut1:
          if (path.events[k].i == pre.immune) {
            CHECK(post.levels == pre.levels);
            CHECK(post.immune == post.levels);
          } else {
            CHECK(post.levels == pre.levels - 1);
            CHECK(post.immune ==
                  pre.immune - (pre.immune > path.events[k].i ? 1 : 0));
          }
          break;
      }
    }
  }
  SUBCASE("deterministic in the seed") {
    const LDPath a = simulate_ld(kBase, 50, 4);
    const LDPath b = simulate_ld(kBase, 50, 4);
    REQUIRE(a.times.size() == b.times.size());
    CHECK(a.times == b.times);
    for (std::size_t k = 0; k < a.events.size(); ++k) {
      CHECK(a.events[k].kind == b.events[k].kind);
      CHECK(a.events[k].i == b.events[k].i);
      CHECK(a.events[k].j == b.events[k].j);
    }
    const LDPath c = simulate_ld(kBase, 50, 5);
    CHECK(a.times != c.times);
  }
  SUBCASE("no drivers means no events") {
    const LDPath path = simulate_ld(make_params(4, 0, 0, 0.5), 100, 1);
    CHECK(path.events.empty());
    CHECK(path.states.size() == 1);
  }
  SUBCASE("level occupation matches the stationary law") {
    const ModelParams p = make_params(6, 1, 1, 0.5);
    const double horizon = 20000;
    const LDPath path = simulate_ld(p, horizon, 13);
    CHECK(total_variation(occupation(path, 6, horizon), stationary_ld(p)) <
          0.02);
  }
}

TEST_CASE("lowest type-0 level decides the representative type") {
  CHECK(ancestral_level({3, 2}, {1, 0, 1}) == 2);
  CHECK(ancestral_level({3, 2}, {0, 1, 1}) == 1);
  CHECK(ancestral_level({3, 2}, {1, 1, 1}) == 2);
  CHECK(ancestral_level({3, 3}, {1, 1, 1}) == 3);
  CHECK(ancestral_level({1, 1}, {0}) == 1);
  CHECK_THROWS_AS(ancestral_level({3, 2}, {1, 1}), Error);
}

TEST_CASE("asymptotic line-counting chain") {
  SUBCASE("generator entries at the baseline") {
    const RateMatrix q = asymptotic_rates(kBase, 5);
    CHECK(q.at(3, 4) == doctest::Approx(3.0));
    CHECK(q.at(3, 2) == doctest::Approx(1.5));
    CHECK(q.at(3, 1) == doctest::Approx(0.5));
    CHECK(q.at(5, 4) == doctest::Approx(2.5));
    for (int i = 1; i <= 5; ++i) {
      double row = 0.0;
      for (int j = 1; j <= 5; ++j) row += q.at(i, j);
      CHECK(std::abs(row) < 1e-12);
    }
  }
  SUBCASE("needs at least two states") {
    CHECK_THROWS_AS(asymptotic_rates(kBase, 1), Error);
  }
  SUBCASE("stationary law is the geometric closed form") {
    const AsymptoticStationary st = stationary_asymptotic(kBase, 200);
    const double ell = derive(kBase).ell_minus;
    REQUIRE(st.closed_form.prob.size() == 200);
    for (int k = 1; k <= 5; ++k)
      CHECK(st.closed_form.prob[k - 1] ==
            doctest::Approx((1 - ell) * std::pow(ell, k - 1)).epsilon(1e-12));
    CHECK(total_variation(st.solved, st.closed_form) < 1e-8);
  }
  SUBCASE("automatic truncation stabilizes the tail") {
    const AsymptoticStationary st = stationary_asymptotic(kBase);
    CHECK(st.solved.prob.size() >= 60);
    CHECK(st.solved.prob.back() < 1e-12);
    CHECK(total_variation(st.solved, st.closed_form) < 1e-10);
  }
  SUBCASE("random subcritical parameters agree with the closed form") {
    Philox4x64 rng(19, 0);
    for (int rep = 0; rep < 20; ++rep) {
      const ModelParams p = make_params(2, 0.05 + 2 * rng.uniform01(),
                                        0.05 + 2 * rng.uniform01(),
                                        0.05 + 0.9 * rng.uniform01());
      const AsymptoticStationary st = stationary_asymptotic(p);
      CHECK(total_variation(st.solved, st.closed_form) < 1e-8);
    }
  }
  SUBCASE("rejections") {
    try {
      stationary_asymptotic(make_params(2, 0, 1, 0.5));
      FAIL("expected SelectionRequired");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SelectionRequired);
    }
    try {
      stationary_asymptotic(make_params(2, 1, 0, 0.5));
      FAIL("expected MutationRequired");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::MutationRequired);
    }
    // s > u with nu0 = 0 drives ell_minus to 1: no stationary law.
    CHECK_THROWS_AS(stationary_asymptotic(make_params(2, 2, 1, 0.0)), Error);
  }
}

TEST_CASE("transient distribution by uniformization") {
  SUBCASE("two-state chain against the closed form") {
    RateMatrix q;
    q.min_state = 1;
    q.size = 2;
    q.q = {-0.7, 0.7, 0.3, -0.3};
    Pmf init;
    init.min_state = 1;
    init.prob = {1.0, 0.0};
    for (double t : {0.0, 0.1, 0.5, 1.3, 4.0, 25.0}) {
      const Pmf pt = transient_distribution(q, t, init);
      const double p11 = 0.3 / 1.0 + 0.7 / 1.0 * std::exp(-1.0 * t);
      CHECK(pt.prob[0] == doctest::Approx(p11).epsilon(1e-12));
      CHECK(pt.prob[1] == doctest::Approx(1 - p11).epsilon(1e-12));
    }
  }
  SUBCASE("zero time returns the initial law") {
    const RateMatrix q = ld_rates(make_params(4, 1, 1, 0.5));
    Pmf init;
    init.min_state = 1;
    init.prob = {0.0, 0.5, 0.5, 0.0};
    const Pmf pt = transient_distribution(q, 0.0, init);
    CHECK(pt.prob == init.prob);
  }
  SUBCASE("long times reach the stationary law") {
    const ModelParams p = make_params(5, 1, 1, 0.5);
    Pmf init;
    init.min_state = 1;
    init.prob = {1.0, 0.0, 0.0, 0.0, 0.0};
    const Pmf pt = transient_distribution(ld_rates(p), 200.0, init);
    CHECK(total_variation(pt, stationary_ld(p)) < 1e-8);
  }
  SUBCASE("frozen generator is the identity map") {
    RateMatrix q;
    q.min_state = 1;
    q.size = 2;
    q.q = {0.0, 0.0, 0.0, 0.0};
    Pmf init;
    init.min_state = 1;
    init.prob = {0.25, 0.75};
    const Pmf pt = transient_distribution(q, 3.0, init);
    CHECK(pt.prob == init.prob);
  }
}

TEST_CASE("asymptotic pruned simulator") {
  SUBCASE("the first move from a single line is a branching") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const LDPath path = simulate_asymptotic_ld(kBase, 30, seed);
      REQUIRE(!path.events.empty());
      CHECK(path.events[0].kind == LDEventKind::Branch);
      CHECK(path.states[1].levels == 2);
    }
  }
  SUBCASE("the immune line stays pinned to the top") {
    const LDPath path = simulate_asymptotic_ld(kBase, 200, 3);
    for (const LDState& st : path.states) {
      CHECK(st.immune == st.levels);
      CHECK(st.levels >= 1);
    }
  }
  SUBCASE("occupation matches the geometric law") {
    const double horizon = 20000;
    const LDPath path = simulate_asymptotic_ld(kBase, horizon, 17);
    int max_level = 1;
    for (const LDState& st : path.states)
      max_level = std::max(max_level, st.levels);
    const Pmf occ = occupation(path, max_level, horizon);
    Pmf geo;
    geo.min_state = 1;
    geo.prob.resize(static_cast<std::size_t>(max_level));
    const double ell = derive(kBase).ell_minus;
    for (int k = 1; k <= max_level; ++k)
      geo.prob[k - 1] = (1 - ell) * std::pow(ell, k - 1);
    CHECK(total_variation(occ, geo) < 0.02);
  }
  SUBCASE("event cap raises a guard error") {
    try {
      simulate_asymptotic_ld(kBase, 1e9, 0, 5);
      FAIL("expected EventCapExceeded");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EventCapExceeded);
    }
  }
}

TEST_CASE("representative ancestral type estimator") {
  SUBCASE("degenerate type frequencies are exact") {
    for (bool rb : {false, true}) {
      const EstimateResult zero = representative_type(kBase, 0, 5, 200, 1, rb);
      CHECK(zero.estimate == 0.0);
      CHECK(zero.std_error == 0.0);
      const EstimateResult one = representative_type(kBase, 1, 5, 200, 1, rb);
      CHECK(one.estimate == 1.0);
      CHECK(one.std_error == 0.0);
    }
  }
  SUBCASE("deterministic in the seed") {
    const EstimateResult a = representative_type(kBase, 0.5, 5, 3000, 8, true);
    const EstimateResult b = representative_type(kBase, 0.5, 5, 3000, 8, true);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.replicas == 3000);
  }
  SUBCASE("conditioning agrees with sampled types and shrinks the error") {
    const EstimateResult rb = representative_type(kBase, 0.4, 8, 20000, 2, true);
    const EstimateResult plain =
        representative_type(kBase, 0.4, 8, 20000, 2, false);
    CHECK(std::abs(rb.estimate - plain.estimate) <
          3 * (rb.std_error + plain.std_error));
    CHECK(rb.std_error < plain.std_error);
  }
  SUBCASE("long horizons land on the limit curve") {
    for (double x : {0.3, 0.7}) {
      const EstimateResult est =
          representative_type(kBase, x, 50, 20000, 5, true);
      CHECK(std::abs(est.estimate - limit_h(kBase, x)) <
            3 * est.std_error + 0.005);
    }
  }
  SUBCASE("thread count does not change the result") {
    const EstimateResult par = representative_type(kBase, 0.5, 8, 5000, 6, true);
    setenv("ANCESTREE_THREADS", "1", 1);
    const EstimateResult ser = representative_type(kBase, 0.5, 8, 5000, 6, true);
    unsetenv("ANCESTREE_THREADS");
    CHECK(par.estimate == ser.estimate);
    CHECK(par.std_error == ser.std_error);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(representative_type(kBase, -0.1, 5, 100, 0, true), Error);
    CHECK_THROWS_AS(representative_type(kBase, 0.5, 0, 100, 0, true), Error);
    CHECK_THROWS_AS(representative_type(kBase, 0.5, 5, 0, 0, true), Error);
    CHECK_THROWS_AS(
        representative_type(make_params(2, 0, 1, 0.5), 0.5, 5, 100, 0, true),
        Error);
  }
}
