#include "ancestree/ldasg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "ancestree/errors.hpp"
#include "ancestree/parallel.hpp"
#include "ancestree/params.hpp"
#include "ancestree/rng.hpp"

namespace ancestree {
namespace {

// pi Q = 0, sum pi = 1, solved by replacing one column of Q (one row of Q^T)
// with ones; detailed balance is not available because of the jump-to-below
// structure.
Pmf solve_stationary(const RateMatrix& Q) {
  const int M = Q.size;
  Eigen::MatrixXd A(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      A(j, i) = Q.q[static_cast<std::size_t>(i) * M + j];
  A.row(M - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(M);
  b(M - 1) = 1.0;
  const Eigen::VectorXd x = A.partialPivLu().solve(b);

  Pmf pi;
  pi.min_state = Q.min_state;
  pi.prob.assign(static_cast<std::size_t>(M), 0.0);
  double sum = 0.0;
  for (int i = 0; i < M; ++i) {
    if (x(i) < -1e-9)
      fail(Errc::InternalError, "stationary solve produced negative mass");
    pi.prob[i] = std::max(0.0, x(i));
    sum += pi.prob[i];
  }
  for (double& v : pi.prob) v /= sum;

  // Sanity: residual of the balance equations.
  for (int j = 0; j < M; ++j) {
    double r = 0.0;
    for (int i = 0; i < M; ++i) r += pi.prob[i] * Q.q[static_cast<std::size_t>(i) * M + j];
    if (std::abs(r) > 1e-8)
      fail(Errc::InternalError, "stationary residual too large");
  }
  return pi;
}

void fill_diagonal(RateMatrix& Q) {
  for (int i = Q.min_state; i < Q.min_state + Q.size; ++i) {
    double row = 0.0;
    for (int j = Q.min_state; j < Q.min_state + Q.size; ++j)
      if (j != i) row += Q.at(i, j);
    Q.at(i, i) = -row;
  }
}

// Shared event loop of the asymptotic pruned lookdown simulator; the
// callback receives every state-changing event.
template <typename OnEvent>
int run_asymptotic(const ModelParams& p, double horizon, Philox4x64& rng,
                   std::int64_t event_cap, OnEvent&& on_event) {
  int L = 1;
  double t = 0.0;
  std::int64_t steps = 0;
  for (;;) {
    const double up = L * p.s;
    const double down = (L - 1) * p.u;  // mut0 and mut1 at the non-top levels
    const double total = up + down;
    t += rng.exponential(total);
    if (t > horizon) break;
    if (++steps > event_cap)
      fail(Errc::EventCapExceeded,
           "asymptotic simulator exceeded " + std::to_string(event_cap) +
               " events before the horizon");
    const double r = rng.uniform01() * total;
    if (r < up) {
      const int lev = static_cast<int>(rng.uniform_below(L)) + 1;
      ++L;
      on_event(t, LDEvent{t, LDEventKind::Branch, lev, 0}, L);
    } else if (r < up + (L - 1) * p.u * p.nu1) {
      const int lev = static_cast<int>(rng.uniform_below(L - 1)) + 1;
      --L;
      on_event(t, LDEvent{t, LDEventKind::Mut1, lev, 0}, L);
    } else {
      const int lev = static_cast<int>(rng.uniform_below(L - 1)) + 1;
      L = lev;
      on_event(t, LDEvent{t, LDEventKind::Mut0, lev, 0}, L);
    }
  }
  return L;
}

}  // namespace

RateMatrix ld_rates(const ModelParams& p) {
  p.validate();
  const int N = p.N;
  RateMatrix Q;
  Q.min_state = 1;
  Q.size = N;
  Q.q.assign(static_cast<std::size_t>(N) * N, 0.0);
  for (int i = 1; i <= N; ++i) {
    if (i < N) Q.at(i, i + 1) = static_cast<double>(i) * (N - i) * p.s / N;
    if (i > 1)
      Q.at(i, i - 1) = static_cast<double>(i) * (i - 1) / N +
                       (i - 1) * p.u * p.nu1 + p.u * p.nu0;
    for (int j = 1; j <= i - 2; ++j) Q.at(i, j) = p.u * p.nu0;
  }
  fill_diagonal(Q);
  return Q;
}

Pmf stationary_ld(const ModelParams& p) {
  p.validate();
  if (p.N == 1) return Pmf{1, {1.0}};
  if (!(p.s > 0.0))
    fail(Errc::SelectionRequired, "stationary_ld requires s > 0");
  return solve_stationary(ld_rates(p));
}

LDPath simulate_ld(const ModelParams& p, double horizon, std::uint64_t seed) {
  p.validate();
  if (!(horizon > 0.0)) fail(Errc::InvalidArgument, "horizon must be positive");

  const int N = p.N;
  Philox4x64 rng(seed, 0);
  LDPath path;
  path.times.push_back(0.0);
  path.states.push_back(LDState{1, 1});

  int L = 1, I = 1;
  double t = 0.0;
  for (;;) {
    const double r_branch = static_cast<double>(L) * (N - L) * p.s / N;
    const double r_coal = static_cast<double>(L) * (L - 1) / N;
    const double r_arrows = static_cast<double>(L) * (L - 1) * p.s / N;
    const double r_mut0 = L * p.u * p.nu0;
    const double r_mut1 = L * p.u * p.nu1;
    const double total = r_branch + r_coal + r_arrows + r_mut0 + r_mut1;
    if (total <= 0.0) break;  // s = u = 0 with L = 1: nothing can happen
    t += rng.exponential(total);
    if (t > horizon) break;

    const double r = rng.uniform01() * total;
    LDEvent ev{t, LDEventKind::Branch, 0, 0};
    if (r < r_branch) {
      // New line inserted at level lev; everything at lev and above shifts up.
      const int lev = static_cast<int>(rng.uniform_below(L)) + 1;
      if (lev <= I) ++I;
      ++L;
      ev = {t, LDEventKind::Branch, lev, 0};
    } else if (r < r_branch + r_coal) {
      // Ordered pair (i, j); the line at the higher level drops onto the lower.
      const auto m = rng.uniform_below(static_cast<std::uint64_t>(L) * (L - 1));
      const int i = static_cast<int>(m / (L - 1)) + 1;
      int j = static_cast<int>(m % (L - 1)) + 1;
      if (j >= i) ++j;
      const int lo = std::min(i, j), hi = std::max(i, j);
      if (I == hi)
        I = lo;
      else if (I > hi)
        --I;
      --L;
      ev = {t, LDEventKind::Coal, i, j};
    } else if (r < r_branch + r_coal + r_arrows) {
      // Selective arrow between occupied levels, tail i to head j.
      const auto m = rng.uniform_below(static_cast<std::uint64_t>(L) * (L - 1));
      const int i = static_cast<int>(m / (L - 1)) + 1;
      int j = static_cast<int>(m % (L - 1)) + 1;
      if (j >= i) ++j;
      if (i < j) {
        ev = {t, LDEventKind::Coll, i, j};  // tail below head: nothing moves
      } else {
        // Tail descends to the head's level; levels in [j, i) shift up.
        if (I == i)
          I = j;
        else if (I >= j && I < i)
          ++I;
        ev = {t, LDEventKind::XColl, i, j};
      }
    } else if (r < r_branch + r_coal + r_arrows + r_mut0) {
      // Beneficial mutation truncates every level above it.
      const int lev = static_cast<int>(rng.uniform_below(L)) + 1;
      if (I > lev) I = lev;
      L = lev;
      ev = {t, LDEventKind::Mut0, lev, 0};
    } else {
      // Deleterious mutation kills the line, unless it hits the immune line,
      // which instead relocates to the top level.
      const int lev = static_cast<int>(rng.uniform_below(L)) + 1;
      if (lev == I) {
        I = L;
      } else {
        if (I > lev) --I;
        --L;
      }
      ev = {t, LDEventKind::Mut1, lev, 0};
    }
    path.times.push_back(t);
    path.states.push_back(LDState{L, I});
    path.events.push_back(ev);
  }
  return path;
}

int ancestral_level(const LDState& state, const std::vector<int>& types) {
  if (types.size() != static_cast<std::size_t>(state.levels))
    fail(Errc::InvalidArgument, "types length must equal the level count");
  for (int l = 1; l <= state.levels; ++l)
    if (types[l - 1] == 0) return l;
  return state.immune;
}

RateMatrix asymptotic_rates(const ModelParams& p, int truncation) {
  p.validate();
  if (truncation < 2) fail(Errc::InvalidArgument, "truncation must be >= 2");
  if (p.s <= 0.0 && p.u <= 0.0)
    fail(Errc::InvalidArgument, "asymptotic chain needs s > 0 or u > 0");
  RateMatrix Q;
  Q.min_state = 1;
  Q.size = truncation;
  Q.q.assign(static_cast<std::size_t>(truncation) * truncation, 0.0);
  for (int i = 1; i <= truncation; ++i) {
    if (i < truncation) Q.at(i, i + 1) = i * p.s;
    if (i > 1) Q.at(i, i - 1) = (i - 1) * p.u * p.nu1 + p.u * p.nu0;
    for (int j = 1; j <= i - 2; ++j) Q.at(i, j) = p.u * p.nu0;
  }
  fill_diagonal(Q);
  return Q;
}

AsymptoticStationary stationary_asymptotic(const ModelParams& p,
                                           int truncation) {
  p.validate();
  if (!(p.s > 0.0))
    fail(Errc::SelectionRequired, "asymptotic stationary law requires s > 0");
  if (!(p.u > 0.0))
    fail(Errc::MutationRequired, "asymptotic stationary law requires u > 0");
  const double ell = derive(p).ell_minus;
  if (ell >= 1.0)
    fail(Errc::InvalidArgument,
         "geometric parameter degenerates (requires nu0 > 0 or u > s)");

  int M = truncation;
  if (M <= 0) M = static_cast<int>(std::ceil(60.0 * std::max(1.0, p.s / p.u)));
  M = std::max(M, 2);

  AsymptoticStationary out;
  for (;;) {
    out.solved = solve_stationary(asymptotic_rates(p, M));
    if (truncation > 0 || out.solved.prob.back() < 1e-12) break;
    if (M > 1'000'000)
      fail(Errc::PrecisionLoss, "asymptotic truncation did not stabilize");
    M *= 2;
  }
  out.closed_form.min_state = 1;
  out.closed_form.prob.assign(static_cast<std::size_t>(M), 0.0);
  for (int k = 1; k <= M; ++k)
    out.closed_form.prob[k - 1] = (1.0 - ell) * std::pow(ell, k - 1);
  return out;
}

Pmf transient_distribution(const RateMatrix& Q, double t, const Pmf& initial) {
  if (!(t >= 0.0)) fail(Errc::InvalidArgument, "t must be nonnegative");
  const int M = Q.size;
  if (initial.min_state != Q.min_state ||
      initial.prob.size() != static_cast<std::size_t>(M))
    fail(Errc::InvalidArgument, "initial pmf must live on the generator's states");

  double lam = 0.0;
  for (int i = 0; i < M; ++i)
    lam = std::max(lam, -Q.q[static_cast<std::size_t>(i) * M + i]);
  if (lam * t == 0.0) return initial;

  // Uniformization: P = I + Q/lam is stochastic; apply the Poisson(lam t)
  // mixture of its powers, truncated once 1 - 1e-13 of the mass is spent.
  Eigen::MatrixXd Pt(M, M);  // transpose of P, so v evolves by Pt * v
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      Pt(j, i) = Q.q[static_cast<std::size_t>(i) * M + j] / lam +
                 (i == j ? 1.0 : 0.0);
  Eigen::VectorXd v(M), acc = Eigen::VectorXd::Zero(M);
  for (int i = 0; i < M; ++i) v(i) = initial.prob[i];

  const double lt = lam * t;
  const double log_lt = std::log(lt);
  double spent = 0.0;
  const std::int64_t hard_cap =
      static_cast<std::int64_t>(lt + 40.0 * std::sqrt(lt + 1.0) + 100.0);
  for (std::int64_t k = 0;; ++k) {
    const double logw = -lt + k * log_lt - std::lgamma(k + 1.0);
    const double w = std::exp(logw);
    if (w > 0.0) acc += w * v;
    spent += w;
    if (spent >= 1.0 - 1e-13 || k >= hard_cap) break;
    v = Pt * v;
  }

  Pmf out;
  out.min_state = Q.min_state;
  out.prob.assign(acc.data(), acc.data() + M);
  return out;
}

LDPath simulate_asymptotic_ld(const ModelParams& p, double horizon,
                              std::uint64_t seed, std::int64_t event_cap) {
  p.validate();
  if (!(p.s > 0.0 && p.u > 0.0))
    fail(Errc::InvalidArgument, "asymptotic simulator requires s > 0 and u > 0");
  if (!(horizon > 0.0)) fail(Errc::InvalidArgument, "horizon must be positive");

  Philox4x64 rng(seed, 0);
  LDPath path;
  path.times.push_back(0.0);
  path.states.push_back(LDState{1, 1});
  run_asymptotic(p, horizon, rng, event_cap,
                 [&](double t, const LDEvent& ev, int L) {
                   path.times.push_back(t);
                   path.states.push_back(LDState{L, L});
                   path.events.push_back(ev);
                 });
  return path;
}

EstimateResult representative_type(const ModelParams& p, double x, double beta,
                                   std::int64_t replicas, std::uint64_t seed,
                                   bool rao_blackwell) {
  p.validate();
  if (!(p.s > 0.0 && p.u > 0.0))
    fail(Errc::InvalidArgument, "representative_type requires s > 0 and u > 0");
  if (!(x >= 0.0 && x <= 1.0)) fail(Errc::InvalidArgument, "x out of [0, 1]");
  if (!(beta > 0.0)) fail(Errc::InvalidArgument, "beta must be positive");
  if (replicas < 1) fail(Errc::InvalidArgument, "replicas must be >= 1");

  std::vector<double> values(static_cast<std::size_t>(replicas), 0.0);
  par::for_each_replica(replicas, [&](std::int64_t r) {
    Philox4x64 rng(seed, static_cast<std::uint64_t>(r));
    const int L = run_asymptotic(p, beta, rng, 10'000'000,
                                 [](double, const LDEvent&, int) {});
    if (rao_blackwell) {
      // Exact conditional probability that some level carries type 0.
      values[r] = 1.0 - std::pow(1.0 - x, L);
    } else {
      std::vector<int> types(static_cast<std::size_t>(L));
      for (int l = 0; l < L; ++l) types[l] = rng.bernoulli(x) ? 0 : 1;
      const int lev = ancestral_level(LDState{L, L}, types);
      values[r] = types[lev - 1] == 0 ? 1.0 : 0.0;
    }
  });

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(replicas);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = replicas > 1 ? ss / static_cast<double>(replicas - 1) : 0.0;
  return EstimateResult{mean, std::sqrt(var / static_cast<double>(replicas)),
                        replicas};
}

}  // namespace ancestree
