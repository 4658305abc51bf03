// Pruned lookdown ancestral structures: the finite (L, I) jump process with
// immune-line tracking, its line-count generator and stationary law, the
// asymptotic line-counting chain of the deterministic limit, transient
// distributions by uniformization, and the representative-ancestral-type
// estimator.
#pragma once

#include <cstdint>
#include <vector>

#include "ancestree/params.hpp"
#include "ancestree/types.hpp"

namespace ancestree {

// Dense CTMC generator over states [min_state .. min_state + size - 1];
// off-diagonals >= 0, rows sum to zero.
struct RateMatrix {
  int min_state = 1;
  int size = 0;
  std::vector<double> q;  // row-major, size * size

  double& at(int i, int j) {
    return q[static_cast<std::size_t>(i - min_state) * size + (j - min_state)];
  }
  double at(int i, int j) const {
    return q[static_cast<std::size_t>(i - min_state) * size + (j - min_state)];
  }
};

// Occupied level count L and immune-line level I, 1 <= I <= L <= N.
struct LDState {
  int levels = 1;
  int immune = 1;
};

enum class LDEventKind { Branch, Coal, Coll, XColl, Mut0, Mut1 };

struct LDEvent {
  double time;
  LDEventKind kind;
  int i = 0;  // primary level (arrow tail for pair events, line for mutations)
  int j = 0;  // secondary level for pair events, 0 otherwise
};

// Jump path of the (L, I) process: states[k] holds after times[k]; times[0]
// = 0 carries the initial state and events[k-1] produced states[k].
struct LDPath {
  std::vector<double> times;
  std::vector<LDState> states;
  std::vector<LDEvent> events;
};

// Generator of the line-count marginal L on {1..N}:
//   q(i, i+1) = i (N - i) s / N
//   q(i, i-1) = i (i - 1)/N + (i - 1) u nu1 + u nu0
//   q(i, j)   = u nu0 for j <= i - 2
// State 1 has no down-jump.
RateMatrix ld_rates(const ModelParams& p);

// Stationary law of ld_rates.  Requires s > 0 (SelectionRequired); N = 1 is
// the trivial point mass.  Tails reproduce the ancestor-decomposition
// coefficients: P(L > n) = a_n^N.
Pmf stationary_ld(const ModelParams& p);

// Event-level simulation of (L, I) from (1, 1), logging every bullet of the
// construction: branchings insert a level, coalescences merge two, selective
// arrows between occupied levels either log a no-op collision (tail below
// head) or reorder levels (exchange collision, tail above head), type-0
// mutations truncate everything above the mutation level, and type-1
// mutations kill the line (or relocate the immune line to the top).
LDPath simulate_ld(const ModelParams& p, double horizon, std::uint64_t seed);

// Lowest level with type 0; the immune level when every type is 1.
// types[l - 1] is the type at level l.
int ancestral_level(const LDState& state, const std::vector<int>& types);

// Truncated generator of the asymptotic line-counting chain on {1..M}:
//   q(i, i+1) = i s (dropped at i = M)
//   q(i, i-1) = (i - 1) u nu1 + u nu0
//   q(i, j)   = u nu0 for j <= i - 2
RateMatrix asymptotic_rates(const ModelParams& p, int truncation);

struct AsymptoticStationary {
  Pmf closed_form;  // geometric: P(L = k) = (1 - ell_minus) ell_minus^{k-1}
  Pmf solved;       // normalized null vector of the truncated generator
};

// Requires s > 0 and u > 0 and a subcritical ell_minus < 1 (nu0 > 0 or
// u > s).  truncation <= 0 selects 60 * max(1, s/u), doubled until the
// solved tail mass drops below 1e-12.
AsymptoticStationary stationary_asymptotic(const ModelParams& p,
                                           int truncation = 0);

// exp(Q t) applied to initial, by uniformization; total-variation error
// below 1e-12.
Pmf transient_distribution(const RateMatrix& Q, double t, const Pmf& initial);

// Asymptotic pruned lookdown simulator from L = 1 with the immune line
// pinned to the top level.  Events: branching at a uniform occupied level
// (L + 1), type-1 mutation at a non-top level (L - 1), type-0 mutation at a
// non-top level i (truncation, L := i).  Raises EventCapExceeded beyond
// event_cap jumps.
LDPath simulate_asymptotic_ld(const ModelParams& p, double horizon,
                              std::uint64_t seed,
                              std::int64_t event_cap = 10'000'000);

// Estimates the probability that the representative ancestor at backward
// time beta has type 0 when present-day types are i.i.d. type 0 with
// probability x.  With rao_blackwell, each replica contributes the exact
// conditional value 1 - (1 - x)^{L_beta}; otherwise types are sampled and
// ancestral_level decides.  Converges to limit_h(p, x) as beta grows.
EstimateResult representative_type(const ModelParams& p, double x, double beta,
                                   std::int64_t replicas, std::uint64_t seed,
                                   bool rao_blackwell);

}  // namespace ancestree
