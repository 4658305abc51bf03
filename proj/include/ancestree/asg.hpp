// Ancestral selection graph: backward simulation of the potential-ancestor
// set, genealogy resolution under type assignments, relevant-line and path
// classification, and the two Monte Carlo estimators of the common-ancestor
// type distribution.
#pragma once

#include <cstdint>
#include <vector>

#include "ancestree/forward.hpp"
#include "ancestree/ldasg.hpp"
#include "ancestree/params.hpp"
#include "ancestree/types.hpp"

namespace ancestree {

enum class ASGEventKind { SelectiveArrow, NeutralArrow, Mut0, Mut1 };

// Backward-time event.  Arrows point from src (the potential parent) to dst
// (the existing line); mutations carry the line in src and dst = 0.
struct ASGEvent {
  double time;
  ASGEventKind kind;
  int src = 0;
  int dst = 0;
};

struct ASGRealisation {
  ModelParams params;
  std::vector<int> sample;  // initial active lines, sorted
  double horizon = 0.0;
  std::vector<ASGEvent> events;          // strictly increasing time
  std::vector<std::vector<int>> active;  // post-event active sets, sorted

  const std::vector<int>& active_at_horizon() const {
    return active.empty() ? sample : active.back();
  }
};

struct GenealogyResult {
  int ancestor_line = 0;
  int ancestor_type = 1;
};

// Markov construction of the untyped ASG of the sample over backward time
// [0, horizon].  Branchings add an outside line via a selective arrow,
// collisions put a selective arrow inside the set, coalescences merge along
// a neutral arrow, relocations move a line to an outside neutral parent.
// Relocations do not affect the resolved ancestor type and are skipped by
// default; pass ignore_relocation = false to keep them.
ASGRealisation simulate_asg(const ModelParams& p, const std::vector<int>& sample,
                            double horizon, std::uint64_t seed,
                            bool ignore_relocation = true);

// Birth-death rates of the active-set size on {1..N}:
//   up   k -> k+1 at k (N - k) s / N
//   down k -> k-1 at k (k - 1) / N
BirthDeathRates line_count_rates(const ModelParams& p);

// Stationary law of the active-set size: Binomial(N, s/(1+s)) conditioned to
// be positive.  Requires s > 0 (SelectionRequired).
Pmf stationary_line_count(const ModelParams& p);

// Propagates the types assigned at the horizon forward through the graph
// (selective arrows deliver type 0 only when the incoming branch carries
// type 0; neutral arrows always deliver; mutations overwrite) and returns
// the sample's true ancestor and its assigned type.  types is indexed by
// line (entries 1..N; only horizon-active lines are read).
GenealogyResult resolve_genealogy(const ASGRealisation& r,
                                  const std::vector<int>& types);

// Lines that are the resolved ancestor under at least one of the 2^K type
// assignments to the K horizon-active lines.  TooManyLines when K > 20.
std::vector<int> relevant_lines(const ASGRealisation& r);

enum class PathLabel { Neutral, AlmostNeutral, TrulySelective, Fictitious };

struct PathInfo {
  int start_line = 0;
  // (event index, line occupied from that event on); selective entries are
  // the jumps along used selective arrows.
  std::vector<std::pair<int, int>> jumps;
  int line_at_horizon = 0;
  PathLabel label = PathLabel::Neutral;
  bool relevant = false;
  bool immune = false;
};

struct PathClassification {
  std::vector<PathInfo> paths;
  std::vector<int> relevant_terminal_lines;  // sorted, unique
  std::vector<int> immune_terminal_lines;    // sorted, unique
};

// Enumerates every path of the realisation (jumping along neutral arrows is
// forced, along selective arrows optional), labels each one from the
// per-segment first-mutation rule, and marks relevance (not fictitious, not
// hit by an almost neutral path) and immunity (relevant and neutral or
// almost neutral).  PathExplosion beyond path_cap paths.
PathClassification classify_paths(const ASGRealisation& r,
                                  std::int64_t path_cap = 1'000'000);

// The genealogy of one sample line under a full type assignment, as a path
// through the realisation (used to cross-check classify_paths against
// resolve_genealogy).
PathInfo ancestral_path(const ASGRealisation& r, const std::vector<int>& types,
                        int sample_line);

// Forward offspring-tracking estimate of h_k^N: simulate the particle
// system, find the time-0 individual whose descendants take over, report how
// often its initial type is 0.  ReplicaTimeout if a replica exceeds
// event_cap events before absorption.
EstimateResult estimate_h_forward(const ModelParams& p, int k,
                                  std::int64_t replicas, std::uint64_t seed,
                                  std::int64_t event_cap = 10'000'000);

// ASG estimate of h_k^N: simulate the single-line ASG to the horizon, deal k
// type-0 individuals uniformly among the N holders, resolve the genealogy,
// report how often the ancestor type is 0.  Bias vanishes as the horizon
// grows.
EstimateResult estimate_h_asg(const ModelParams& p, int k, double horizon,
                              std::int64_t replicas, std::uint64_t seed);

}  // namespace ancestree
