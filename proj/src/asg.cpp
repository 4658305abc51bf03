#include "ancestree/asg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "ancestree/errors.hpp"
#include "ancestree/parallel.hpp"
#include "ancestree/rng.hpp"

namespace ancestree {
namespace {

constexpr int kMaxExhaustiveLines = 20;

bool is_arrow(ASGEventKind k) {
  return k == ASGEventKind::SelectiveArrow || k == ASGEventKind::NeutralArrow;
}

// Draw an ordered pair of distinct indices in [0, k).
std::pair<int, int> ordered_pair(Philox4x64& rng, int k) {
  const auto m = rng.uniform_below(static_cast<std::uint64_t>(k) * (k - 1));
  const int i = static_cast<int>(m / (k - 1));
  int j = static_cast<int>(m % (k - 1));
  if (j >= i) ++j;
  return {i, j};
}

// The idx-th line of [1..N] not contained in the sorted set A.
int absent_line(const std::vector<int>& A, int N, int idx) {
  std::size_t a = 0;
  for (int line = 1; line <= N; ++line) {
    if (a < A.size() && A[a] == line) {
      ++a;
      continue;
    }
    if (idx == 0) return line;
    --idx;
  }
  fail(Errc::InternalError, "no absent line found");
}

ASGRealisation simulate_asg_core(const ModelParams& p,
                                 const std::vector<int>& sample, double horizon,
                                 Philox4x64& rng, bool ignore_relocation) {
  const int N = p.N;
  ASGRealisation r;
  r.params = p;
  r.sample = sample;
  r.horizon = horizon;

  std::vector<int> A = sample;
  double t = 0.0;
  for (;;) {
    const int k = static_cast<int>(A.size());
    const double r_branch = static_cast<double>(k) * (N - k) * p.s / N;
    const double r_coll = static_cast<double>(k) * (k - 1) * p.s / N;
    const double r_coal = static_cast<double>(k) * (k - 1) / N;
    const double r_reloc =
        ignore_relocation ? 0.0 : static_cast<double>(k) * (N - k) / N;
    const double r_mut0 = k * p.u * p.nu0;
    const double r_mut1 = k * p.u * p.nu1;
    const double total = r_branch + r_coll + r_coal + r_reloc + r_mut0 + r_mut1;
    if (total <= 0.0) break;
    t += rng.exponential(total);
    if (t > horizon) break;

    const double w = rng.uniform01() * total;
    if (w < r_branch) {
      // A line outside the set shoots a selective arrow into it.
      const int i = absent_line(A, N, static_cast<int>(rng.uniform_below(N - k)));
      const int j = A[rng.uniform_below(k)];
      r.events.push_back({t, ASGEventKind::SelectiveArrow, i, j});
      A.insert(std::upper_bound(A.begin(), A.end(), i), i);
    } else if (w < r_branch + r_coll) {
      // Selective arrow between two active lines; the set is unchanged.
      const auto [a, b] = ordered_pair(rng, k);
      r.events.push_back({t, ASGEventKind::SelectiveArrow, A[a], A[b]});
    } else if (w < r_branch + r_coll + r_coal) {
      // Backward merge: line j was born from i, so j leaves the set.
      const auto [a, b] = ordered_pair(rng, k);
      const int i = A[a], j = A[b];
      r.events.push_back({t, ASGEventKind::NeutralArrow, i, j});
      A.erase(std::lower_bound(A.begin(), A.end(), j));
    } else if (w < r_branch + r_coll + r_coal + r_reloc) {
      // Line j was born from an outside parent i; the lineage moves there.
      const int i = absent_line(A, N, static_cast<int>(rng.uniform_below(N - k)));
      const int j = A[rng.uniform_below(k)];
      r.events.push_back({t, ASGEventKind::NeutralArrow, i, j});
      A.erase(std::lower_bound(A.begin(), A.end(), j));
      A.insert(std::upper_bound(A.begin(), A.end(), i), i);
    } else if (w < r_branch + r_coll + r_coal + r_reloc + r_mut0) {
      r.events.push_back(
          {t, ASGEventKind::Mut0, A[rng.uniform_below(k)], 0});
    } else {
      r.events.push_back(
          {t, ASGEventKind::Mut1, A[rng.uniform_below(k)], 0});
    }
    r.active.push_back(A);
  }
  return r;
}

void validate_types(const ASGRealisation& r, const std::vector<int>& types) {
  if (types.size() != static_cast<std::size_t>(r.params.N) + 1)
    fail(Errc::InvalidArgument, "types must have one entry per line plus index 0");
  for (int line : r.active_at_horizon())
    if (types[line] != 0 && types[line] != 1)
      fail(Errc::InvalidArgument, "types of horizon-active lines must be 0 or 1");
}

// Classification of one path from its jump list.  Taken selective arrows cut
// the path into intervals; the first mutation met by the lineage inside each
// interval decides whether the arrow below it can ever fire.
PathLabel label_of(const ASGRealisation& r, int start,
                   const std::vector<std::pair<int, int>>& jumps) {
  int sel_count = 0;
  for (const auto& [e, line] : jumps)
    if (r.events[e].kind == ASGEventKind::SelectiveArrow) ++sel_count;
  if (sel_count == 0) return PathLabel::Neutral;

  int cur = start;
  std::size_t p = 0;
  int interval = -1;  // index of the selective jump the lineage sits above
  bool settled = false;
  bool last_settled_mut0 = false;
  for (int e = 0; e < static_cast<int>(r.events.size()); ++e) {
    if (p < jumps.size() && jumps[p].first == e) {
      const bool sel = r.events[e].kind == ASGEventKind::SelectiveArrow;
      cur = jumps[p].second;
      ++p;
      if (sel) {
        ++interval;
        settled = false;
      }
      continue;
    }
    const ASGEvent& ev = r.events[e];
    if (is_arrow(ev.kind) || ev.src != cur || interval < 0 || settled) continue;
    settled = true;
    if (ev.kind == ASGEventKind::Mut1) return PathLabel::Fictitious;
    if (interval == sel_count - 1) last_settled_mut0 = true;
  }
  return last_settled_mut0 ? PathLabel::AlmostNeutral : PathLabel::TrulySelective;
}

int terminal_of(int start, const std::vector<std::pair<int, int>>& jumps) {
  return jumps.empty() ? start : jumps.back().second;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a ? ~std::uint64_t{0} : s;
}

}  // namespace

ASGRealisation simulate_asg(const ModelParams& p, const std::vector<int>& sample,
                            double horizon, std::uint64_t seed,
                            bool ignore_relocation) {
  p.validate();
  if (!(horizon > 0.0)) fail(Errc::InvalidArgument, "horizon must be positive");
  std::vector<int> s = sample;
  std::sort(s.begin(), s.end());
  if (s.empty() || std::unique(s.begin(), s.end()) != s.end() || s.front() < 1 ||
      s.back() > p.N)
    fail(Errc::InvalidArgument, "sample must be distinct lines in 1..N");
  Philox4x64 rng(seed, 0);
  return simulate_asg_core(p, s, horizon, rng, ignore_relocation);
}

BirthDeathRates line_count_rates(const ModelParams& p) {
  p.validate();
  const int N = p.N;
  BirthDeathRates r;
  r.lambda.assign(static_cast<std::size_t>(N) + 1, 0.0);
  r.mu.assign(static_cast<std::size_t>(N) + 1, 0.0);
  for (int k = 0; k <= N; ++k) {
    r.lambda[k] = static_cast<double>(k) * (N - k) * p.s / N;
    r.mu[k] = static_cast<double>(k) * (k - 1) / N;
  }
  return r;
}

Pmf stationary_line_count(const ModelParams& p) {
  p.validate();
  if (!(p.s > 0.0))
    fail(Errc::SelectionRequired, "line-count stationary law requires s > 0");
  const int N = p.N;
  // Binomial(N, s/(1+s)) conditioned to be positive.
  const double logp = std::log(p.s) - std::log1p(p.s);
  const double logq = -std::log1p(p.s);
  Pmf pi;
  pi.min_state = 1;
  pi.prob.assign(static_cast<std::size_t>(N), 0.0);
  double sum = 0.0;
  double logc = 0.0;  // log C(N, k)
  for (int k = 1; k <= N; ++k) {
    logc += std::log(static_cast<double>(N - k + 1)) - std::log(static_cast<double>(k));
    pi.prob[k - 1] = std::exp(logc + k * logp + (N - k) * logq);
    sum += pi.prob[k - 1];
  }
  for (double& v : pi.prob) v /= sum;
  return pi;
}

GenealogyResult resolve_genealogy(const ASGRealisation& r,
                                  const std::vector<int>& types) {
  validate_types(r, types);
  const int N = r.params.N;
  std::vector<int> cur_type(static_cast<std::size_t>(N) + 1, -1);
  std::vector<int> cur_anc(static_cast<std::size_t>(N) + 1, 0);
  for (int line : r.active_at_horizon()) {
    cur_type[line] = types[line];
    cur_anc[line] = line;
  }

  // Forward in real time = decreasing event index.
  for (int e = static_cast<int>(r.events.size()) - 1; e >= 0; --e) {
    const ASGEvent& ev = r.events[e];
    switch (ev.kind) {
      case ASGEventKind::SelectiveArrow:
        if (cur_type[ev.src] < 0)
          fail(Errc::InternalError, "arrow from a line without a type");
        if (cur_type[ev.src] == 0) {
          cur_type[ev.dst] = 0;
          cur_anc[ev.dst] = cur_anc[ev.src];
        }
        break;
      case ASGEventKind::NeutralArrow:
        if (cur_type[ev.src] < 0)
          fail(Errc::InternalError, "arrow from a line without a type");
        cur_type[ev.dst] = cur_type[ev.src];
        cur_anc[ev.dst] = cur_anc[ev.src];
        break;
      case ASGEventKind::Mut0:
        cur_type[ev.src] = 0;
        break;
      case ASGEventKind::Mut1:
        cur_type[ev.src] = 1;
        break;
    }
  }

  const int anc = cur_anc[r.sample.front()];
  for (int line : r.sample)
    if (cur_anc[line] != anc)
      fail(Errc::InvalidArgument,
           "sample lines have not coalesced by the horizon; increase it");
  if (anc == 0) fail(Errc::InternalError, "ancestor line untracked");
  return GenealogyResult{anc, types[anc]};
}

std::vector<int> relevant_lines(const ASGRealisation& r) {
  const auto& act = r.active_at_horizon();
  const int K = static_cast<int>(act.size());
  if (K > kMaxExhaustiveLines)
    fail(Errc::TooManyLines, "exhaustive resolution over " + std::to_string(K) +
                                 " lines is not feasible");
  std::vector<char> seen(static_cast<std::size_t>(r.params.N) + 1, 0);
  std::vector<int> types(static_cast<std::size_t>(r.params.N) + 1, 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
    for (int b = 0; b < K; ++b)
      types[act[b]] = (mask >> b) & 1 ? 0 : 1;
    seen[resolve_genealogy(r, types).ancestor_line] = 1;
  }
  std::vector<int> out;
  for (int line = 1; line <= r.params.N; ++line)
    if (seen[line]) out.push_back(line);
  return out;
}

PathClassification classify_paths(const ASGRealisation& r,
                                  std::int64_t path_cap) {
  const int N = r.params.N;
  const int E = static_cast<int>(r.events.size());

  // Counting pass: paths from (line, event index) to the horizon.
  std::vector<std::uint64_t> next(static_cast<std::size_t>(N) + 1, 1);
  std::vector<std::vector<std::uint64_t>> cnt(
      static_cast<std::size_t>(E) + 1,
      std::vector<std::uint64_t>(static_cast<std::size_t>(N) + 1, 0));
  cnt[E] = next;
  for (int e = E - 1; e >= 0; --e) {
    cnt[e] = cnt[e + 1];
    const ASGEvent& ev = r.events[e];
    if (ev.kind == ASGEventKind::NeutralArrow)
      cnt[e][ev.dst] = cnt[e + 1][ev.src];
    else if (ev.kind == ASGEventKind::SelectiveArrow)
      cnt[e][ev.dst] = sat_add(cnt[e + 1][ev.dst], cnt[e + 1][ev.src]);
  }
  std::uint64_t total = 0;
  for (int line : r.sample) total = sat_add(total, cnt[0][line]);
  if (total > static_cast<std::uint64_t>(path_cap))
    fail(Errc::PathExplosion, "realisation carries more than " +
                                  std::to_string(path_cap) + " paths");

  PathClassification out;
  std::vector<std::pair<int, int>> jumps;
  auto emit = [&](int start) {
    PathInfo info;
    info.start_line = start;
    info.jumps = jumps;
    info.line_at_horizon = terminal_of(start, jumps);
    info.label = label_of(r, start, jumps);
    out.paths.push_back(std::move(info));
  };
  // Depth-first walk; jumping along a neutral arrow pointing at the current
  // line is forced, along a selective one optional.
  auto walk = [&](auto&& self, int line, int e, int start) -> void {
    // Forced neutral jumps are appended to the shared vector as the frame
    // scans, so the frame must shrink it back to its entry size on the way
    // out or the caller's stay branch inherits them.
    const std::size_t base = jumps.size();
    for (; e < E; ++e) {
      const ASGEvent& ev = r.events[e];
      if (ev.dst != line || !is_arrow(ev.kind)) continue;
      if (ev.kind == ASGEventKind::NeutralArrow) {
        jumps.emplace_back(e, ev.src);
        line = ev.src;
        continue;
      }
      jumps.emplace_back(e, ev.src);
      self(self, ev.src, e + 1, start);
      jumps.pop_back();
    }
    emit(start);
    jumps.resize(base);
  };
  for (int line : r.sample) walk(walk, line, 0, line);

  // Taken selective arrows of almost neutral paths fire under every type
  // assignment; any path sitting on the target line at that moment is cut.
  std::vector<int> hit_events;
  for (const PathInfo& path : out.paths) {
    if (path.label != PathLabel::AlmostNeutral) continue;
    for (const auto& [e, line] : path.jumps)
      if (r.events[e].kind == ASGEventKind::SelectiveArrow)
        hit_events.push_back(e);
  }
  std::sort(hit_events.begin(), hit_events.end());
  hit_events.erase(std::unique(hit_events.begin(), hit_events.end()),
                   hit_events.end());

  for (PathInfo& path : out.paths) {
    bool hit = false;
    std::size_t p = 0;
    int cur = path.start_line;
    for (int e : hit_events) {
      while (p < path.jumps.size() && path.jumps[p].first <= e)
        cur = path.jumps[p++].second;
      if (cur == r.events[e].dst) {
        hit = true;
        break;
      }
    }
    path.relevant = path.label != PathLabel::Fictitious && !hit;
    path.immune = path.relevant && (path.label == PathLabel::Neutral ||
                                    path.label == PathLabel::AlmostNeutral);
    if (path.relevant) out.relevant_terminal_lines.push_back(path.line_at_horizon);
    if (path.immune) out.immune_terminal_lines.push_back(path.line_at_horizon);
  }
  for (auto* v : {&out.relevant_terminal_lines, &out.immune_terminal_lines}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return out;
}

PathInfo ancestral_path(const ASGRealisation& r, const std::vector<int>& types,
                        int sample_line) {
  validate_types(r, types);
  if (std::find(r.sample.begin(), r.sample.end(), sample_line) ==
      r.sample.end())
    fail(Errc::InvalidArgument, "sample_line is not part of the sample");

  const int N = r.params.N;
  const int E = static_cast<int>(r.events.size());
  // snap[e] holds the line types on the time interval just above event e.
  std::vector<std::vector<int>> snap(static_cast<std::size_t>(E));
  std::vector<int> cur_type(static_cast<std::size_t>(N) + 1, -1);
  for (int line : r.active_at_horizon()) cur_type[line] = types[line];
  for (int e = E - 1; e >= 0; --e) {
    snap[e] = cur_type;
    const ASGEvent& ev = r.events[e];
    switch (ev.kind) {
      case ASGEventKind::SelectiveArrow:
        if (cur_type[ev.src] == 0) cur_type[ev.dst] = 0;
        break;
      case ASGEventKind::NeutralArrow:
        cur_type[ev.dst] = cur_type[ev.src];
        break;
      case ASGEventKind::Mut0:
        cur_type[ev.src] = 0;
        break;
      case ASGEventKind::Mut1:
        cur_type[ev.src] = 1;
        break;
    }
  }

  PathInfo info;
  info.start_line = sample_line;
  int cur = sample_line;
  for (int e = 0; e < E; ++e) {
    const ASGEvent& ev = r.events[e];
    if (!is_arrow(ev.kind) || ev.dst != cur) continue;
    if (ev.kind == ASGEventKind::SelectiveArrow && snap[e][ev.src] != 0)
      continue;  // the potential parent is unfit, the arrow is not used
    info.jumps.emplace_back(e, ev.src);
    cur = ev.src;
  }
  info.line_at_horizon = cur;
  info.label = label_of(r, sample_line, info.jumps);

  const GenealogyResult g = resolve_genealogy(r, types);
  if (g.ancestor_line != cur)
    fail(Errc::InternalError, "ancestral path disagrees with the genealogy");
  return info;
}

EstimateResult estimate_h_forward(const ModelParams& p, int k,
                                  std::int64_t replicas, std::uint64_t seed,
                                  std::int64_t event_cap) {
  p.validate();
  if (k < 0 || k > p.N) fail(Errc::InvalidArgument, "k must lie in 0..N");
  if (replicas < 1) fail(Errc::InvalidArgument, "replicas must be >= 1");

  const int N = p.N;
  std::vector<double> values(static_cast<std::size_t>(replicas), 0.0);
  par::for_each_replica(replicas, [&](std::int64_t rep) {
    Philox4x64 rng(seed, static_cast<std::uint64_t>(rep));
    // Individuals 0..k-1 start with type 0; exchangeability makes the
    // placement irrelevant.  owner tracks the time-0 index whose descendants
    // occupy each slot.
    std::vector<int> type(static_cast<std::size_t>(N));
    std::vector<int> owner(static_cast<std::size_t>(N));
    std::vector<int> count(static_cast<std::size_t>(N), 1);
    for (int i = 0; i < N; ++i) {
      type[i] = i < k ? 0 : 1;
      owner[i] = i;
    }
    int winner = N == 1 ? 0 : -1;

    const double w_neutral = static_cast<double>(N - 1);
    const double w_selective = static_cast<double>(N - 1) * p.s;
    const double w_mutation = static_cast<double>(N) * p.u;
    const double total = w_neutral + w_selective + w_mutation;
    std::int64_t steps = 0;
    while (winner < 0) {
      if (++steps > event_cap)
        fail(Errc::ReplicaTimeout, "no fixation within " +
                                       std::to_string(event_cap) + " events");
      const double w = rng.uniform01() * total;
      if (w < w_neutral + w_selective) {
        const auto [i, j] = ordered_pair(rng, N);
        if (w >= w_neutral && type[i] != 0) continue;  // unfit selective shot
        if (--count[owner[j]] < 0)
          fail(Errc::InternalError, "owner accounting went negative");
        type[j] = type[i];
        owner[j] = owner[i];
        if (++count[owner[i]] == N) winner = owner[i];
      } else {
        const int i = static_cast<int>(rng.uniform_below(N));
        type[i] = rng.bernoulli(p.nu0) ? 0 : 1;
      }
    }
    values[rep] = winner < k ? 1.0 : 0.0;
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

EstimateResult estimate_h_asg(const ModelParams& p, int k, double horizon,
                              std::int64_t replicas, std::uint64_t seed) {
  p.validate();
  if (k < 0 || k > p.N) fail(Errc::InvalidArgument, "k must lie in 0..N");
  if (!(horizon > 0.0)) fail(Errc::InvalidArgument, "horizon must be positive");
  if (replicas < 1) fail(Errc::InvalidArgument, "replicas must be >= 1");

  const int N = p.N;
  std::vector<double> values(static_cast<std::size_t>(replicas), 0.0);
  par::for_each_replica(replicas, [&](std::int64_t rep) {
    Philox4x64 rng(seed, static_cast<std::uint64_t>(rep));
    const ASGRealisation r = simulate_asg_core(p, {1}, horizon, rng, true);
    // Deal the k type-0 individuals uniformly among the N lines.
    std::vector<int> perm(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) perm[i] = i + 1;
    std::vector<int> types(static_cast<std::size_t>(N) + 1, 1);
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(rng.uniform_below(N - i));
      std::swap(perm[i], perm[j]);
      types[perm[i]] = 0;
    }
    values[rep] = resolve_genealogy(r, types).ancestor_type == 0 ? 1.0 : 0.0;
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
