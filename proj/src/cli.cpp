#include "ancestree/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ancestree/asg.hpp"
#include "ancestree/branching.hpp"
#include "ancestree/coeffs.hpp"
#include "ancestree/errors.hpp"
#include "ancestree/forward.hpp"
#include "ancestree/io.hpp"
#include "ancestree/ldasg.hpp"
#include "ancestree/parallel.hpp"
#include "ancestree/params.hpp"
#include "ancestree/rng.hpp"

namespace ancestree::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1";

// JSON has no representation for non-finite doubles; emit them as strings.
ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  return fmt_double(v);
}

ordered_json jarr(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

ordered_json jparams(const ModelParams& p, bool with_N) {
  ordered_json j;
  if (with_N) j["N"] = p.N;
  j["s"] = jnum(p.s);
  j["u"] = jnum(p.u);
  j["nu0"] = jnum(p.nu0);
  j["nu1"] = jnum(p.nu1);
  return j;
}

ordered_json jestimate(const EstimateResult& e) {
  return ordered_json{{"estimate", jnum(e.estimate)},
                      {"std_error", jnum(e.std_error)}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct Opts {
  int N = 2;
  double s = 1.0;
  double u = 1.0;
  double nu0 = 0.5;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string output;

  int k = 1;
  int k0 = 1;
  double x = 0.5;
  double horizon = 10.0;
  double mc_horizon = -1.0;
  double z0 = 0.5;
  double t_end = 20.0;
  double dt = 0.01;
  std::int64_t replicas = 100000;
  std::int64_t event_cap = 10'000'000;
  int truncation = 0;
  int n_min = 2;
  int n_max = 6;
  int grid_points = 101;
  bool emit_grid = false;
  bool keep_relocation = false;
  bool asymptotic = false;
  std::string chain = "moran";
  std::string exact_json;
  std::vector<int> sample{1};

  ModelParams params() const { return make_params(N, s, u, nu0); }
  ModelParams scalar_params() const { return make_params(2, s, u, nu0); }
};

std::string run_derive(const Opts& o) {
  const ModelParams p = o.scalar_params();
  const DerivedConstants d = derive(p);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "derive";
    j["params"] = jparams(p, false);
    j["delta"] = jnum(d.delta);
    j["x_plus"] = jnum(d.x_plus);
    j["ell_minus"] = jnum(d.ell_minus);
    j["ell_plus"] = jnum(d.ell_plus);
    return dump(j);
  }
  std::ostringstream os;
  os << "name,value\n";
  os << "delta," << fmt_double(d.delta) << '\n';
  os << "x_plus," << fmt_double(d.x_plus) << '\n';
  os << "ell_minus," << fmt_double(d.ell_minus) << '\n';
  os << "ell_plus," << fmt_double(d.ell_plus) << '\n';
  return os.str();
}

std::string run_exact(const Opts& o) {
  const ModelParams p = o.params();
  const CoefficientVector a = solve_coefficients(p);
  const AncestorTable h = h_from_coefficients(a);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "exact";
    j["params"] = jparams(p, true);
    j["a"] = jarr(a.a);
    j["h"] = jarr(h.h);
    return dump(j);
  }
  std::ostringstream os;
  write_coefficients_csv(os, a);
  os << '\n';
  write_h_table_csv(os, h);
  return os.str();
}

std::string run_limit(const Opts& o) {
  const ModelParams p = o.scalar_params();
  const DerivedConstants d = derive(p);
  if (o.emit_grid) {
    if (o.grid_points < 2)
      fail(Errc::InvalidArgument, "grid needs at least two points");
    std::vector<double> xs, hs, ds;
    for (int i = 0; i < o.grid_points; ++i) {
      const double x = static_cast<double>(i) / (o.grid_points - 1);
      xs.push_back(x);
      hs.push_back(limit_h(p, x));
      ds.push_back(limit_density(p, x));
    }
    if (o.format == "json") {
      ordered_json j;
      j["schema_version"] = kSchemaVersion;
      j["command"] = "limit";
      j["params"] = jparams(p, false);
      j["ell_minus"] = jnum(d.ell_minus);
      j["ell_plus"] = jnum(d.ell_plus);
      j["x"] = jarr(xs);
      j["h"] = jarr(hs);
      j["density"] = jarr(ds);
      return dump(j);
    }
    std::ostringstream os;
    os << "x,h,density\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
      os << fmt_double(xs[i]) << ',' << fmt_double(hs[i]) << ','
         << fmt_double(ds[i]) << '\n';
    return os.str();
  }
  const double h = limit_h(p, o.x);
  const double den = limit_density(p, o.x);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "limit";
    j["params"] = jparams(p, false);
    j["x"] = jnum(o.x);
    j["h"] = jnum(h);
    j["density"] = jnum(den);
    j["ell_minus"] = jnum(d.ell_minus);
    j["ell_plus"] = jnum(d.ell_plus);
    return dump(j);
  }
  std::ostringstream os;
  os << "name,value\n";
  os << "x," << fmt_double(o.x) << '\n';
  os << "h," << fmt_double(h) << '\n';
  os << "density," << fmt_double(den) << '\n';
  os << "ell_minus," << fmt_double(d.ell_minus) << '\n';
  os << "ell_plus," << fmt_double(d.ell_plus) << '\n';
  return os.str();
}

std::string run_stationary(const Opts& o) {
  const ModelParams p = o.params();
  Pmf pmf;
  Pmf closed;
  bool has_closed = false;
  const char* key = "k";
  if (o.chain == "moran") {
    pmf = stationary_moran(p);
  } else if (o.chain == "ldasg") {
    pmf = stationary_ld(p);
    key = "n";
  } else {
    const AsymptoticStationary st = stationary_asymptotic(p, o.truncation);
    pmf = st.solved;
    closed = st.closed_form;
    has_closed = true;
    key = "n";
  }
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "stationary";
    j["chain"] = o.chain;
    j["params"] = jparams(p, o.chain != "asymptotic");
    j["min_state"] = pmf.min_state;
    j["prob"] = jarr(pmf.prob);
    if (has_closed) {
      j["truncation"] = static_cast<int>(pmf.prob.size());
      j["closed_form"] = jarr(closed.prob);
    }
    return dump(j);
  }
  std::ostringstream os;
  write_pmf_csv(os, pmf, key);
  return os.str();
}

std::string run_simulate_moran(const Opts& o) {
  const ModelParams p = o.params();
  const Trajectory t = simulate_moran(p, o.k0, o.horizon, o.seed);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "simulate-moran";
    j["params"] = jparams(p, true);
    j["k0"] = o.k0;
    j["horizon"] = jnum(o.horizon);
    j["seed"] = o.seed;
    j["rng_scheme"] = kRngSchemeId;
    j["t"] = jarr(t.times);
    j["state"] = jarr(t.states);
    return dump(j);
  }
  std::ostringstream os;
  write_trajectory_csv(os, t);
  return os.str();
}

std::string run_simulate_asg(const Opts& o) {
  const ModelParams p = o.params();
  const ASGRealisation r =
      simulate_asg(p, o.sample, o.horizon, o.seed, !o.keep_relocation);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "simulate-asg";
    j["params"] = jparams(p, true);
    j["sample"] = r.sample;
    j["horizon"] = jnum(o.horizon);
    j["seed"] = o.seed;
    j["rng_scheme"] = kRngSchemeId;
    j["ignore_relocation"] = !o.keep_relocation;
    ordered_json events = ordered_json::array();
    for (const ASGEvent& ev : r.events) {
      ordered_json e;
      e["t"] = jnum(ev.time);
      switch (ev.kind) {
        case ASGEventKind::SelectiveArrow:
          e["kind"] = "sel";
          e["src"] = ev.src;
          e["dst"] = ev.dst;
          break;
        case ASGEventKind::NeutralArrow:
          e["kind"] = "neu";
          e["src"] = ev.src;
          e["dst"] = ev.dst;
          break;
        case ASGEventKind::Mut0:
          e["kind"] = "mut0";
          e["line"] = ev.src;
          break;
        case ASGEventKind::Mut1:
          e["kind"] = "mut1";
          e["line"] = ev.src;
          break;
      }
      events.push_back(e);
    }
    j["events"] = events;
    j["active_at_horizon"] = r.active_at_horizon();
    return dump(j);
  }
  std::ostringstream os;
  write_asg_event_log(os, r);
  return os.str();
}

std::string run_simulate_ldasg(const Opts& o) {
  const ModelParams p = o.params();
  const LDPath path = o.asymptotic
                          ? simulate_asymptotic_ld(p, o.horizon, o.seed, o.event_cap)
                          : simulate_ld(p, o.horizon, o.seed);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "simulate-ldasg";
    j["params"] = jparams(p, !o.asymptotic);
    j["horizon"] = jnum(o.horizon);
    j["seed"] = o.seed;
    j["rng_scheme"] = kRngSchemeId;
    j["asymptotic"] = o.asymptotic;
    j["times"] = jarr(path.times);
    ordered_json levels = ordered_json::array();
    ordered_json immune = ordered_json::array();
    for (const LDState& st : path.states) {
      levels.push_back(st.levels);
      immune.push_back(st.immune);
    }
    j["levels"] = levels;
    j["immune"] = immune;
    ordered_json events = ordered_json::array();
    for (const LDEvent& ev : path.events) {
      ordered_json e;
      e["t"] = jnum(ev.time);
      e["kind"] = ld_event_tag(ev.kind);
      e["i"] = ev.i;
      if (ev.kind == LDEventKind::Coal || ev.kind == LDEventKind::Coll ||
          ev.kind == LDEventKind::XColl)
        e["j"] = ev.j;
      events.push_back(e);
    }
    j["events"] = events;
    return dump(j);
  }
  std::ostringstream os;
  write_ld_event_log(os, path);
  return os.str();
}

std::string run_mc_h(const Opts& o) {
  const ModelParams p = o.params();
  if (o.k < 0 || o.k > p.N) fail(Errc::InvalidArgument, "k must lie in 0..N");
  const double horizon =
      o.mc_horizon > 0 ? o.mc_horizon
                       : (p.u > 0 ? 10.0 / std::min(1.0, p.u) : 50.0);

  double exact;
  if (p.u > 0.0)
    exact = h_table(p).h[o.k];
  else if (p.s > 0.0)
    exact = h_no_mutation(p.N, p.s, o.k);
  else
    exact = static_cast<double>(o.k) / p.N;

  const EstimateResult fwd =
      estimate_h_forward(p, o.k, o.replicas, o.seed, o.event_cap);
  const EstimateResult asg = estimate_h_asg(p, o.k, horizon, o.replicas, o.seed);

  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "mc-h";
    j["params"] = jparams(p, true);
    j["k"] = o.k;
    j["replicas"] = o.replicas;
    j["horizon"] = jnum(horizon);
    j["seed"] = o.seed;
    j["rng_scheme"] = kRngSchemeId;
    j["exact"] = jnum(exact);
    j["forward"] = jestimate(fwd);
    j["asg"] = jestimate(asg);
    return dump(j);
  }
  std::ostringstream os;
  os << "method,estimate,std_error\n";
  os << "exact," << fmt_double(exact) << ",0\n";
  os << "forward," << fmt_double(fwd.estimate) << ','
     << fmt_double(fwd.std_error) << '\n';
  os << "asg," << fmt_double(asg.estimate) << ',' << fmt_double(asg.std_error)
     << '\n';
  return os.str();
}

std::string run_relevant(const Opts& o) {
  const ModelParams p = o.params();
  if (o.replicas < 1) fail(Errc::InvalidArgument, "replicas must be >= 1");
  const CoefficientVector a = solve_coefficients(p);

  std::vector<int> counts(static_cast<std::size_t>(o.replicas), 0);
  par::for_each_replica(o.replicas, [&](std::int64_t rep) {
    const ASGRealisation r = simulate_asg(
        p, {1}, o.horizon, o.seed + static_cast<std::uint64_t>(rep), true);
    counts[rep] = static_cast<int>(relevant_lines(r).size());
  });

  std::vector<double> emp(static_cast<std::size_t>(p.N), 0.0);
  for (int c : counts)
    for (int n = 0; n < std::min(c, p.N); ++n) emp[n] += 1.0;
  for (double& v : emp) v /= static_cast<double>(o.replicas);

  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "relevant";
    j["params"] = jparams(p, true);
    j["horizon"] = jnum(o.horizon);
    j["replicas"] = o.replicas;
    j["seed"] = o.seed;
    j["rng_scheme"] = kRngSchemeId;
    ordered_json rows = ordered_json::array();
    for (int n = 0; n < p.N; ++n)
      rows.push_back(ordered_json{
          {"n", n}, {"empirical", jnum(emp[n])}, {"a", jnum(a.a[n])}});
    j["rows"] = rows;
    return dump(j);
  }
  std::ostringstream os;
  os << "n,empirical,a\n";
  for (int n = 0; n < p.N; ++n)
    os << n << ',' << fmt_double(emp[n]) << ',' << fmt_double(a.a[n]) << '\n';
  return os.str();
}

std::string run_branching(const Opts& o) {
  const ModelParams p = o.scalar_params();
  const BranchingSummary b = branching_summary(p);
  const RatadResiduals res = check_ratad(p);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "branching";
    j["params"] = jparams(p, false);
    j["mean_matrix"] = ordered_json::array(
        {jarr({b.mean_matrix[0][0], b.mean_matrix[0][1]}),
         jarr({b.mean_matrix[1][0], b.mean_matrix[1][1]})});
    j["lambda_plus"] = jnum(b.lambda_plus);
    j["pi"] = jarr({b.pi[0], b.pi[1]});
    j["hbar"] = jarr({b.hbar[0], b.hbar[1]});
    j["alpha"] = jarr({b.alpha[0], b.alpha[1]});
    j["residuals"] = ordered_json{{"closed_form", jnum(res.first)},
                                  {"limit_ratio", jnum(res.second)}};
    return dump(j);
  }
  std::ostringstream os;
  os << "name,value\n";
  os << "A00," << fmt_double(b.mean_matrix[0][0]) << '\n';
  os << "A01," << fmt_double(b.mean_matrix[0][1]) << '\n';
  os << "A10," << fmt_double(b.mean_matrix[1][0]) << '\n';
  os << "A11," << fmt_double(b.mean_matrix[1][1]) << '\n';
  os << "lambda_plus," << fmt_double(b.lambda_plus) << '\n';
  os << "pi0," << fmt_double(b.pi[0]) << '\n';
  os << "pi1," << fmt_double(b.pi[1]) << '\n';
  os << "hbar0," << fmt_double(b.hbar[0]) << '\n';
  os << "hbar1," << fmt_double(b.hbar[1]) << '\n';
  os << "alpha0," << fmt_double(b.alpha[0]) << '\n';
  os << "alpha1," << fmt_double(b.alpha[1]) << '\n';
  os << "residual_closed_form," << fmt_double(res.first) << '\n';
  os << "residual_limit_ratio," << fmt_double(res.second) << '\n';
  return os.str();
}

std::string run_ode(const Opts& o) {
  const ModelParams p = o.scalar_params();
  const Trajectory t = ode_solve(p, o.z0, o.t_end, o.dt);
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "ode";
    j["params"] = jparams(p, false);
    j["z0"] = jnum(o.z0);
    j["t_end"] = jnum(o.t_end);
    j["dt"] = jnum(o.dt);
    j["t"] = jarr(t.times);
    j["z"] = jarr(t.states);
    return dump(j);
  }
  std::ostringstream os;
  write_trajectory_csv(os, t);
  return os.str();
}

struct CompareRow {
  int N = 0;
  double ab_max_diff = 0.0;
  bool ab_pass = false;
  double mc_max_sigma = 0.0;
  bool mc_pass = false;
};

CompareRow compare_row(const ModelParams& p, const std::vector<double>& h_exact,
                       std::int64_t replicas, std::uint64_t seed) {
  CompareRow row;
  row.N = p.N;

  // Route (b): stationary level law of the pruned lookdown, turned into h
  // through its tail probabilities.
  const Pmf rho = stationary_ld(p);
  CoefficientVector tails;
  tails.N = p.N;
  tails.a.assign(static_cast<std::size_t>(p.N), 0.0);
  for (int n = 0; n < p.N; ++n) {
    double t = 0.0;
    for (int i = n + 1; i <= p.N; ++i) t += rho.at(i);
    tails.a[n] = t;
  }
  const AncestorTable h_ld = h_from_coefficients(tails);

  for (int k = 0; k <= p.N; ++k)
    row.ab_max_diff =
        std::max(row.ab_max_diff, std::abs(h_exact[k] - h_ld.h[k]));
  row.ab_pass = row.ab_max_diff <= 1e-10;

  // Route (c): forward offspring-tracking Monte Carlo.
  row.mc_max_sigma = 0.0;
  for (int k = 0; k <= p.N; ++k) {
    const EstimateResult est = estimate_h_forward(p, k, replicas, seed);
    const double diff = std::abs(est.estimate - h_exact[k]);
    if (diff == 0.0) continue;
    const double sigma =
        est.std_error > 0 ? diff / est.std_error
                          : std::numeric_limits<double>::infinity();
    row.mc_max_sigma = std::max(row.mc_max_sigma, sigma);
  }
  row.mc_pass = row.mc_max_sigma <= 3.0;
  return row;
}

std::string run_compare(const Opts& o, bool& all_pass) {
  std::vector<CompareRow> rows;
  ModelParams shown = o.scalar_params();
  if (!o.exact_json.empty()) {
    std::ifstream in(o.exact_json);
    if (!in) fail(Errc::InvalidArgument, "cannot open " + o.exact_json);
    ordered_json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      fail(Errc::InvalidArgument, std::string("bad exact json: ") + e.what());
    }
    const auto& jp = j.at("params");
    const ModelParams p =
        make_params(jp.at("N").get<int>(), jp.at("s").get<double>(),
                    jp.at("u").get<double>(), jp.at("nu0").get<double>());
    const std::vector<double> h = j.at("h").get<std::vector<double>>();
    if (h.size() != static_cast<std::size_t>(p.N) + 1)
      fail(Errc::InvalidArgument, "exact json h table has the wrong length");
    shown = p;
    rows.push_back(compare_row(p, h, o.replicas, o.seed));
  } else {
    if (o.n_min < 1 || o.n_max < o.n_min)
      fail(Errc::InvalidArgument, "need 1 <= n-min <= n-max");
    for (int N = o.n_min; N <= o.n_max; ++N) {
      const ModelParams p = make_params(N, o.s, o.u, o.nu0);
      rows.push_back(compare_row(p, h_table(p).h, o.replicas, o.seed));
    }
  }

  all_pass = true;
  for (const CompareRow& r : rows) all_pass = all_pass && r.ab_pass && r.mc_pass;

  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "compare";
    j["params"] = jparams(shown, false);
    j["replicas"] = o.replicas;
    j["seed"] = o.seed;
    j["rng_scheme"] = kRngSchemeId;
    ordered_json jr = ordered_json::array();
    for (const CompareRow& r : rows)
      jr.push_back(ordered_json{{"N", r.N},
                                {"ab_max_diff", jnum(r.ab_max_diff)},
                                {"ab_pass", r.ab_pass},
                                {"mc_max_sigma", jnum(r.mc_max_sigma)},
                                {"mc_pass", r.mc_pass}});
    j["rows"] = jr;
    j["pass"] = all_pass;
    return dump(j);
  }
  std::ostringstream os;
  os << "N,ab_max_diff,ab_pass,mc_max_sigma,mc_pass\n";
  for (const CompareRow& r : rows)
    os << r.N << ',' << fmt_double(r.ab_max_diff) << ',' << (r.ab_pass ? 1 : 0)
       << ',' << fmt_double(r.mc_max_sigma) << ',' << (r.mc_pass ? 1 : 0)
       << '\n';
  return os.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Errc::InvalidArgument, "cannot open output file " + path);
  out << text;
}

}  // namespace

int run(int argc, const char* const* argv) {
  Opts o;
  CLI::App app{"common-ancestor type distribution of the two-type Moran model"};
  app.require_subcommand(1);

  auto add_scalar_params = [&](CLI::App* sub) {
    sub->add_option("--s", o.s, "selection strength (>= 0)");
    sub->add_option("--u", o.u, "total mutation rate (>= 0)");
    sub->add_option("--nu0", o.nu0, "probability that a mutation yields type 0");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--N", o.N, "population size (>= 1)");
    add_scalar_params(sub);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", o.output, "write output to a file");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "master RNG seed");
  };

  CLI::App* c_derive = app.add_subcommand("derive", "derived constants");
  add_scalar_params(c_derive);
  add_format(c_derive);

  CLI::App* c_exact =
      app.add_subcommand("exact", "coefficients a_n and ancestor table h_k");
  add_params(c_exact);
  add_format(c_exact);

  CLI::App* c_limit = app.add_subcommand("limit", "large-population limit law");
  add_scalar_params(c_limit);
  add_format(c_limit);
  c_limit->add_option("--x", o.x, "initial type-0 frequency");
  c_limit->add_flag("--emit-grid", o.emit_grid, "emit an (x, h, density) grid");
  c_limit->add_option("--grid-points", o.grid_points, "grid resolution");

  CLI::App* c_stat = app.add_subcommand("stationary", "stationary laws");
  add_params(c_stat);
  add_format(c_stat);
  c_stat->add_option("--chain", o.chain, "which chain")
      ->check(CLI::IsMember({"moran", "ldasg", "asymptotic"}));
  c_stat->add_option("--truncation", o.truncation,
                     "state cap of the asymptotic chain (0 = automatic)");

  CLI::App* c_moran = app.add_subcommand("simulate-moran", "type-0 count path");
  add_params(c_moran);
  add_format(c_moran);
  add_seed(c_moran);
  c_moran->add_option("--k0", o.k0, "initial type-0 count");
  c_moran->add_option("--horizon", o.horizon, "simulated time span");

  CLI::App* c_asg = app.add_subcommand("simulate-asg", "ancestral selection graph");
  add_params(c_asg);
  add_format(c_asg);
  add_seed(c_asg);
  c_asg->add_option("--horizon", o.horizon, "backward time span");
  c_asg->add_option("--sample", o.sample, "sampled lines (default 1)");
  c_asg->add_flag("--keep-relocation", o.keep_relocation,
                  "log relocation arrows instead of skipping them");

  CLI::App* c_ld = app.add_subcommand("simulate-ldasg", "pruned lookdown ASG");
  add_params(c_ld);
  add_format(c_ld);
  add_seed(c_ld);
  c_ld->add_option("--horizon", o.horizon, "time span");
  c_ld->add_flag("--asymptotic", o.asymptotic,
                 "large-population chain instead of the N-particle one");
  c_ld->add_option("--event-cap", o.event_cap,
                   "abort threshold for the asymptotic simulator");

  CLI::App* c_mch = app.add_subcommand(
      "mc-h", "Monte Carlo estimates of h_k next to the exact value");
  add_params(c_mch);
  add_format(c_mch);
  add_seed(c_mch);
  c_mch->add_option("--k", o.k, "initial type-0 count");
  c_mch->add_option("--replicas", o.replicas, "Monte Carlo replicas");
  c_mch->add_option("--horizon", o.mc_horizon,
                    "ASG estimator horizon (default picked from u)");
  c_mch->add_option("--event-cap", o.event_cap,
                    "abort threshold per forward replica");

  CLI::App* c_rel = app.add_subcommand(
      "relevant", "relevant-line count tails against the coefficients a_n");
  add_params(c_rel);
  add_format(c_rel);
  add_seed(c_rel);
  c_rel->add_option("--horizon", o.horizon, "backward time span");
  c_rel->add_option("--replicas", o.replicas, "number of realisations");

  CLI::App* c_br = app.add_subcommand("branching", "two-type branching summary");
  add_scalar_params(c_br);
  add_format(c_br);

  CLI::App* c_ode = app.add_subcommand("ode", "deterministic frequency curve");
  add_scalar_params(c_ode);
  add_format(c_ode);
  c_ode->add_option("--z0", o.z0, "initial frequency");
  c_ode->add_option("--t-end", o.t_end, "integration span");
  c_ode->add_option("--dt", o.dt, "RK4 step");

  CLI::App* c_cmp = app.add_subcommand(
      "compare", "triple agreement of solver, lookdown tails and Monte Carlo");
  add_scalar_params(c_cmp);
  add_format(c_cmp);
  add_seed(c_cmp);
  c_cmp->add_option("--n-min", o.n_min, "smallest population size");
  c_cmp->add_option("--n-max", o.n_max, "largest population size");
  c_cmp->add_option("--replicas", o.replicas, "Monte Carlo replicas");
  c_cmp->add_option("--exact-json", o.exact_json,
                    "reuse an `exact --format json` output as the solver route");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: InvalidArgument: " << e.what() << '\n';
    return 1;
  }

  try {
    std::string text;
    bool compare_pass = true;
    if (*c_derive) text = run_derive(o);
    else if (*c_exact) text = run_exact(o);
    else if (*c_limit) text = run_limit(o);
    else if (*c_stat) text = run_stationary(o);
    else if (*c_moran) text = run_simulate_moran(o);
    else if (*c_asg) text = run_simulate_asg(o);
    else if (*c_ld) text = run_simulate_ldasg(o);
    else if (*c_mch) text = run_mc_h(o);
    else if (*c_rel) text = run_relevant(o);
    else if (*c_br) text = run_branching(o);
    else if (*c_ode) text = run_ode(o);
    else if (*c_cmp) text = run_compare(o, compare_pass);
    emit(text, o.output);
    if (!compare_pass)
      fail(Errc::InternalError, "triple agreement failed");
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << '\n';
    return errc_exit_category(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: InternalError: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ancestree::cli
