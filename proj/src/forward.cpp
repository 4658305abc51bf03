#include "ancestree/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ancestree/errors.hpp"
#include "ancestree/rng.hpp"

namespace ancestree {

double total_variation(const Pmf& a, const Pmf& b) {
  const int lo = std::min(a.min_state, b.min_state);
  const int hi = std::max(a.max_state(), b.max_state());
  double sum = 0.0;
  for (int k = lo; k <= hi; ++k) sum += std::abs(a.at(k) - b.at(k));
  return 0.5 * sum;
}

BirthDeathRates moran_rates(const ModelParams& p) {
  p.validate();
  const int N = p.N;
  BirthDeathRates r;
  r.lambda.assign(N + 1, 0.0);
  r.mu.assign(N + 1, 0.0);
  for (int k = 0; k <= N; ++k) {
    r.lambda[k] = k * (N - k) * (1.0 + p.s) / N + (N - k) * p.u * p.nu0;
    r.mu[k] = k * (N - k) * 1.0 / N + k * p.u * p.nu1;
  }
  return r;
}

Pmf stationary_moran(const ModelParams& p) {
  p.validate();
  if (p.u <= 0.0)
    fail(Errc::MutationRequired, "stationary_moran requires u > 0");
  const int N = p.N;
  Pmf pi;
  pi.min_state = 0;
  pi.prob.assign(N + 1, 0.0);
  // One-way mutation pins the chain to the absorbing boundary.
  if (p.nu0 == 0.0) {
    pi.prob[0] = 1.0;
    return pi;
  }
  if (p.nu1 == 0.0) {
    pi.prob[N] = 1.0;
    return pi;
  }
  // Detailed balance in log space: log w_k = sum log(lambda_{i-1} / mu_i).
  const BirthDeathRates r = moran_rates(p);
  std::vector<double> logw(N + 1, 0.0);
  for (int k = 1; k <= N; ++k)
    logw[k] = logw[k - 1] + std::log(r.lambda[k - 1]) - std::log(r.mu[k]);
  const double m = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (int k = 0; k <= N; ++k) z += std::exp(logw[k] - m);
  for (int k = 0; k <= N; ++k) pi.prob[k] = std::exp(logw[k] - m) / z;
  return pi;
}

Trajectory simulate_moran(const ModelParams& p, int k0, double horizon,
                          std::uint64_t seed) {
  p.validate();
  if (k0 < 0 || k0 > p.N)
    fail(Errc::InvalidArgument, "initial count k0 out of [0, N]");
  if (!(horizon > 0.0))
    fail(Errc::InvalidArgument, "horizon must be positive");

  const BirthDeathRates r = moran_rates(p);
  Philox4x64 rng(seed, 0);
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(k0);

  int k = k0;
  double t = 0.0;
  for (;;) {
    const double total = r.lambda[k] + r.mu[k];
    if (total <= 0.0) break;  // absorbed (only possible when u = 0)
    t += rng.exponential(total);
    if (t > horizon) break;
    k += (rng.uniform01() * total < r.lambda[k]) ? 1 : -1;
    traj.times.push_back(t);
    traj.states.push_back(k);
  }
  return traj;
}

Trajectory ode_solve(const ModelParams& p, double z0, double t_end, double dt) {
  p.validate();
  if (!(z0 >= 0.0 && z0 <= 1.0))
    fail(Errc::InvalidArgument, "z0 must lie in [0, 1]");
  if (!(t_end >= 0.0)) fail(Errc::InvalidArgument, "t_end must be nonnegative");
  if (!(dt > 0.0)) fail(Errc::InvalidArgument, "dt must be positive");
  const double dt_max = 0.1 / (1.0 + p.s + p.u);
  if (dt > dt_max)
    fail(Errc::StepTooLarge, "dt exceeds the stability bound 0.1/(1+s+u) = " +
                                 std::to_string(dt_max));

  const auto f = [&](double z) {
    return p.s * z * (1.0 - z) + p.u * (p.nu0 - z);
  };

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(z0);
  double z = z0, t = 0.0;
  while (t < t_end) {
    const double h = std::min(dt, t_end - t);
    const double k1 = f(z);
    const double k2 = f(z + 0.5 * h * k1);
    const double k3 = f(z + 0.5 * h * k2);
    const double k4 = f(z + h * k3);
    z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    z = std::clamp(z, 0.0, 1.0);
    t += h;
    traj.times.push_back(t);
    traj.states.push_back(z);
  }
  return traj;
}

}  // namespace ancestree
