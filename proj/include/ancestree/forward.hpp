// Forward-in-time objects: birth-death rates of the type-0 count, its
// stationary law, a Gillespie simulator, and the deterministic frequency ODE.
#pragma once

#include <cstdint>
#include <vector>

#include "ancestree/params.hpp"
#include "ancestree/types.hpp"

namespace ancestree {

// lambda[k] / mu[k] are the up/down rates of a birth-death chain; entries
// outside the chain's state range are zero.
struct BirthDeathRates {
  std::vector<double> lambda;
  std::vector<double> mu;
};

// Rates of the type-0 count K on states 0..N:
//   lambda_k = k (N - k)(1 + s)/N + (N - k) u nu0
//   mu_k     = k (N - k)/N        + k u nu1
BirthDeathRates moran_rates(const ModelParams& p);

// Stationary law of the type-0 count.  Requires u > 0 (MutationRequired
// otherwise: without mutation the boundaries absorb).  When nu0 or nu1 is
// zero the law degenerates to the corresponding boundary point mass.
Pmf stationary_moran(const ModelParams& p);

// Gillespie simulation of the type-0 count from k0 over [0, horizon].
Trajectory simulate_moran(const ModelParams& p, int k0, double horizon,
                          std::uint64_t seed);

// Classical RK4 with fixed step dt for z' = s z (1 - z) + u (nu0 - z).
// Requires dt <= 0.1 / (1 + s + u) (StepTooLarge otherwise); the state is
// clamped to [0, 1] after every step.
Trajectory ode_solve(const ModelParams& p, double z0, double t_end, double dt);

}  // namespace ancestree
