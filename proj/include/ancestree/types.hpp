// Small value types shared across modules.
#pragma once

#include <cstdint>
#include <vector>

#include "ancestree/errors.hpp"

namespace ancestree {

// Probability mass function on the integer range
// [min_state .. min_state + prob.size() - 1].
struct Pmf {
  int min_state = 0;
  std::vector<double> prob;

  int max_state() const { return min_state + static_cast<int>(prob.size()) - 1; }

  double at(int state) const {
    if (state < min_state || state > max_state()) return 0.0;
    return prob[static_cast<std::size_t>(state - min_state)];
  }
};

// Piecewise-constant sample path (jump chains) or solution grid (ODE).
struct Trajectory {
  std::vector<double> times;
  std::vector<double> states;
};

// Monte Carlo estimate with its standard error.
struct EstimateResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t replicas = 0;
};

// Total variation distance between two pmfs (supports may differ).
double total_variation(const Pmf& a, const Pmf& b);

}  // namespace ancestree
