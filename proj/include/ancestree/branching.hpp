// The two-type branching process attached to the deterministic limit: mean
// matrix, Perron eigen-structure, and the ancestral-distribution identities
// tying it to the limit law h.
#pragma once

#include <array>

#include "ancestree/params.hpp"

namespace ancestree {

struct BranchingSummary {
  std::array<std::array<double, 2>, 2> mean_matrix;  // A
  double lambda_plus;                                // Perron eigenvalue
  std::array<double, 2> pi;                          // left eigenvector, sums to 1
  std::array<double, 2> hbar;                        // right eigenvector, pi.hbar = 1
  std::array<double, 2> alpha;                       // ancestral distribution
};

// Closed forms: A = [[1+s-u nu1, u nu1], [u nu0, 1-u nu0]],
// lambda_plus = 1 + s x_plus, pi = (x_plus, 1-x_plus),
// hbar = (u nu0 + s x_plus, u nu0) / (u nu0 + s x_plus^2),
// alpha_i = hbar_i pi_i.  Requires s > 0 and u > 0.
BranchingSummary branching_summary(const ModelParams& p);

// Residuals of the two independent identities for hbar_0:
//   first  = |hbar_0 - (Delta + (s+u) sqrt(Delta)) / (2 Delta)|
//   second = |hbar_0 - limit_h(x_plus) / x_plus|
struct RatadResiduals {
  double first;
  double second;
};
RatadResiduals check_ratad(const ModelParams& p);

}  // namespace ancestree
