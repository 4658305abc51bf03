// Ancestor-decomposition coefficients a_n^N, the common-ancestor type
// distribution h_k^N built from them, the inverse map h -> a, the law of the
// stationary line count they encode, the no-mutation closed form, and the
// large-population limit objects h(x), its density, and ell_minus^n.
#pragma once

#include <gmpxx.h>

#include <vector>

#include "ancestree/params.hpp"
#include "ancestree/types.hpp"

namespace ancestree {

// Coefficients a_0..a_{N-1}; a_0 = 1 and a_n = P(L_N > n) for the stationary
// line count L_N, so the sequence is nonincreasing in [0, 1].
struct CoefficientVector {
  int N = 0;
  std::vector<double> a;
};

// h[k] = probability the common ancestor has type 0 given k type-0
// individuals among N; h[0] = 0 and h[N] = 1.
struct AncestorTable {
  int N = 0;
  std::vector<double> h;
};

// Law of the stationary line count on {1..N}: rho[n-1] = P(L_N = n).
struct LnPmf {
  int N = 0;
  std::vector<double> rho;

  // P(L_N > n) = sum of rho beyond n; equals a_n by construction.
  double tail(int n) const;
};

// Solves the tridiagonal coefficient system.  Row 0 pins a_0 = 1; row
// n in [1..N-1] encodes the n-th balance equation with
//   b_n = -(N-n)s/N,  d_n = (n+1)/N + (N-n)s/N + u,  c_n = -(n+1)/N - u nu1
// and c_{N-1} = 0.  The matrix is strictly diagonally dominant with margin
// u nu0, so the Thomas algorithm needs no pivoting.  Errors: UseClosedForm
// when u = 0 and s > 0 (use h_no_mutation); s = 0 yields a = (1, 0, ..., 0).
CoefficientVector solve_coefficients(const ModelParams& p);

// h_k^N = (k/N) * sum_{n=0}^{N-k} a_n * prod_{j=0}^{n-1} (N-k-j)/(N-1-j).
AncestorTable h_table(const ModelParams& p);
AncestorTable h_from_coefficients(const CoefficientVector& a);

// Inverse of h_table:
//   a_{N-l} = sum_{k=l}^{N} (-1)^{k+l} C(k-1, l-1) C(N, k) h_k.
// For N <= 64 the sum is evaluated in exact rational arithmetic on the
// binary values of h (never throws).  For larger N it is evaluated in
// 256-bit floats and PrecisionLoss is raised when the input rounding noise,
// amplified by the alternating binomial sum, exceeds 1e-6.
CoefficientVector invert_h(const AncestorTable& h, int N);

// rho_n = a_{n-1} - a_n (rho_N = a_{N-1}).  NotMonotone if a is not a valid
// nonincreasing tail sequence.
LnPmf ln_distribution(const CoefficientVector& a);

// No-mutation closed form h_k^N = (1-(1+s)^{-k}) / (1-(1+s)^{-N}), the CDF
// of a geometric(s/(1+s)) variable conditioned to be at most N.  Requires
// s > 0 (SelectionRequired).
double h_no_mutation(int N, double s, int k);

// Large-population limit h(x) = x / (1 - ell_minus (1 - x)) and its density
// (1 - ell_minus) / (1 - ell_minus (1 - x))^2 at x in [0, 1].
double limit_h(const ModelParams& p, double x);
double limit_density(const ModelParams& p, double x);

// Limit of a_n^N as N grows: ell_minus^n.
double limit_coefficient(const ModelParams& p, int n);

// Exact rational route used by the inversion round-trip tests: the same
// three maps evaluated end to end in mpq arithmetic.
std::vector<mpq_class> solve_coefficients_exact(int N, const mpq_class& s,
                                                const mpq_class& u,
                                                const mpq_class& nu0);
std::vector<mpq_class> h_table_exact(int N, const std::vector<mpq_class>& a);
std::vector<mpq_class> invert_h_exact(int N, const std::vector<mpq_class>& h);

}  // namespace ancestree
