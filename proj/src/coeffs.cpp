#include "ancestree/coeffs.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ancestree/errors.hpp"

namespace ancestree {
namespace {

// Thomas solve of the coefficient system over T (double or mpq_class).
// Row 0 pins a_0 = 1; row n in [1..N-1] couples a_{n-1}, a_n, a_{n+1} with
//   sub_n  = -(N-n) s / N
//   diag_n = (n+1)/N + (N-n) s / N + u
//   sup_n  = -(n+1)/N - u nu1      (dropped at n = N-1)
// The eliminated diagonal stays >= (n+1)/N + u nu0 > 0 (diagonal dominance
// with margin u nu0, and the (n+1)/N term keeps it positive even at u = 0),
// so no pivoting is needed.
template <typename T>
std::vector<T> solve_tridiagonal(int N, const T& s, const T& u, const T& nu1) {
  std::vector<T> a(static_cast<std::size_t>(N));
  a[0] = T(1);
  if (N == 1) return a;

  const T TN = T(N);
  std::vector<T> cp(static_cast<std::size_t>(N), T(0));  // modified superdiagonal
  std::vector<T> rp(static_cast<std::size_t>(N), T(0));  // modified rhs
  rp[0] = T(1);
  for (int n = 1; n < N; ++n) {
    const T sub = -(T(N - n) * s) / TN;
    const T diag = T(n + 1) / TN + (T(N - n) * s) / TN + u;
    const T m = diag - sub * cp[n - 1];
    if (n < N - 1) cp[n] = (-(T(n + 1) / TN) - u * nu1) / m;
    rp[n] = (-sub * rp[n - 1]) / m;
  }
  a[N - 1] = rp[N - 1];
  for (int n = N - 2; n >= 1; --n) a[n] = rp[n] - cp[n] * a[n + 1];
  return a;
}

// h_k = (k/N) sum_{n=0}^{N-k} a_n prod_{j=0}^{n-1} (N-k-j)/(N-1-j), with the
// product accumulated incrementally.
template <typename T>
std::vector<T> h_from_a(int N, const std::vector<T>& a) {
  std::vector<T> h(static_cast<std::size_t>(N) + 1, T(0));
  for (int k = 1; k <= N; ++k) {
    T term = T(1);
    T sum = a[0];
    for (int n = 1; n <= N - k; ++n) {
      term = term * T(N - k - n + 1) / T(N - n);
      sum = sum + a[n] * term;
    }
    h[k] = T(k) * sum / T(N);
  }
  return h;
}

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

void check_h_shape(const AncestorTable& h, int N) {
  if (N < 1) fail(Errc::InvalidArgument, "invert_h requires N >= 1");
  if (h.N != N || h.h.size() != static_cast<std::size_t>(N) + 1)
    fail(Errc::InvalidArgument, "ancestor table size does not match N");
}

}  // namespace

double LnPmf::tail(int n) const {
  double t = 0.0;
  for (int m = n + 1; m <= N; ++m) t += rho[m - 1];
  return t;
}

CoefficientVector solve_coefficients(const ModelParams& p) {
  p.validate();
  if (p.u == 0.0 && p.s > 0.0)
    fail(Errc::UseClosedForm,
         "coefficient system degenerates at u = 0, s > 0; use h_no_mutation");
  CoefficientVector out;
  out.N = p.N;
  out.a = solve_tridiagonal<double>(p.N, p.s, p.u, p.nu1);
  return out;
}

AncestorTable h_from_coefficients(const CoefficientVector& a) {
  if (a.N < 1 || a.a.size() != static_cast<std::size_t>(a.N))
    fail(Errc::InvalidArgument, "coefficient vector size does not match N");
  AncestorTable out;
  out.N = a.N;
  // Accumulate in extended precision: the inverse map amplifies the stored
  // table's rounding by large binomial weight sums, so each entry must be
  // correctly rounded for the round trip to stay near 1e-9 at N = 20.
  const std::vector<long double> ax(a.a.begin(), a.a.end());
  const std::vector<long double> hx = h_from_a<long double>(a.N, ax);
  out.h.assign(hx.begin(), hx.end());
  return out;
}

AncestorTable h_table(const ModelParams& p) {
  return h_from_coefficients(solve_coefficients(p));
}

CoefficientVector invert_h(const AncestorTable& h, int N) {
  check_h_shape(h, N);
  CoefficientVector out;
  out.N = N;
  out.a.assign(static_cast<std::size_t>(N), 0.0);

  if (N <= 64) {
    // Exact path: the doubles in h are binary rationals, so the alternating
    // binomial sum can be evaluated without any rounding at all.
    std::vector<mpq_class> hq(h.h.begin(), h.h.end());
    for (int l = 1; l <= N; ++l) {
      mpq_class sum = 0;
      for (int k = l; k <= N; ++k) {
        const mpq_class term = mpq_class(binom(k - 1, l - 1) * binom(N, k)) * hq[k];
        if ((k + l) % 2 == 0)
          sum += term;
        else
          sum -= term;
      }
      out.a[N - l] = sum.get_d();
    }
    return out;
  }

  // 256-bit floating path with an explicit conditioning guard: the input
  // table carries relative rounding noise ~2^-52 per entry, which the
  // alternating sum amplifies by the sum of absolute terms.
  constexpr double kInputUlp = 0x1.0p-52;
  constexpr double kErrorBudget = 1e-6;
  for (int l = 1; l <= N; ++l) {
    mpf_class sum(0, 256), abs_sum(0, 256);
    for (int k = l; k <= N; ++k) {
      mpf_class term(binom(k - 1, l - 1) * binom(N, k), 256);
      term *= mpf_class(h.h[k], 256);
      abs_sum += abs(term);
      if ((k + l) % 2 == 0)
        sum += term;
      else
        sum -= term;
    }
    const double noise = abs_sum.get_d() * kInputUlp;
    if (noise > kErrorBudget)
      fail(Errc::PrecisionLoss,
           "inversion amplifies input rounding to ~" + std::to_string(noise) +
               " at coefficient " + std::to_string(N - l));
    out.a[N - l] = sum.get_d();
  }
  return out;
}

LnPmf ln_distribution(const CoefficientVector& a) {
  const int N = a.N;
  if (N < 1 || a.a.size() != static_cast<std::size_t>(N))
    fail(Errc::InvalidArgument, "coefficient vector size does not match N");
  if (std::abs(a.a[0] - 1.0) > 1e-12)
    fail(Errc::InvalidArgument, "coefficient vector must start at a_0 = 1");
  constexpr double kSlack = 1e-13;
  for (int n = 1; n < N; ++n)
    if (a.a[n] > a.a[n - 1] + kSlack || a.a[n] < -kSlack)
      fail(Errc::NotMonotone, "coefficients are not a nonincreasing tail "
                              "sequence at n = " + std::to_string(n));
  if (N > 1 && a.a[N - 1] < -kSlack)
    fail(Errc::NotMonotone, "negative terminal coefficient");

  LnPmf out;
  out.N = N;
  out.rho.assign(static_cast<std::size_t>(N), 0.0);
  for (int n = 1; n < N; ++n)
    out.rho[n - 1] = std::max(0.0, a.a[n - 1] - a.a[n]);
  out.rho[N - 1] = std::max(0.0, a.a[N - 1]);
  return out;
}

double h_no_mutation(int N, double s, int k) {
  if (N < 1) fail(Errc::InvalidArgument, "N must be at least 1");
  if (k < 0 || k > N) fail(Errc::InvalidArgument, "k out of [0, N]");
  if (!(s > 0.0))
    fail(Errc::SelectionRequired, "h_no_mutation requires s > 0");
  // (1 - (1+s)^{-k}) / (1 - (1+s)^{-N}) written with expm1/log1p so small s
  // does not cancel.
  const double log1ps = std::log1p(s);
  return std::expm1(-k * log1ps) / std::expm1(-N * log1ps);
}

double limit_h(const ModelParams& p, double x) {
  if (!(x >= 0.0 && x <= 1.0)) fail(Errc::InvalidArgument, "x out of [0, 1]");
  const double ell = derive(p).ell_minus;
  return x / (1.0 - ell * (1.0 - x));
}

double limit_density(const ModelParams& p, double x) {
  if (!(x >= 0.0 && x <= 1.0)) fail(Errc::InvalidArgument, "x out of [0, 1]");
  const double ell = derive(p).ell_minus;
  const double denom = 1.0 - ell * (1.0 - x);
  return (1.0 - ell) / (denom * denom);
}

double limit_coefficient(const ModelParams& p, int n) {
  if (n < 0) fail(Errc::InvalidArgument, "n must be nonnegative");
  return std::pow(derive(p).ell_minus, n);
}

std::vector<mpq_class> solve_coefficients_exact(int N, const mpq_class& s,
                                                const mpq_class& u,
                                                const mpq_class& nu0) {
  if (N < 1) fail(Errc::InvalidArgument, "N must be at least 1");
  if (s < 0 || u < 0 || nu0 < 0 || nu0 > 1)
    fail(Errc::InvalidArgument, "parameters out of range");
  if (u == 0 && s > 0)
    fail(Errc::UseClosedForm,
         "coefficient system degenerates at u = 0, s > 0; use h_no_mutation");
  const mpq_class nu1 = mpq_class(1) - nu0;
  return solve_tridiagonal<mpq_class>(N, s, u, nu1);
}

std::vector<mpq_class> h_table_exact(int N, const std::vector<mpq_class>& a) {
  if (N < 1 || a.size() != static_cast<std::size_t>(N))
    fail(Errc::InvalidArgument, "coefficient vector size does not match N");
  return h_from_a<mpq_class>(N, a);
}

std::vector<mpq_class> invert_h_exact(int N, const std::vector<mpq_class>& h) {
  if (N < 1 || h.size() != static_cast<std::size_t>(N) + 1)
    fail(Errc::InvalidArgument, "ancestor table size does not match N");
  std::vector<mpq_class> a(static_cast<std::size_t>(N));
  for (int l = 1; l <= N; ++l) {
    mpq_class sum = 0;
    for (int k = l; k <= N; ++k) {
      const mpq_class term = mpq_class(binom(k - 1, l - 1) * binom(N, k)) * h[k];
      if ((k + l) % 2 == 0)
        sum += term;
      else
        sum -= term;
    }
    a[N - l] = sum;
  }
  return a;
}

}  // namespace ancestree
