#include "ancestree/params.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ancestree/errors.hpp"

namespace ancestree {

void ModelParams::validate() const {
  if (N < 1) fail(Errc::InvalidArgument, "N must be at least 1, got " + std::to_string(N));
  if (!(s >= 0.0) || !std::isfinite(s))
    fail(Errc::InvalidArgument, "s must be finite and nonnegative");
  if (!(u >= 0.0) || !std::isfinite(u))
    fail(Errc::InvalidArgument, "u must be finite and nonnegative");
  if (!(nu0 >= 0.0 && nu0 <= 1.0))
    fail(Errc::InvalidArgument, "nu0 must lie in [0, 1]");
  if (!(nu1 >= 0.0 && nu1 <= 1.0) || std::abs(nu0 + nu1 - 1.0) > 1e-12)
    fail(Errc::InvalidArgument, "nu0 + nu1 must equal 1");
}

ModelParams make_params(int N, double s, double u, double nu0) {
  ModelParams p;
  p.N = N;
  p.s = s;
  p.u = u;
  p.nu0 = nu0;
  p.nu1 = 1.0 - nu0;
  p.validate();
  return p;
}

DerivedConstants derive(const ModelParams& p) {
  p.validate();
  if (p.s + p.u <= 0.0)
    fail(Errc::InvalidArgument, "derive requires s + u > 0");

  const double s = p.s, u = p.u, nu0 = p.nu0, nu1 = p.nu1;
  DerivedConstants d{};
  d.delta = (s - u) * (s - u) + 4.0 * s * u * nu0;
  const double root = std::sqrt(d.delta);

  // Pick the algebraically equivalent form without cancellation: the direct
  // quadratic expression when s >= u, the rationalized one when s < u.
  if (s == 0.0) {
    d.x_plus = nu0;
  } else if (s >= u) {
    d.x_plus = (s - u + root) / (2.0 * s);
  } else {
    d.x_plus = 2.0 * u * nu0 / ((u - s) + root);
  }

  // ell_minus = (s + u - root) / (2 u nu1) rationalizes to a cancellation-free
  // quotient; it degenerates cleanly to 0 at s = 0 and to 1 at u nu1 = 0.
  d.ell_minus = (s == 0.0) ? 0.0 : 2.0 * s / (s + u + root);
  d.ell_plus = (u * nu1 > 0.0) ? (s + u + root) / (2.0 * u * nu1)
                               : std::numeric_limits<double>::infinity();
  return d;
}

}  // namespace ancestree
