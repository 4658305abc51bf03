#include "ancestree/branching.hpp"

#include <cmath>

#include "ancestree/coeffs.hpp"
#include "ancestree/errors.hpp"

namespace ancestree {

BranchingSummary branching_summary(const ModelParams& p) {
  p.validate();
  if (!(p.s > 0.0))
    fail(Errc::SelectionRequired, "branching summary requires s > 0");
  if (!(p.u > 0.0))
    fail(Errc::MutationRequired, "branching summary requires u > 0");

  const double x = derive(p).x_plus;
  BranchingSummary b;
  b.mean_matrix = {{{1.0 + p.s - p.u * p.nu1, p.u * p.nu1},
                    {p.u * p.nu0, 1.0 - p.u * p.nu0}}};
  b.lambda_plus = 1.0 + p.s * x;
  b.pi = {x, 1.0 - x};
  // Right eigenvector scaled so that pi . hbar = 1 exactly.
  const double scale = p.u * p.nu0 + p.s * x * x;
  b.hbar = {(p.u * p.nu0 + p.s * x) / scale, p.u * p.nu0 / scale};
  b.alpha = {b.hbar[0] * b.pi[0], b.hbar[1] * b.pi[1]};
  return b;
}

RatadResiduals check_ratad(const ModelParams& p) {
  const BranchingSummary b = branching_summary(p);
  const DerivedConstants d = derive(p);
  const double sq = std::sqrt(d.delta);
  const double closed = (d.delta + (p.s + p.u) * sq) / (2.0 * d.delta);
  return RatadResiduals{std::abs(b.hbar[0] - closed),
                        std::abs(b.hbar[0] - limit_h(p, d.x_plus) / d.x_plus)};
}

}  // namespace ancestree
