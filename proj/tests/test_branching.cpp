#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ancestree/branching.hpp"
#include "ancestree/coeffs.hpp"
#include "ancestree/errors.hpp"
#include "ancestree/params.hpp"
#include "ancestree/rng.hpp"

using namespace ancestree;

TEST_CASE("baseline eigen-structure") {
  const ModelParams p = make_params(2, 1, 1, 0.5);
  const BranchingSummary b = branching_summary(p);
  const double r2 = std::sqrt(2.0);
  CHECK(b.mean_matrix[0][0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(b.mean_matrix[0][1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.mean_matrix[1][0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.mean_matrix[1][1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.lambda_plus == doctest::Approx(1.0 + r2 / 2).epsilon(1e-14));
  CHECK(b.pi[0] == doctest::Approx(r2 / 2).epsilon(1e-14));
  CHECK(b.pi[1] == doctest::Approx(1.0 - r2 / 2).epsilon(1e-14));
  CHECK(b.hbar[0] == doctest::Approx((1.0 + r2) / 2).epsilon(1e-14));
  CHECK(b.alpha[0] == doctest::Approx((2.0 + r2) / 4).epsilon(1e-14));
  CHECK(b.alpha[1] == doctest::Approx(1.0 - (2.0 + r2) / 4).epsilon(1e-14));
  const RatadResiduals res = check_ratad(p);
  CHECK(res.first < 1e-12);
  CHECK(res.second < 1e-12);
}

TEST_CASE("eigen identities over random parameters") {
  Philox4x64 rng(61, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const ModelParams p = make_params(2, 0.01 + 3 * rng.uniform01(),
                                      0.01 + 3 * rng.uniform01(),
                                      rng.uniform01());
    const BranchingSummary b = branching_summary(p);
    const auto& A = b.mean_matrix;
    const double lp = b.lambda_plus;

    // Left eigenvector: pi A = lambda_plus pi.
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(b.pi[0] * A[0][j] + b.pi[1] * A[1][j] - lp * b.pi[j]) <
            1e-10);
    // Right eigenvector: A hbar = lambda_plus hbar.
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(A[i][0] * b.hbar[0] + A[i][1] * b.hbar[1] -
                     lp * b.hbar[i]) < 1e-10);
    // Normalizations.
    CHECK(std::abs(b.pi[0] + b.pi[1] - 1.0) < 1e-14);
    CHECK(std::abs(b.pi[0] * b.hbar[0] + b.pi[1] * b.hbar[1] - 1.0) < 1e-14);
    CHECK(std::abs(b.alpha[0] + b.alpha[1] - 1.0) < 1e-12);
    CHECK(b.alpha[0] == doctest::Approx(b.hbar[0] * b.pi[0]).epsilon(1e-14));

    // lambda_plus is the larger root of the characteristic polynomial.
    const double tr = A[0][0] + A[1][1];
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    CHECK(std::abs(lp * lp - tr * lp + det) < 1e-10);
    CHECK(lp >= tr / 2 - 1e-14);

    // The ancestral weight of type 0 is the limit curve at the equilibrium.
    CHECK(std::abs(b.alpha[0] - limit_h(p, derive(p).x_plus)) < 1e-12);

    const RatadResiduals res = check_ratad(p);
    CHECK(res.first < 1e-10);
    CHECK(res.second < 1e-10);
  }
}

TEST_CASE("weak selection sends the size bias to one") {
  double prev = 1.0;
  for (double s : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const BranchingSummary b = branching_summary(make_params(2, s, 1, 0.5));
    const double gap = std::abs(b.hbar[0] - 1.0);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("rejections") {
  try {
    branching_summary(make_params(2, 0, 1, 0.5));
    FAIL("expected SelectionRequired");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SelectionRequired);
  }
  try {
    branching_summary(make_params(2, 1, 0, 0.5));
    FAIL("expected MutationRequired");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MutationRequired);
  }
  CHECK_THROWS_AS(check_ratad(make_params(2, 0, 1, 0.5)), Error);
}
