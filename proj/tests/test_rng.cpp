#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdint>
#include <vector>

#include "ancestree/rng.hpp"

using ancestree::Philox4x64;

namespace {

// Known-answer vectors generated with numpy 2.2.6:
//   np.random.Philox(key=[seed, 0], counter=[0, 0, replica, 0]).random_raw(8)
struct Kat {
  std::uint64_t seed;
  std::uint64_t replica;
  std::array<std::uint64_t, 8> words;
};

const Kat kKats[] = {
    {0x0ULL,
     0x0ULL,
     {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
      0x907d7a052fd5b4dcULL, 0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
      0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL}},
    {0x2aULL,
     0x0ULL,
     {0xd1f8817d4d62880eULL, 0x307266b65cc8797eULL, 0xde1f04e7f084ed03ULL,
      0x65034a8e78cd1e59ULL, 0x5e3daa8961c3e3d3ULL, 0x6f37dea4a04bd05cULL,
      0x31d3a1ae26e190b9ULL, 0x0fef7fae0ab2a01aULL}},
    {0x2aULL,
     0x7ULL,
     {0x2bfb9d635be188e2ULL, 0x2b0049f790afff84ULL, 0x1479a84f09f8426dULL,
      0xf188dde28ec79dc1ULL, 0xc8372fc2e316f82dULL, 0x2d55ddf24a0b6a16ULL,
      0xd601dc0aefe55811ULL, 0xe2f482cc8f8f1995ULL}},
    {0xffffffffffffffffULL,
     0xffffffffffffffffULL,
     {0x6e1875262d932169ULL, 0x318567ff80144f63ULL, 0xcb7f7c63eade6fb2ULL,
      0x3b1f4215acbfc86fULL, 0x9d2407874b63d62bULL, 0x0200067d141a340fULL,
      0x5555477bf26b5ddeULL, 0x8b3b99f24732a149ULL}},
    {0x123456789abcdef0ULL,
     0x3ULL,
     {0x47ac81f36b733f1eULL, 0xee877947159779acULL, 0x19dd2251ec6adbb6ULL,
      0xc09a7492179174f5ULL, 0xf52287507d54e200ULL, 0x66b3afe71318e514ULL,
      0x919be1c002022751ULL, 0x49c0e3c557fd558bULL}},
};

}  // namespace

TEST_CASE("known answer vectors") {
  for (const Kat& kat : kKats) {
    CAPTURE(kat.seed);
    CAPTURE(kat.replica);
    Philox4x64 rng(kat.seed, kat.replica);
    for (std::uint64_t expected : kat.words) CHECK(rng.next_u64() == expected);
  }
}

TEST_CASE("streams are deterministic and replica-disjoint") {
  Philox4x64 a(42, 1), b(42, 1), c(42, 2);
  bool all_equal = true, any_equal_across = false;
  for (int i = 0; i < 256; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_equal_across = any_equal_across || va == c.next_u64();
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_across);
}

TEST_CASE("uniform01 stays inside the open unit interval") {
  Philox4x64 rng(7, 0);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.uniform01();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_below is in range and roughly uniform") {
  Philox4x64 rng(3, 5);
  std::vector<int> counts(7, 0);
  const int n = 140000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng.uniform_below(7);
    REQUIRE(v < 7);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
}

TEST_CASE("exponential draws are positive with the right mean") {
  Philox4x64 rng(11, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.exponential(4.0);
    CHECK(v > 0.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.02));
}
