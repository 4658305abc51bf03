// Counter-based random number generator for reproducible parallel Monte
// Carlo.  Philox4x64-10: each (seed, replica) pair addresses an independent
// substream, and outputs do not depend on thread count or call interleaving
// across replicas.  Verified against an independent implementation; see
// tests/test_rng.cpp for the frozen known-answer vectors.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ancestree {

inline constexpr const char* kRngSchemeId = "philox4x64-10";

class Philox4x64 {
 public:
  Philox4x64(std::uint64_t seed, std::uint64_t replica)
      : key_{seed, 0}, counter_{0, 0, replica, 0}, pos_(4) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      // The counter advances before the block is produced, with the same
      // carry chain as the reference implementation.
      if (++counter_[0] == 0) ++counter_[1];
      buffer_ = block(key_, counter_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  // Uniform on the open interval (0, 1): safe for log().
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Inverse-CDF exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // Unbiased uniform on {0, ..., n-1} (Lemire multiply-shift rejection).
  std::uint64_t uniform_below(std::uint64_t n) {
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = -n % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double prob) { return uniform01() < prob; }

  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 2> key,
                                            std::array<std::uint64_t, 4> ctr) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B97F4A7C15ULL;  // Weyl constants
        key[1] += 0xBB67AE8584CAA73BULL;
      }
      std::uint64_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2E7470EE14C6C93ULL, ctr[0], hi0, lo0);
      mulhilo(0xCA5A826395121157ULL, ctr[2], hi1, lo1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    const auto p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buffer_{};
  int pos_;
};

}  // namespace ancestree
