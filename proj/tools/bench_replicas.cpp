// Benchmark of the replica loop: the same estimator run with the worker count
// capped to 1 and uncapped, checking on the way that both produce identical
// estimates.  Usage: bench_replicas [replicas]
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "ancestree/asg.hpp"
#include "ancestree/ldasg.hpp"
#include "ancestree/parallel.hpp"
#include "ancestree/params.hpp"

namespace {

template <typename F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename F>
int report(const char* name, F&& run) {
  ancestree::EstimateResult serial, parallel;
  setenv("ANCESTREE_THREADS", "1", 1);
  const double ts = timed([&] { serial = run(); });
  unsetenv("ANCESTREE_THREADS");
  const double tp = timed([&] { parallel = run(); });
  std::printf("%-20s serial %7.3fs   %d workers %7.3fs   speedup %5.2fx\n",
              name, ts, ancestree::par::worker_count(), tp, ts / tp);
  if (serial.estimate != parallel.estimate ||
      serial.std_error != parallel.std_error) {
    std::printf("MISMATCH: serial and parallel estimates differ\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::int64_t replicas = argc > 1 ? std::atoll(argv[1]) : 50'000;
  const auto p = ancestree::make_params(20, 1.0, 1.0, 0.5);
  std::printf("replicas=%lld\n", static_cast<long long>(replicas));

  int rc = 0;
  rc |= report("estimate_h_forward", [&] {
    return ancestree::estimate_h_forward(p, 10, replicas, 7);
  });
  rc |= report("representative_type", [&] {
    return ancestree::representative_type(p, 0.5, 50.0, replicas, 7, true);
  });
  return rc;
}
