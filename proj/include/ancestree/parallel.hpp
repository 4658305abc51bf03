// Replica-parallel driver for the Monte Carlo estimators.  Replica bodies
// draw from their own (seed, replica) substream and write only to
// replica-indexed slots, so the OpenMP driver and the serial reference
// produce bit-identical results; merging is done sequentially by the caller.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ancestree::par {

// Worker count for the OpenMP driver.  ANCESTREE_THREADS, when set to a
// positive integer, caps the OpenMP default.
inline int worker_count() {
  int n = 1;
#if defined(_OPENMP)
  n = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("ANCESTREE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v < n) n = static_cast<int>(v);
  }
  return n < 1 ? 1 : n;
}

template <class Body>
void for_each_replica_serial(std::int64_t replicas, Body&& body) {
  for (std::int64_t r = 0; r < replicas; ++r) body(r);
}

template <class Body>
void for_each_replica(std::int64_t replicas, Body&& body) {
#if defined(_OPENMP)
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static) num_threads(par::worker_count())
  for (std::int64_t r = 0; r < replicas; ++r) {
    try {
      body(r);
    } catch (...) {
#pragma omp critical(ancestree_par_error)
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  for_each_replica_serial(replicas, std::forward<Body>(body));
#endif
}

}  // namespace ancestree::par
