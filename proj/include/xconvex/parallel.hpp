#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace xconvex {

// Worker count for data-parallel scans. Honors the XCONVEX_THREADS environment
// variable (re-read on every call so tests can flip it); otherwise falls back
// to std::thread::hardware_concurrency().
int worker_count();

// Splits [0, n) into one contiguous block per worker and runs
// body(worker_index, begin, end) on each. Blocks are assigned by worker index,
// so any per-worker state can be merged in index order afterwards to get a
// schedule-independent result. Runs inline when a single worker suffices.
void parallel_blocks(std::size_t n,
                     const std::function<void(int, std::size_t, std::size_t)>& body);

// Deterministic counter-based generator (SplitMix64). Used for every random
// draw in the toolkit so that results never depend on platform library
// details.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform double in [lo, hi].
  double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }
};

}  // namespace xconvex
