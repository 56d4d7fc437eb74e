#pragma once

#include <cstdint>
#include <random>

namespace dtel {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the distributions below are written
// out by hand because the standard library ones are implementation-defined.
// Sub-streams are derived with SplitMix64 so that a (seed, tag) pair always
// names the same sequence.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  SeededRng(const SeededRng&) = delete;
  SeededRng& operator=(const SeededRng&) = delete;
  SeededRng(SeededRng&&) = default;
  SeededRng& operator=(SeededRng&&) = default;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, n); n must be positive. Unbiased (rejection).
  std::uint64_t below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double normal();

  // Independent generator for sub-task `tag`; does not advance this one.
  SeededRng fork(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace dtel
