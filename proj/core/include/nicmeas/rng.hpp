#pragma once

#include <cstdint>
#include <random>

namespace nicmeas {

// Thin deterministic wrapper around mt19937_64. Distribution helpers avoid
// std::uniform_int_distribution so sequences are pinned by the seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform-enough draw from [0, n); modulo bias is irrelevant at our ranges.
  std::uint64_t pick(std::uint64_t n) { return n ? eng_() % n : 0; }
  int pick_int(int n) { return n > 0 ? static_cast<int>(pick(static_cast<std::uint64_t>(n))) : 0; }

  bool coin() { return (eng_() & 1ULL) != 0; }

  // Derive an independent child seed.
  std::uint64_t fork() { return eng_() ^ 0x9e3779b97f4a7c15ULL; }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nicmeas
