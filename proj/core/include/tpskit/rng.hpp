#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace tpskit {

// xoshiro256** seeded through splitmix64. All draws (uniform, normal,
// bounded integers, shuffles) are implemented here rather than with
// <random> distributions so that sequences are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;

  // Standard normal via the Marsaglia polar method.
  double normal() noexcept;

  // Uniform integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Child seed for a named stage. Stages are keyed by name, so adding a new
// stage never shifts the streams of existing ones.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) noexcept;

// 64-bit FNV-1a, used for stage names and input fingerprints.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace tpskit
