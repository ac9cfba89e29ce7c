#pragma once

#include <cstdint>
#include <initializer_list>

namespace scanorder {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator: the output is a pure function of the key words,
// so streams keyed by (seed, replicate, step) need no shared state.
constexpr std::uint64_t counter_hash(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by multiply-shift.
inline std::uint64_t to_index(std::uint64_t bits, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * bound) >> 64);
}

// Sequential stream over a fixed key.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0) noexcept
      : key_(key), stream_(stream) {}

  std::uint64_t next() noexcept { return counter_hash({key_, stream_, counter_++}); }
  double uniform() noexcept { return to_unit_interval(next()); }
  double uniform(double low, double high) noexcept { return low + (high - low) * uniform(); }
  std::uint64_t index(std::uint64_t bound) noexcept { return to_index(next(), bound); }

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace scanorder
