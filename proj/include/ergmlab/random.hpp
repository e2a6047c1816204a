#pragma once

#include <cstdint>
#include <limits>

namespace ergmlab {

/// Counter-based random source. The value at position `counter` of stream
/// (seed, stream) is a pure function of the triple, so any slot of any stream
/// can be regenerated without replaying the ones before it.
///
/// Mixing uses the SplitMix64 finalizer applied to the key and counter.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0,
                       std::uint64_t counter = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept { return at(counter_++); }

  /// Value at an absolute position; does not move the cursor.
  [[nodiscard]] constexpr result_type at(std::uint64_t counter) const noexcept {
    return mix(key_ ^ mix(counter + 0x9e3779b97f4a7c15ULL));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's nearly-divisionless rejection method.
    auto x = (*this)();
    auto m = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<unsigned __int128>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  [[nodiscard]] constexpr std::uint64_t position() const noexcept { return counter_; }

  static constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Derives an independent child seed, e.g. one per replicate or per chain.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return CounterRng::mix(CounterRng::mix(seed) ^ (tag * 0xd1342543de82ef95ULL + 1));
}

}  // namespace ergmlab
