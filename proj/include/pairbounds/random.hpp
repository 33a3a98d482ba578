#ifndef PAIRBOUNDS_RANDOM_HPP
#define PAIRBOUNDS_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace pairbounds {

/// Identifier recorded in every artifact that depends on random draws.
inline constexpr std::string_view kGeneratorId = "mt19937_64+splitmix64/v1";

/// SplitMix64 finalizer; used for seed derivation only.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Per-trial seed: hash(master, index). Independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seedable generator with portable distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The <random> distributions are implementation-defined, so the
/// transforms below are written out to keep draws identical across standard
/// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)), seed_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Fair ±1 coin.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  /// Child generator for sub-stream `index`; the parent state is untouched.
  Rng split(std::uint64_t index) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pairbounds

#endif  // PAIRBOUNDS_RANDOM_HPP
