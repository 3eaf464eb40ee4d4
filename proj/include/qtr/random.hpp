#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace qtr {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
/// Stateless: the same (counter, key) always yields the same four words.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

/// SplitMix64 finalizer; used to derive independent master seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

/// A deterministic random substream addressed by (seed, stream, lane).
///
/// The Philox counter is laid out as {stream lo, stream hi, lane, block}
/// and the key is the 64-bit master seed, so two streams with different
/// addresses never share a counter block. Draws inside one substream are
/// sequential; the output depends only on the address and the draw order,
/// never on which thread produced it.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream,
               std::uint32_t lane = 0) noexcept;

  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal (Boost ziggurat over this stream's bits).
  double normal() noexcept;

  /// CN(0, variance): real and imaginary parts i.i.d. N(0, variance / 2).
  std::complex<double> complex_normal(double variance) noexcept;

  /// Unbiased integer in [0, n); n must be positive.
  std::uint32_t below(std::uint32_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint32_t lane() const noexcept { return lane_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint32_t lane_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

}  // namespace qtr
