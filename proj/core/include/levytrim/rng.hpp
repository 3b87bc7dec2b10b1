#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levytrim {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
/// Pure function of (counter, key); all streams in the library are built on it.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Purposes partition the stream-id space so independent consumers never share a counter.
enum class StreamPurpose : std::uint32_t {
  kPath = 1,
  kRepresentation = 2,
  kOrderedJump = 3,
  kGeneric = 4,
  kUniformTest = 5,
};

/// Stream id for the `index`-th draw of a given purpose.
constexpr std::uint64_t substream_id(StreamPurpose purpose, std::uint64_t index) {
  return (static_cast<std::uint64_t>(purpose) << 48) ^ (index & ((std::uint64_t{1} << 48) - 1));
}

/// Counter-based random stream. The key is the user seed, the counter's upper half is the
/// stream id, and the lower half counts blocks. Two streams with different ids never overlap,
/// so per-sample streams make Monte Carlo results independent of worker count.
///
/// Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint32_t;

  Stream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Unit-rate exponential.
  double exponential();
  /// Standard normal (Box-Muller, one output per call).
  double normal();
  /// Sum of `shape` unit exponentials: exact Gamma(shape, 1) for integer shape.
  double gamma_integer(int shape);
  /// Poisson(mean): sequential inversion below 30, std::poisson_distribution above.
  std::uint64_t poisson(double mean);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace levytrim
