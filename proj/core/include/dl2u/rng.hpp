#pragma once

#include <array>
#include <cstdint>

namespace dl2u {

/// Seed of one simulated path: a run-wide base plus the replication index.
struct RngSeed {
  std::uint64_t base = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

/// Substream identifiers. Draws for different series never share a counter.
enum class Series : std::uint32_t {
  Innovation = 1,  // epsilon_t
  Volatility = 2,  // eta_t / alpha
  Oracle = 3,      // Monte Carlo moment checks
  Uniform = 4,     // KS calibration samples
};

/// Philox4x32-10 block cipher (Salmon et al., SC'11): maps a 128-bit counter
/// and a 64-bit key to 128 pseudo-random bits.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Random access into a substream: block `i` of (seed, series) is
/// Philox(counter = {i_lo, i_hi, stream_lo, series << 24 | stream_hi & 0xffffff},
/// key = base). Replication indices must stay below 2^56.
class CounterStream {
 public:
  CounterStream(RngSeed seed, Series series);

  Philox4x32::Counter block(std::uint64_t index) const;

 private:
  Philox4x32::Key key_;
  std::uint32_t word2_;
  std::uint32_t word3_;
};

/// SplitMix64 finaliser of base + tag * golden ratio; gives unrelated seed
/// bases to sub-experiments of one run (table rows, oracle checks).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept;

/// Maps the top 52 bits of a 64-bit word to the midpoint grid (k + 1/2) 2^-52,
/// which lies strictly inside (0, 1).
double to_open_unit(std::uint64_t bits) noexcept;

/// Sequential standard normal draws (Box-Muller, two normals per block).
/// Draw t of a stream depends only on (seed, series, t).
class GaussianStream {
 public:
  GaussianStream(RngSeed seed, Series series) : stream_(seed, series) {}

  double operator()();

  /// Draw number `t` without touching the sequential position.
  double at(std::uint64_t t) const;

 private:
  static std::array<double, 2> normals(const Philox4x32::Counter& block);

  CounterStream stream_;
  std::uint64_t next_ = 0;
  std::array<double, 2> cache_{};
};

/// Sequential uniform draws on (0, 1), two per block.
class UniformStream {
 public:
  UniformStream(RngSeed seed, Series series) : stream_(seed, series) {}

  double operator()();

 private:
  CounterStream stream_;
  std::uint64_t next_ = 0;
  std::array<double, 2> cache_{};
};

}  // namespace dl2u
