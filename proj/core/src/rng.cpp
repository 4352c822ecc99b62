#include "dl2u/rng.hpp"

#include <cmath>
#include <numbers>

namespace dl2u {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;
constexpr int kPhiloxRounds = 10;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

inline std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < kPhiloxRounds; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

CounterStream::CounterStream(RngSeed seed, Series series)
    : key_{static_cast<std::uint32_t>(seed.base), static_cast<std::uint32_t>(seed.base >> 32)},
      word2_(static_cast<std::uint32_t>(seed.stream)),
      word3_(static_cast<std::uint32_t>(seed.stream >> 32)) {
  // The series id occupies the top byte of word 3; replication indices
  // below 2^56 therefore never alias across series.
  word3_ = (word3_ & 0x00FFFFFFu) | (static_cast<std::uint32_t>(series) << 24);
}

Philox4x32::Counter CounterStream::block(std::uint64_t index) const {
  return Philox4x32::generate(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), word2_, word3_},
      key_);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) noexcept {
  std::uint64_t z = base + (tag + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double to_open_unit(std::uint64_t bits) noexcept {
  // 52 bits so that (k + 0.5) stays exact and the top value is 1 - 2^-53.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

std::array<double, 2> GaussianStream::normals(const Philox4x32::Counter& b) {
  const double u1 = to_open_unit(join(b[0], b[1]));
  const double u2 = to_open_unit(join(b[2], b[3]));
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double GaussianStream::operator()() {
  const std::uint64_t t = next_++;
  if ((t & 1u) == 0) cache_ = normals(stream_.block(t >> 1));
  return cache_[t & 1u];
}

double GaussianStream::at(std::uint64_t t) const { return normals(stream_.block(t >> 1))[t & 1u]; }

double UniformStream::operator()() {
  const std::uint64_t t = next_++;
  if ((t & 1u) == 0) {
    const auto b = stream_.block(t >> 1);
    cache_ = {to_open_unit(join(b[0], b[1])), to_open_unit(join(b[2], b[3]))};
  }
  return cache_[t & 1u];
}

}  // namespace dl2u
