#include "qtraj/noise.hpp"

#include <cmath>

namespace qtraj {

namespace {

using u64 = std::uint64_t;

inline u64 mulhilo(u64 a, u64 b, u64& hi) {
  __uint128_t p = static_cast<__uint128_t>(a) * b;
  hi = static_cast<u64>(p >> 64);
  return static_cast<u64>(p);
}

// One Philox4x64 block, 10 rounds (Salmon et al. constants).
std::array<u64, 4> philox4x64_10(std::array<u64, 4> ctr, u64 k0, u64 k1) {
  constexpr u64 kMul0 = 0xD2E7470EE14C6C93ULL;
  constexpr u64 kMul1 = 0xCA5A826395121157ULL;
  constexpr u64 kWeyl0 = 0x9E3779B97F4A7C15ULL;
  constexpr u64 kWeyl1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    u64 hi0, hi1;
    const u64 lo0 = mulhilo(kMul0, ctr[0], hi0);
    const u64 lo1 = mulhilo(kMul1, ctr[2], hi1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
  }
  return ctr;
}

}  // namespace

NoiseStream::NoiseStream(u64 seed, u64 stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      counter_{0, 0, 0, 0},
      buffer_{},
      buffer_pos_(4) {}

void NoiseStream::refill() {
  // numpy convention: bump the 256-bit counter before generating.
  for (int i = 0; i < 4; ++i) {
    if (++counter_[i] != 0) break;
  }
  buffer_ = philox4x64_10(counter_, seed_, stream_id_);
  buffer_pos_ = 0;
}

u64 NoiseStream::next_raw() {
  if (buffer_pos_ >= 4) refill();
  return buffer_[buffer_pos_++];
}

double NoiseStream::uniform() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

std::pair<double, double> NoiseStream::normal_pair() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

double NoiseStream::normal() { return normal_pair().first; }

Complex NoiseStream::complex_wiener(double dt) {
  const auto [g1, g2] = normal_pair();
  const double s = std::sqrt(0.5 * dt);
  return {g1 * s, g2 * s};
}

double NoiseStream::real_wiener(double dt) {
  return normal() * std::sqrt(dt);
}

}  // namespace qtraj
