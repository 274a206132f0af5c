#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "qtraj/noise.hpp"

using qtraj::Complex;
using qtraj::NoiseStream;

// Frozen reference outputs from numpy.random.Philox(key=[seed, stream]).
TEST_CASE("philox raw output matches the numpy reference vectors") {
  struct Case {
    std::uint64_t seed, stream;
    std::uint64_t expected[8];
  };
  const Case cases[] = {
      {0, 0,
       {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
        0x907d7a052fd5b4dcULL, 0x809bf322883987c3ULL, 0x471128b9e807f7ddULL,
        0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL}},
      {42, 7,
       {0xa64064f34e84b9a3ULL, 0xe287959a866a08fdULL, 0x8dc181f009b96c03ULL,
        0xf3f6001d4fa83454ULL, 0x69c633ee791df6b3ULL, 0x89327f7a8f0127a4ULL,
        0x1ed8260458996ff6ULL, 0x4299f7433fb1683eULL}},
      {0xDEADBEEFULL, 123456789,
       {0x8c76bebdd689a067ULL, 0x13afc25394d7767eULL, 0x1ead42f9818f78faULL,
        0x988f7192a8221f0dULL, 0x8c1c339323183c6eULL, 0x8d9f6043dcc465ceULL,
        0x50b9d1496bdb55f8ULL, 0x62bc511346c3ee39ULL}},
  };
  for (const auto& c : cases) {
    NoiseStream stream(c.seed, c.stream);
    for (std::uint64_t expected : c.expected) {
      CHECK(stream.next_raw() == expected);
    }
  }
}

TEST_CASE("identical (seed, stream) gives bit-identical sequences") {
  NoiseStream a(123, 45), b(123, 45);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
  }
}

TEST_CASE("different stream ids decorrelate") {
  NoiseStream a(123, 0), b(123, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_raw() == b.next_raw()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("uniform stays in [0, 1)") {
  NoiseStream stream(7, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = stream.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("complex wiener moment contracts") {
  const double dt = 1e-3;
  const int n = 1'000'000;
  NoiseStream stream(2024, 0);
  Complex sum{0, 0};
  Complex sum_sq{0, 0};
  double sum_abs_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex xi = stream.complex_wiener(dt);
    sum += xi;
    sum_sq += xi * xi;
    sum_abs_sq += std::norm(xi);
  }
  const double inv_n = 1.0 / n;
  // M(d_xi) = 0 within ~4 sigma of the sample mean.
  CHECK(std::abs(sum * inv_n) < 4.0 * std::sqrt(dt / n));
  // M(d_xi^2) = 0 within 4 dt / sqrt(N).
  CHECK(std::abs(sum_sq * inv_n) < 4.0 * dt / std::sqrt(double(n)));
  // M(|d_xi|^2) = dt within 1%.
  CHECK(sum_abs_sq * inv_n == doctest::Approx(dt).epsilon(0.01));
}

TEST_CASE("real wiener variance is dt") {
  const double dt = 2e-3;
  const int n = 400'000;
  NoiseStream stream(5, 9);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = stream.real_wiener(dt);
    sum += w;
    sum_sq += w * w;
  }
  CHECK(std::abs(sum / n) < 4.0 * std::sqrt(dt / n));
  CHECK(sum_sq / n == doctest::Approx(dt).epsilon(0.01));
}
