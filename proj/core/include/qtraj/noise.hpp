#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "qtraj/types.hpp"

namespace qtraj {

/// Counter-based noise source: one independent, reproducible stream per
/// trajectory, keyed by (seed, stream_id). The generator is Philox4x64-10,
/// so streams never need coordination and a trajectory is replayable from
/// its two integers alone.
///
/// Raw 64-bit output is bit-identical to numpy's
/// `Philox(key=[seed, stream_id]).random_raw()`, which is what the frozen
/// reference vectors in the tests were produced with.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_raw();

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();

  /// One standard normal draw (Box-Muller; consumes a full pair so the
  /// stream position never depends on call history).
  double normal();

  /// Two independent standard normals from one Box-Muller pair.
  std::pair<double, double> normal_pair();

  /// Complex Wiener increment d_xi with M(d_xi) = 0, M(d_xi^2) = 0,
  /// M(|d_xi|^2) = dt: (g1 + i g2) * sqrt(dt/2).
  Complex complex_wiener(double dt);

  /// Real Wiener increment dW with M(dW^2) = dt.
  double real_wiener(double dt);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buffer_;
  int buffer_pos_;
};

}  // namespace qtraj
