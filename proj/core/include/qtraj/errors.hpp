#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtraj {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between states and operators.
struct ShapeError : Error {
  using Error::Error;
};

/// Invalid argument values (windows, periods, counts).
struct ArgumentError : Error {
  using Error::Error;
};

/// Config parsing or validation failure. CLI exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

/// File-system failure. CLI exit code 3.
struct IoError : Error {
  using Error::Error;
};

/// Any numerical failure during integration. CLI exit code 2.
struct NumericalError : Error {
  using Error::Error;
};

/// Normalization of a (numerically) zero vector.
struct DegenerateStateError : NumericalError {
  using NumericalError::NumericalError;
};

/// Non-finite amplitudes encountered at simulation time `time`.
struct NumericalBlowupError : NumericalError {
  double time;
  NumericalBlowupError(const std::string& msg, double t)
      : NumericalError(msg), time(t) {}
};

/// |<L_j>| below threshold in the diffusive-limit stepper, where the
/// noise phase <L_j^dag>/|<L_j>| is undefined.
struct PhaseSingularityError : NumericalError {
  int channel;
  PhaseSingularityError(const std::string& msg, int ch)
      : NumericalError(msg), channel(ch) {}
};

/// Jump fired on a channel whose rate is numerically zero.
struct DegenerateJumpError : NumericalError {
  int channel;
  DegenerateJumpError(const std::string& msg, int ch)
      : NumericalError(msg), channel(ch) {}
};

/// Per-step trace drift of the master integrator beyond tolerance.
struct StepSizeError : NumericalError {
  using NumericalError::NumericalError;
};

/// Displaced-frame state spread beyond the small frame dimension.
struct FrameTruncationError : NumericalError {
  using NumericalError::NumericalError;
};

/// Sink for non-fatal warnings (truncation tails, oversized steps).
/// Callers that do not care pass nullptr.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
  bool empty() const { return warnings.empty(); }
};

inline void warn_if(Diagnostics* diag, bool condition, const std::string& msg) {
  if (diag != nullptr && condition) diag->warn(msg);
}

}  // namespace qtraj
