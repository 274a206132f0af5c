#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtraj/models.hpp"
#include "qtraj/unravelings.hpp"

namespace qtraj {

/// Fully resolved run configuration. The text format is flat
/// `section.key = value` lines (UTF-8, `#` comments); parsing is strict:
/// unknown keys, missing required keys and out-of-range values are
/// rejected by name. Keys under `provenance.` are accepted and ignored so
/// that emitted metadata files reparse to the identical RunConfig.
struct RunConfig {
  // model section
  std::string model_name = "damped_ho";  // damped_ho | forced_ho | duffing
  double omega = 1.0;
  double gamma = 1.0;
  double nbar = 0.0;
  double force = 0.0;
  double beta = 1.0;
  double damping = 0.125;
  double drive_amplitude = 0.3;
  double drive_frequency = 1.0;

  // run section
  std::string stepper = "qsd";  // qsd | qj | qj_diffusive | master
  int dim = 16;
  double dt = 1e-3;
  double t_final = 1.0;
  int sample_every = 1;
  int n_traj = 1;
  std::uint64_t seed = 0;
  std::vector<double> checkpoints;
  /// ground | fock(n) | coherent(re[,im]) | random
  std::string initial = "ground";
  double poincare_skip_periods = 20.0;

  // frame section
  bool frame_enabled = false;
  int frame_dim = 20;
  double recenter_threshold = 0.1;

  // output section
  std::string output_directory = "out";
  std::string output_format = "csv";

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// `key=value` strings applied on top of the parsed file (the CLI override
/// mechanism); validation runs after all overrides are in.
RunConfig parse_config_with_overrides(const std::string& text,
                                      const std::vector<std::string>& overrides);

/// Canonical dotted-key rendering of a resolved config, every defaulted
/// field explicit. parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

Stepper stepper_from_name(const std::string& name);

ModelSpec build_model(const RunConfig& config);
ComplexVector build_initial_state(const RunConfig& config);

}  // namespace qtraj
