#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qtraj/config.hpp"

namespace qtraj {

/// Executes one configured run and writes CSV outputs plus a metadata file
/// into config.output_directory:
///   trajectory.csv        t, re_mean_a, im_mean_a, n_mean, delta_alpha_sq,
///                         norm_drift        (stream 0, or the master run)
///   jumps.csv             t, channel, rate, magnitude (all trajectories,
///                         ordered by stream id, then time)
///   poincare.csv          q, p (driven models only; strobed at the drive
///                         period after run.poincare_skip_periods periods)
///   ensemble_summary.csv  t, trace_distance_to_master (when checkpoints
///                         are configured)
///   metadata.txt          resolved config + provenance; reparses to the
///                         identical RunConfig
/// Identical configs produce byte-identical CSVs.
void run_experiment(const RunConfig& config, std::ostream& log);

/// Runs the config once per value of `key`, with output directories
/// suffixed `_<key-leaf>_<value>`.
void run_sweep(const RunConfig& base, const std::string& key,
               const std::vector<std::string>& values, std::ostream& log);

std::string format_csv_double(double x);  // 17 significant digits

}  // namespace qtraj
