#include "qtraj/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qtraj/ensemble.hpp"
#include "qtraj/fock.hpp"

namespace qtraj {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_trajectory_csv(const fs::path& path,
                          const TrajectoryRecord& record) {
  auto out = open_output(path);
  out << "t,re_mean_a,im_mean_a,n_mean,delta_alpha_sq,norm_drift\n";
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    out << format_csv_double(record.times[i]) << ','
        << format_csv_double(record.mean_a[i].real()) << ','
        << format_csv_double(record.mean_a[i].imag()) << ','
        << format_csv_double(record.mean_n[i]) << ','
        << format_csv_double(record.width[i]) << ','
        << format_csv_double(record.norm_drift[i]) << '\n';
  }
  finish_output(out, path);
}

void write_master_csv(const fs::path& path, const MasterRun& run) {
  auto out = open_output(path);
  out << "t,re_mean_a,im_mean_a,n_mean,delta_alpha_sq,norm_drift\n";
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const ComplexMatrix& rho = run.states[i];
    const auto dim = rho.rows();
    Complex mean_a{0.0, 0.0};
    double mean_n = 0.0;
    for (Eigen::Index n = 0; n + 1 < dim; ++n) {
      mean_a += std::sqrt(static_cast<double>(n + 1)) * rho(n + 1, n);
    }
    for (Eigen::Index n = 0; n < dim; ++n) {
      mean_n += static_cast<double>(n) * rho(n, n).real();
    }
    out << format_csv_double(run.times[i]) << ','
        << format_csv_double(mean_a.real()) << ','
        << format_csv_double(mean_a.imag()) << ','
        << format_csv_double(mean_n) << ','
        << format_csv_double(mean_n - std::norm(mean_a)) << ','
        << format_csv_double(run.sample_trace_drift[i]) << '\n';
  }
  finish_output(out, path);
}

void write_jumps_csv(const fs::path& path,
                     const std::vector<TrajectoryRecord>& records) {
  auto out = open_output(path);
  out << "t,channel,rate,magnitude\n";
  for (const auto& record : records) {
    for (const auto& jump : record.jumps) {
      out << format_csv_double(jump.time) << ',' << jump.channel << ','
          << format_csv_double(jump.rate) << ','
          << format_csv_double(jump.magnitude) << '\n';
    }
  }
  finish_output(out, path);
}

void write_poincare_csv(const fs::path& path,
                        const std::vector<TrajectoryRecord>& records,
                        double period, double t_skip) {
  auto out = open_output(path);
  out << "q,p\n";
  for (const auto& record : records) {
    for (const auto& point : poincare_points(record, period, t_skip)) {
      out << format_csv_double(point.q) << ',' << format_csv_double(point.p)
          << '\n';
    }
  }
  finish_output(out, path);
}

void write_summary_csv(const fs::path& path, const EnsembleSummary& summary) {
  auto out = open_output(path);
  out << "t,trace_distance_to_master\n";
  for (std::size_t i = 0; i < summary.checkpoint_times.size(); ++i) {
    out << format_csv_double(summary.checkpoint_times[i]) << ','
        << format_csv_double(summary.trace_distance_to_master[i]) << '\n';
  }
  finish_output(out, path);
}

void write_metadata(const fs::path& path, const RunConfig& config,
                    std::uint64_t fingerprint) {
  auto out = open_output(path);
  char stamp[64] = "unknown";
  const std::time_t now = std::time(nullptr);
  if (std::tm tm_utc{}; gmtime_r(&now, &tm_utc) != nullptr) {
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  }
  char fp[32];
  std::snprintf(fp, sizeof(fp), "%016llx",
                static_cast<unsigned long long>(fingerprint));
#ifdef QTRAJ_VERSION
  out << "provenance.version = " << QTRAJ_VERSION << "\n";
#else
  out << "provenance.version = dev\n";
#endif
  out << "provenance.generated_at = " << stamp << "\n";
  out << "provenance.model_fingerprint = " << fp << "\n";
  out << serialize_config(config);
  finish_output(out, path);
}

}  // namespace

std::string format_csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void run_experiment(const RunConfig& config, std::ostream& log) {
  const ModelSpec model = build_model(config);
  const ComplexVector psi0 = build_initial_state(config);

  const fs::path dir(config.output_directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir.string() +
                  "': " + ec.message());
  }

  write_metadata(dir / "metadata.txt", config, model.fingerprint());

  if (config.stepper == "master") {
    const ComplexMatrix rho0 = psi0 * psi0.adjoint();
    const MasterRun run = evolve_master(model, rho0, config.dt,
                                        config.t_final, config.sample_every);
    write_master_csv(dir / "trajectory.csv", run);
    write_jumps_csv(dir / "jumps.csv", {});
    log << "master run: " << run.times.size() << " samples, max trace drift "
        << run.max_step_trace_drift << "\n";
    return;
  }

  EnsembleOptions options;
  options.stepper = stepper_from_name(config.stepper);
  options.dt = config.dt;
  options.t_final = config.t_final;
  options.sample_every = config.sample_every;
  options.n_traj = config.n_traj;
  options.seed = config.seed;
  options.checkpoints = config.checkpoints;
  options.compare_master = !config.checkpoints.empty();
  options.frame_enabled = config.frame_enabled;
  options.frame_dim = config.frame_dim;
  options.recenter_threshold = config.recenter_threshold;

  const EnsembleSummary summary = run_ensemble(model, psi0, options);

  write_trajectory_csv(dir / "trajectory.csv", summary.records.front());
  write_jumps_csv(dir / "jumps.csv", summary.records);
  if (model.hamiltonian.driven()) {
    const double period = 2.0 * M_PI / model.hamiltonian.drive_frequency;
    write_poincare_csv(dir / "poincare.csv", summary.records, period,
                       config.poincare_skip_periods * period);
  }
  if (!summary.checkpoint_times.empty()) {
    write_summary_csv(dir / "ensemble_summary.csv", summary);
  }

  long total_jumps = 0;
  for (const auto& s : summary.jump_stats) total_jumps += s.count;
  log << config.stepper << " ensemble: " << summary.n_traj
      << " trajectories, " << total_jumps << " jumps";
  if (!summary.trace_distance_to_master.empty()) {
    double worst = 0.0;
    for (double d : summary.trace_distance_to_master) {
      worst = std::max(worst, d);
    }
    log << ", max trace distance to master " << worst;
  }
  log << "\n";
}

void run_sweep(const RunConfig& base, const std::string& key,
               const std::vector<std::string>& values, std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  const std::string leaf =
      key.find('.') == std::string::npos ? key : key.substr(key.find('.') + 1);
  for (const auto& value : values) {
    RunConfig config = parse_config_with_overrides(
        serialize_config(base), {key + " = " + value});
    std::string suffix = value;
    for (char& ch : suffix) {
      if (ch == '.' || ch == ',' || ch == ' ' || ch == '/') ch = '_';
    }
    config.output_directory = base.output_directory + "_" + leaf + "_" + suffix;
    log << "sweep " << key << " = " << value << " -> "
        << config.output_directory << "\n";
    run_experiment(config, log);
  }
}

}  // namespace qtraj
