#include "qtraj/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qtraj/fock.hpp"
#include "qtraj/noise.hpp"

namespace qtraj {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_keyvalues(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("duplicate config key '" + key + "'");
    }
  }
  return kv;
}

void set_keyvalue(KeyValues& kv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' is not key=value");
  }
  kv[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

// Typed accessors that consume keys from the map.
struct Reader {
  KeyValues kv;

  bool take(const std::string& key, std::string& out) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    out = it->second;
    kv.erase(it);
    return true;
  }
  void take_string(const std::string& key, std::string& field) {
    std::string v;
    if (take(key, v)) field = v;
  }
  void take_double(const std::string& key, double& field) {
    std::string v;
    if (!take(key, v)) return;
    try {
      std::size_t pos = 0;
      field = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    }
  }
  void take_int(const std::string& key, int& field) {
    std::string v;
    if (!take(key, v)) return;
    try {
      std::size_t pos = 0;
      field = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    }
  }
  void take_u64(const std::string& key, std::uint64_t& field) {
    std::string v;
    if (!take(key, v)) return;
    try {
      std::size_t pos = 0;
      field = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': '" + v +
                        "' is not an unsigned integer");
    }
  }
  void take_bool(const std::string& key, bool& field) {
    std::string v;
    if (!take(key, v)) return;
    if (v == "true" || v == "1") {
      field = true;
    } else if (v == "false" || v == "0") {
      field = false;
    } else {
      throw ConfigError("key '" + key + "': expected true/false, got '" + v +
                        "'");
    }
  }
  void take_double_list(const std::string& key, std::vector<double>& field) {
    std::string v;
    if (!take(key, v)) return;
    field.clear();
    if (trim(v).empty()) return;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      try {
        std::size_t pos = 0;
        field.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': '" + item + "' is not a number");
      }
    }
  }
};

void validate(const RunConfig& c) {
  if (c.model_name != "damped_ho" && c.model_name != "forced_ho" &&
      c.model_name != "duffing") {
    throw ConfigError("model.name '" + c.model_name +
                      "' is not one of damped_ho, forced_ho, duffing");
  }
  if (c.stepper != "qsd" && c.stepper != "qj" && c.stepper != "qj_diffusive" &&
      c.stepper != "master") {
    throw ConfigError("run.stepper '" + c.stepper +
                      "' is not one of qsd, qj, qj_diffusive, master");
  }
  if (c.dim < 2) throw ConfigError("run.dim must be >= 2");
  if (c.dt <= 0) throw ConfigError("run.dt must be > 0");
  if (c.t_final < 0) throw ConfigError("run.t_final must be >= 0");
  if (c.sample_every < 1) throw ConfigError("run.sample_every must be >= 1");
  if (c.n_traj < 1) throw ConfigError("run.n_traj must be >= 1");
  if (c.gamma < 0) throw ConfigError("model.gamma must be >= 0");
  if (c.nbar < 0) throw ConfigError("model.nbar must be >= 0");
  if (c.beta <= 0) throw ConfigError("model.beta must be > 0");
  if (c.damping < 0) throw ConfigError("model.damping must be >= 0");
  if (c.drive_frequency <= 0) {
    throw ConfigError("model.drive_frequency must be > 0");
  }
  if (c.model_name == "forced_ho" && c.force == 0.0) {
    throw ConfigError("forced_ho requires a nonzero model.force");
  }
  if (c.stepper == "master") {
    if (c.n_traj != 1) {
      throw ConfigError("run.stepper = master is deterministic; run.n_traj "
                        "must be 1");
    }
    if (c.frame_enabled) {
      throw ConfigError("the moving frame does not apply to master runs");
    }
    if (!c.checkpoints.empty()) {
      throw ConfigError("run.checkpoints compare ensembles against the "
                        "master oracle; they do not apply to master runs");
    }
  }
  if (c.frame_enabled && c.frame_dim < 2) {
    throw ConfigError("frame.dim must be >= 2");
  }
  if (c.frame_enabled && c.recenter_threshold < 0) {
    throw ConfigError("frame.recenter_threshold must be >= 0");
  }
  if (c.frame_enabled && !c.checkpoints.empty()) {
    throw ConfigError("run.checkpoints are not supported with the moving "
                      "frame; run at the full dimension instead");
  }
  if (c.poincare_skip_periods < 0) {
    throw ConfigError("run.poincare_skip_periods must be >= 0");
  }
  if (c.output_format != "csv") {
    throw ConfigError("output.format '" + c.output_format +
                      "' is not supported (csv only)");
  }
  for (double t : c.checkpoints) {
    if (t < 0 || t > c.t_final + 0.5 * c.dt) {
      throw ConfigError("checkpoint t = " + std::to_string(t) +
                        " outside [0, t_final]");
    }
  }
  build_initial_state(c);  // validates run.initial syntax and bounds
}

RunConfig build_config(KeyValues kv) {
  Reader r{std::move(kv)};
  RunConfig c;
  r.take_string("model.name", c.model_name);

  const bool is_duffing = c.model_name == "duffing";
  if (is_duffing) {
    r.take_double("model.beta", c.beta);
    r.take_double("model.damping", c.damping);
    r.take_double("model.drive_amplitude", c.drive_amplitude);
    r.take_double("model.drive_frequency", c.drive_frequency);
  } else {
    r.take_double("model.omega", c.omega);
    r.take_double("model.gamma", c.gamma);
    r.take_double("model.nbar", c.nbar);
    if (c.model_name == "forced_ho") r.take_double("model.force", c.force);
  }

  r.take_string("run.stepper", c.stepper);
  r.take_int("run.dim", c.dim);
  r.take_double("run.dt", c.dt);
  r.take_double("run.t_final", c.t_final);
  r.take_int("run.sample_every", c.sample_every);
  r.take_int("run.n_traj", c.n_traj);
  r.take_u64("run.seed", c.seed);
  r.take_double_list("run.checkpoints", c.checkpoints);
  r.take_string("run.initial", c.initial);
  r.take_double("run.poincare_skip_periods", c.poincare_skip_periods);

  r.take_bool("frame.enabled", c.frame_enabled);
  r.take_int("frame.dim", c.frame_dim);
  r.take_double("frame.recenter_threshold", c.recenter_threshold);

  r.take_string("output.directory", c.output_directory);
  r.take_string("output.format", c.output_format);

  for (const auto& [key, value] : r.kv) {
    if (key.rfind("provenance.", 0) == 0) continue;  // metadata echoes
    throw ConfigError("unknown config key '" + key + "'");
  }
  validate(c);
  return c;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  return build_config(parse_keyvalues(text));
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

RunConfig parse_config_with_overrides(
    const std::string& text, const std::vector<std::string>& overrides) {
  KeyValues kv = parse_keyvalues(text);
  for (const auto& assignment : overrides) set_keyvalue(kv, assignment);
  return build_config(std::move(kv));
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model.name = " << c.model_name << "\n";
  if (c.model_name == "duffing") {
    out << "model.beta = " << fmt_double(c.beta) << "\n";
    out << "model.damping = " << fmt_double(c.damping) << "\n";
    out << "model.drive_amplitude = " << fmt_double(c.drive_amplitude) << "\n";
    out << "model.drive_frequency = " << fmt_double(c.drive_frequency) << "\n";
  } else {
    out << "model.omega = " << fmt_double(c.omega) << "\n";
    out << "model.gamma = " << fmt_double(c.gamma) << "\n";
    out << "model.nbar = " << fmt_double(c.nbar) << "\n";
    if (c.model_name == "forced_ho") {
      out << "model.force = " << fmt_double(c.force) << "\n";
    }
  }
  out << "run.stepper = " << c.stepper << "\n";
  out << "run.dim = " << c.dim << "\n";
  out << "run.dt = " << fmt_double(c.dt) << "\n";
  out << "run.t_final = " << fmt_double(c.t_final) << "\n";
  out << "run.sample_every = " << c.sample_every << "\n";
  out << "run.n_traj = " << c.n_traj << "\n";
  out << "run.seed = " << c.seed << "\n";
  out << "run.checkpoints = ";
  for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
    if (i > 0) out << ", ";
    out << fmt_double(c.checkpoints[i]);
  }
  out << "\n";
  out << "run.initial = " << c.initial << "\n";
  out << "run.poincare_skip_periods = " << fmt_double(c.poincare_skip_periods)
      << "\n";
  out << "frame.enabled = " << (c.frame_enabled ? "true" : "false") << "\n";
  out << "frame.dim = " << c.frame_dim << "\n";
  out << "frame.recenter_threshold = " << fmt_double(c.recenter_threshold)
      << "\n";
  out << "output.directory = " << c.output_directory << "\n";
  out << "output.format = " << c.output_format << "\n";
  return out.str();
}

Stepper stepper_from_name(const std::string& name) {
  if (name == "qsd") return Stepper::qsd;
  if (name == "qj") return Stepper::qj;
  if (name == "qj_diffusive") return Stepper::qj_diffusive;
  throw ConfigError("'" + name + "' is not a stochastic stepper");
}

ModelSpec build_model(const RunConfig& c) {
  if (c.model_name == "duffing") {
    DuffingParams params;
    params.beta = c.beta;
    params.damping = c.damping;
    params.drive_amplitude = c.drive_amplitude;
    params.drive_frequency = c.drive_frequency;
    params.dim = c.dim;
    return duffing(params);
  }
  HOParams params;
  params.omega = c.omega;
  params.gamma = c.gamma;
  params.nbar = c.nbar;
  params.force = c.force;
  params.dim = c.dim;
  return damped_ho(params);
}

ComplexVector build_initial_state(const RunConfig& c) {
  const std::string spec = trim(c.initial);
  auto args_of = [&](const std::string& head) -> std::vector<double> {
    // "head(a, b)" -> {a, b}
    std::string inner =
        spec.substr(head.size() + 1, spec.size() - head.size() - 2);
    std::vector<double> args;
    std::istringstream in(inner);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      try {
        std::size_t pos = 0;
        args.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("run.initial: bad argument '" + item + "'");
      }
    }
    return args;
  };

  if (spec == "ground") {
    ComplexVector psi = ComplexVector::Zero(c.dim);
    psi(0) = 1.0;
    return psi;
  }
  if (spec == "random") {
    // Reserved stream so trajectory streams 0..n_traj-1 stay untouched.
    NoiseStream stream(c.seed, 0xFFFFFFFFFFFFFFFFULL);
    return random_state(c.dim, stream);
  }
  if (spec.rfind("fock(", 0) == 0 && spec.back() == ')') {
    const auto args = args_of("fock");
    if (args.size() != 1 || args[0] != std::floor(args[0]) || args[0] < 0) {
      throw ConfigError("run.initial: fock(n) needs one integer n >= 0");
    }
    const int n = static_cast<int>(args[0]);
    if (n >= c.dim) {
      throw ConfigError("run.initial: fock level " + std::to_string(n) +
                        " outside dim " + std::to_string(c.dim));
    }
    ComplexVector psi = ComplexVector::Zero(c.dim);
    psi(n) = 1.0;
    return psi;
  }
  if (spec.rfind("coherent(", 0) == 0 && spec.back() == ')') {
    const auto args = args_of("coherent");
    if (args.empty() || args.size() > 2) {
      throw ConfigError("run.initial: coherent(re[, im]) takes 1 or 2 values");
    }
    const Complex alpha{args[0], args.size() == 2 ? args[1] : 0.0};
    return coherent_state(alpha, c.dim);
  }
  throw ConfigError("run.initial '" + c.initial +
                    "' is not ground, random, fock(n) or coherent(re[, im])");
}

}  // namespace qtraj
