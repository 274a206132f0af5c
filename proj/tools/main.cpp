// Command-line front end: `run` executes one config, `sweep` repeats it
// over a parameter list, `verify` runs the oracle-comparison invariants.
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtraj/errors.hpp"
#include "qtraj/experiment.hpp"
#include "qtraj/verify.hpp"

namespace {

// Remaining `--section.key=value` tokens become config overrides.
std::vector<std::string> overrides_from_extras(
    const std::vector<std::string>& extras) {
  std::vector<std::string> overrides;
  for (const auto& token : extras) {
    if (token.rfind("--", 0) != 0 || token.find('=') == std::string::npos) {
      throw qtraj::ConfigError("unrecognized argument '" + token +
                               "' (overrides look like --run.dt=1e-4)");
    }
    overrides.push_back(token.substr(2));
  }
  return overrides;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qtraj::IoError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtraj - quantum trajectory simulator for Markovian open "
               "systems in truncated Fock space"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sweep_key;
  std::string sweep_values;
  std::string verify_seeds;

  auto* run_cmd = app.add_subcommand("run", "execute one configured run");
  run_cmd->add_option("-c,--config", config_path, "config file")->required();
  run_cmd->allow_extras();

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a config once per parameter value");
  sweep_cmd->add_option("-c,--config", config_path, "config file")->required();
  sweep_cmd->add_option("-k,--key", sweep_key, "config key to sweep")
      ->required();
  sweep_cmd
      ->add_option("-v,--values", sweep_values,
                   "comma-separated values, e.g. 1,4,10")
      ->required();
  sweep_cmd->allow_extras();

  auto* verify_cmd = app.add_subcommand(
      "verify", "run the invariant suites and print pass/fail per invariant");
  verify_cmd->add_option("-s,--seeds", verify_seeds,
                         "comma-separated seed list (default: 1..10)");

  try {
    app.parse(argc, argv);

    if (verify_cmd->parsed()) {
      std::vector<std::uint64_t> seeds;
      if (!verify_seeds.empty()) {
        for (const auto& s : split_list(verify_seeds)) {
          seeds.push_back(std::stoull(s));
        }
      } else {
        seeds = qtraj::default_verify_seeds();
      }
      const bool ok = qtraj::run_verify(std::cout, seeds);
      std::cout << (ok ? "verify: all invariants passed"
                       : "verify: FAILURES above")
                << std::endl;
      return ok ? 0 : 2;
    }

    const std::string text = read_file(config_path);
    if (run_cmd->parsed()) {
      const auto config = qtraj::parse_config_with_overrides(
          text, overrides_from_extras(run_cmd->remaining()));
      qtraj::run_experiment(config, std::cout);
    } else {
      const auto config = qtraj::parse_config_with_overrides(
          text, overrides_from_extras(sweep_cmd->remaining()));
      qtraj::run_sweep(config, sweep_key, split_list(sweep_values), std::cout);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli: " << e.what() << std::endl;
    return 1;
  } catch (const qtraj::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << std::endl;
    return 1;
  } catch (const qtraj::ArgumentError& e) {
    std::cerr << "error: config: " << e.what() << std::endl;
    return 1;
  } catch (const qtraj::ShapeError& e) {
    std::cerr << "error: config: " << e.what() << std::endl;
    return 1;
  } catch (const qtraj::IoError& e) {
    std::cerr << "error: io: " << e.what() << std::endl;
    return 3;
  } catch (const qtraj::NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << std::endl;
    return 2;
  }
}
