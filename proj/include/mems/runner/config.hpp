#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mems/geometry.hpp"
#include "mems/parabolic.hpp"

namespace mems::runner {

enum class InitialKind { Zero, Eigenfunction, Steady, File };

struct InitialSpec {
  InitialKind kind = InitialKind::Zero;
  double scale = 0.5;  // eigenfunction: u0 = scale phi1 / max phi1
  double mu = 0.1;     // steady: u0 = w_mu
  std::string path;    // file: one value per node, whitespace separated
};

struct ExperimentConfig {
  std::string experiment;
  DomainSpec domain = DomainSpec::interval(1.0, 128);
  double chi = 1.0;
  double lambda = 0.5;
  std::vector<double> lambdas = {5.0, 10.0, 20.0, 40.0};
  InitialSpec initial;
  EvolveOptions evolve;
  int picard_iterations = 30;
  int picard_time_steps = 200;
  bool plots = true;
  std::uint64_t seed = 0;  // reserved; every method is deterministic
};

/// One documented key: section.name, default, and a one-line description.
struct ConfigKey {
  std::string key;
  std::string default_value;
  std::string help;
};

const std::vector<ConfigKey>& config_keys();

/// Experiment names in display order with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& experiment_catalog();
bool is_experiment(const std::string& name);

/// Reads an INI file (empty path: defaults only), then applies `key=value`
/// overrides. Unknown keys and malformed values raise ConfigError.
ExperimentConfig load_config(const std::string& experiment, const std::string& path,
                             const std::vector<std::string>& overrides);

/// Flat key -> value echo of the effective configuration.
std::map<std::string, std::string> echo(const ExperimentConfig& cfg);

/// Builds u0 on `d` from the initial-data section.
DiscreteField initial_field(const Domain& d, const InitialSpec& spec);

std::string describe(const InitialSpec& spec);

}  // namespace mems::runner
