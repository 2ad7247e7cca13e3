#pragma once

#include <string>
#include <vector>

#include "omrl/control.hpp"
#include "omrl/ddpg.hpp"
#include "omrl/hilbert.hpp"

namespace omrl {

struct ScheduleConfig {
  double total_time = 50.0;
  int steps = 50;
  double omega_max = 0.2;
  FidelityMode fidelity_mode = FidelityMode::Reduced;
};

struct OutputConfig {
  std::string dir = "runs/out";
};

// One experiment: physical system, target state, control grid, training
// hyperparameters, output location.
struct ExperimentConfig {
  SystemConfig system;
  TargetSpec target;
  ScheduleConfig schedule;
  DdpgHyper rl;
  OutputConfig output;

  ScheduleGrid grid() const { return {schedule.total_time, schedule.steps, schedule.omega_max}; }

  // Throws ConfigError naming the offending key.
  void validate() const;
};

// Sectioned key = value text. Unknown sections, unknown keys, duplicate keys
// and domain violations are all errors naming the key.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

// Canonical round-trippable form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

// Experiment presets pinned to the reference parameter sets.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace omrl
