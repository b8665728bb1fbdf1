#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qprecon/kernels.hpp"
#include "qprecon/serialize.hpp"

namespace qprecon {

enum class Experiment { solve, sigma_scan, greens, gibbs, contour_convergence, cheb_convergence, cost_table };

Experiment parse_experiment(const std::string& s);
const char* to_string(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::sigma_scan;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  std::string output_dir = "out";
  std::vector<ReportFormat> formats = {ReportFormat::csv, ReportFormat::json};
  std::string hash;  // of the config as given
};

// Schema checks happen here and in validate_params; both throw ConfigInvalid.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
void validate_params(const ExperimentConfig& c);

struct RunOptions {
  int jobs = 1;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  std::vector<Table> tables;
  std::vector<std::string> files;
};

// Computes the tables without writing anything.
std::vector<Table> compute_experiment(const ExperimentConfig& c, Exec exec);

RunResult run_experiment(const ExperimentConfig& c, const RunOptions& opt = {});

}  // namespace qprecon
