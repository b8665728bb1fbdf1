#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qprecon/experiment.hpp"
#include "qprecon/numlin.hpp"

using namespace qprecon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCompute = 2;

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("QPRECON_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigInvalid, std::string("QPRECON_SEED is not a nonnegative integer: ") + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preconditioned linear systems and matrix functions via block encodings"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;
  std::string output_dir;

  auto* run = app.add_subcommand("run", "Run an experiment and write its reports");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::Range(1, 1024));
  run->add_option("--output,-o", output_dir, "Override output_dir");

  auto* validate = app.add_subcommand("validate", "Check a config without computing");
  validate->add_option("config", config_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  ExperimentConfig config;
  RunOptions opt;
  try {
    config = load_config(config_path);
    validate_params(config);
    opt.seed = env_seed();
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  if (*validate) {
    std::cout << "ok " << to_string(config.experiment) << " " << config.hash << '\n';
    return kExitOk;
  }

  opt.jobs = jobs;
  if (!output_dir.empty()) opt.output_dir = output_dir;
  omp_set_num_threads(jobs);
  try {
    const RunResult r = run_experiment(config, opt);
    for (const auto& f : r.files) std::cout << f << '\n';
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) {
      std::cerr << e.what() << '\n';
      return kExitConfig;
    }
    std::cerr << "ComputationFailed: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "ComputationFailed: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitOk;
}
