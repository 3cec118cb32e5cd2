#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ocgad/anomaly_injector.hpp"
#include "ocgad/gcnae.hpp"
#include "ocgad/loggen.hpp"
#include "ocgad/scoring_eval.hpp"

namespace ocgad::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kInjectionInfeasible = 3,
  kNumericFailure = 4,
  kJoinFailure = 5,
};

// Effective configuration of one invocation. Defaults here, then the
// `--config` file, then flags.
struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path truth;
  std::vector<std::filesystem::path> reports;
  std::filesystem::path save_model;
  std::filesystem::path load_model;
  std::filesystem::path dot;
  std::filesystem::path edges;

  std::uint64_t seed = 0;
  double rate = 0.10;
  std::size_t swap_subsample = 0;
  std::size_t repeat = 1;
  bool scale_numeric = true;
  double k_factor = 1.5;
  TrainConfig train;
  GenConfig gen;
};

// Maps library errors to exit codes.
int exit_code_for(const std::exception& e);

int cmd_generate(const RunConfig& cfg, std::ostream& out);
int cmd_inject(const RunConfig& cfg, std::ostream& out);
int cmd_detect(const RunConfig& cfg, std::ostream& out);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out);
int cmd_pipeline(const RunConfig& cfg, std::ostream& out);
int cmd_instances(const RunConfig& cfg, std::ostream& out);

// Runs detection on an in-memory log; the report carries run metadata but no
// truth.
DetectionReport detect(const ObjectCentricLog& log, const RunConfig& cfg,
                       const std::string& input_name);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ocgad::cli
