#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cfrsense/preprocess.hpp"

namespace cfrsense {

struct SimulateOptions {
  std::string out_dir;
  std::string scenario = "chest";
  std::uint32_t subjects = 5;
  std::uint32_t sessions_per_class = 5;
  double duration_s = 30.0;
  double separation = 0.1;
  double snr_db = 20.0;
  double breathing_rate_hz = 0.25;
  double breathing_depth = 0.1;
  std::uint64_t seed = 1;
};

struct FeaturizeOptions {
  std::string in_dir;
  std::string out_file;
  int window_frames = 125;
  FilterSpec filter;
  double z_threshold = 6.0;
  double snapshot_rate_hz = 0.0;  // 0 = from the input manifest, else 250
};

struct EvaluateOptions {
  std::string examples_file;
  std::string model = "all";
  int folds = 5;
  std::uint64_t seed = 1;
  std::string report_prefix;
};

struct ReportOptions {
  std::string run_dir;
  std::string format = "csv";
};

// Each command throws on failure: config_error for bad invocations,
// parse_error/data_error for bad inputs, model_error for training failures.
// The CLI maps those to exit codes 1, 2, and 3.
void cmd_simulate(const SimulateOptions& opt, std::ostream& log);
void cmd_featurize(const FeaturizeOptions& opt, std::ostream& log);
void cmd_evaluate(const EvaluateOptions& opt, std::ostream& log);
void cmd_report(const ReportOptions& opt, std::ostream& log);

// cfr_subj01_hydrated_sess03.csv and friends.
std::string session_file_name(std::uint32_t subject_id, Label label, std::uint32_t session_id);

}  // namespace cfrsense
