#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "cfrsense/commands.hpp"
#include "cfrsense/error.hpp"

namespace {

// Exit codes: 0 success, 1 bad invocation, 2 bad data, 3 runtime failure.
enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfrsense: simulated RF channel-response hydration sensing"};
  app.require_subcommand(1);

  cfrsense::SimulateOptions sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "generate per-session CFR csv files");
  c_sim->add_option("--out", sim.out_dir, "output directory")->required();
  c_sim->add_option("--scenario", sim.scenario, "chest or hand")->capture_default_str();
  c_sim->add_option("--subjects", sim.subjects, "number of subjects")->capture_default_str();
  c_sim->add_option("--sessions-per-class", sim.sessions_per_class,
                    "sessions per subject per class")
      ->capture_default_str();
  c_sim->add_option("--duration-s", sim.duration_s, "seconds per session")
      ->capture_default_str();
  c_sim->add_option("--separation", sim.separation, "class separation in [0,1]")
      ->capture_default_str();
  c_sim->add_option("--snr-db", sim.snr_db, "per-frame average SNR in dB")
      ->capture_default_str();
  c_sim->add_option("--breathing-rate-hz", sim.breathing_rate_hz,
                    "chest modulation rate in Hz")
      ->capture_default_str();
  c_sim->add_option("--breathing-depth", sim.breathing_depth, "chest modulation depth")
      ->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "master seed")
      ->envname("CFRSENSE_SEED")
      ->capture_default_str();

  cfrsense::FeaturizeOptions feat;
  CLI::App* c_feat = app.add_subcommand("featurize", "turn CFR csv files into examples");
  c_feat->add_option("--in", feat.in_dir, "directory of CFR csv files")->required();
  c_feat->add_option("--out", feat.out_file, "output examples csv")->required();
  c_feat->add_option("--window-frames", feat.window_frames, "snapshots per example window")
      ->capture_default_str();
  c_feat->add_option("--lowpass-hz", feat.filter.lowpass_cutoff_hz, "lowpass cutoff in Hz")
      ->capture_default_str();
  c_feat->add_option("--lowpass-order", feat.filter.lowpass_order, "lowpass order")
      ->capture_default_str();
  c_feat->add_option("--savgol-window", feat.filter.savgol_window,
                     "smoothing window length (odd)")
      ->capture_default_str();
  c_feat->add_option("--savgol-order", feat.filter.savgol_polyorder,
                     "smoothing polynomial order")
      ->capture_default_str();
  c_feat->add_option("--z-threshold", feat.z_threshold, "artifact rejection threshold")
      ->capture_default_str();
  c_feat->add_option("--snapshot-rate", feat.snapshot_rate_hz,
                     "snapshots per second (0 = from input manifest)")
      ->capture_default_str();

  cfrsense::EvaluateOptions ev;
  CLI::App* c_eval = app.add_subcommand("evaluate", "cross-validate classifiers on examples");
  c_eval->add_option("--examples", ev.examples_file, "examples csv")->required();
  c_eval->add_option("--model", ev.model, "variant name, or all")->capture_default_str();
  c_eval->add_option("--folds", ev.folds, "number of folds")->capture_default_str();
  c_eval->add_option("--seed", ev.seed, "evaluation seed")
      ->envname("CFRSENSE_SEED")
      ->capture_default_str();
  c_eval->add_option("--report", ev.report_prefix, "output path prefix")->required();

  cfrsense::ReportOptions rep;
  CLI::App* c_rep = app.add_subcommand("report", "verify a run directory and summarize it");
  c_rep->add_option("--run", rep.run_dir, "run directory")->required();
  c_rep->add_option("--format", rep.format, "output format")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (c_sim->parsed()) cfrsense::cmd_simulate(sim, std::cout);
    if (c_feat->parsed()) cfrsense::cmd_featurize(feat, std::cout);
    if (c_eval->parsed()) cfrsense::cmd_evaluate(ev, std::cout);
    if (c_rep->parsed()) cfrsense::cmd_report(rep, std::cout);
  } catch (const cfrsense::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const cfrsense::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
