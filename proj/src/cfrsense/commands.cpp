#include "cfrsense/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cfrsense/cfr.hpp"
#include "cfrsense/channel.hpp"
#include "cfrsense/error.hpp"
#include "cfrsense/eval.hpp"
#include "cfrsense/io/csv.hpp"
#include "cfrsense/io/manifest.hpp"
#include "cfrsense/ml/model.hpp"

namespace cfrsense {

namespace fs = std::filesystem;

namespace {

io::json ofdm_to_json(const OfdmConfig& cfg) {
  io::json j;
  j["n_subcarriers"] = cfg.n_subcarriers;
  j["cp_len"] = cfg.cp_len;
  j["bits_per_frame"] = cfg.bits_per_frame;
  j["bits_per_symbol"] = cfg.bits_per_symbol;
  j["n_data_subcarriers"] = cfg.n_data_subcarriers;
  j["n_pilot_subcarriers"] = cfg.n_pilot_subcarriers;
  j["sample_rate"] = cfg.sample_rate;
  j["center_frequency"] = cfg.center_frequency;
  return j;
}

io::json filter_to_json(const FilterSpec& f) {
  io::json j;
  j["lowpass_order"] = f.lowpass_order;
  j["lowpass_cutoff_hz"] = f.lowpass_cutoff_hz;
  j["savgol_window"] = f.savgol_window;
  j["savgol_polyorder"] = f.savgol_polyorder;
  return j;
}

std::ofstream must_open(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string session_file_name(std::uint32_t subject_id, Label label, std::uint32_t session_id) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "cfr_subj%02u_%s_sess%02u.csv", subject_id, label_name(label),
                session_id);
  return buf;
}

void cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
  if (opt.out_dir.empty()) throw config_error("simulate: --out directory is required");
  const ScenarioKind kind = kind_from_name(opt.scenario);
  if (opt.subjects < 1) throw config_error("simulate: need at least one subject");
  if (opt.sessions_per_class < 1) throw config_error("simulate: need at least one session");
  if (!(opt.duration_s > 0.0)) throw config_error("simulate: duration must be positive");

  OfdmConfig cfg;
  cfg.master_seed = opt.seed;
  cfg.validate();

  SessionPlan plan = plan_campaign(cfg, kind, opt.subjects, opt.sessions_per_class,
                                   opt.duration_s, opt.separation, opt.snr_db, opt.seed);
  for (auto& sc : plan.sessions) {
    sc.breathing_rate_hz = opt.breathing_rate_hz;
    sc.breathing_depth = opt.breathing_depth;
    sc.validate(cfg);
  }

  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw data_error("cannot create directory '" + opt.out_dir + "': " + ec.message());

  io::json manifest = io::manifest_create("simulate");
  manifest["ofdm"] = ofdm_to_json(cfg);
  io::json campaign;
  campaign["scenario"] = kind_name(kind);
  campaign["subjects"] = opt.subjects;
  campaign["sessions_per_class"] = opt.sessions_per_class;
  campaign["duration_s"] = opt.duration_s;
  campaign["separation"] = opt.separation;
  campaign["snr_db"] = opt.snr_db;
  campaign["breathing_rate_hz"] = opt.breathing_rate_hz;
  campaign["breathing_depth"] = opt.breathing_depth;
  campaign["n_taps"] = plan.sessions.front().n_taps;
  manifest["campaign"] = campaign;
  manifest["seeds"]["master"] = opt.seed;

  for (const ChannelScenario& sc : plan.sessions) {
    const std::string name = session_file_name(sc.subject_id, sc.hydration_label, sc.session_id);
    const fs::path path = fs::path(opt.out_dir) / name;
    {
      auto out = must_open(path);
      io::CfrCsvWriter writer(out, cfg.n_subcarriers);
      simulate_session_stream(cfg, sc, plan.duration_s, [&](const FramePair& pair) {
        CfrSnapshot snap = estimate_cfr(pair.tx, pair.rx, cfg);
        snap.frame_index = pair.tx.frame_index;
        snap.subject_id = sc.subject_id;
        snap.session_id = sc.session_id;
        snap.label = sc.hydration_label;
        writer.write(snap);
      });
      if (!out) throw data_error("failed writing '" + path.string() + "'");
    }
    io::manifest_add_file(manifest, opt.out_dir, name);
    log << "wrote " << path.string() << "\n";
  }

  io::write_manifest(manifest, (fs::path(opt.out_dir) / "manifest.json").string());
  log << "wrote " << (fs::path(opt.out_dir) / "manifest.json").string() << "\n";
}

void cmd_featurize(const FeaturizeOptions& opt, std::ostream& log) {
  if (opt.in_dir.empty()) throw config_error("featurize: --in directory is required");
  if (opt.out_file.empty()) throw config_error("featurize: --out file is required");
  if (!fs::is_directory(opt.in_dir))
    throw data_error("featurize: '" + opt.in_dir + "' is not a directory");

  std::vector<std::string> inputs;
  double rate = opt.snapshot_rate_hz;
  const fs::path manifest_path = fs::path(opt.in_dir) / "manifest.json";
  if (fs::exists(manifest_path)) {
    const io::json m = io::read_manifest(manifest_path.string());
    for (const io::json& f : m.at("files")) {
      const auto p = f.at("path").get<std::string>();
      if (p.size() > 4 && p.substr(p.size() - 4) == ".csv") inputs.push_back(p);
    }
    if (rate == 0.0 && m.contains("ofdm")) {
      const auto& o = m.at("ofdm");
      OfdmConfig cfg;
      cfg.n_subcarriers = o.at("n_subcarriers").get<std::uint32_t>();
      cfg.cp_len = o.at("cp_len").get<std::uint32_t>();
      cfg.sample_rate = o.at("sample_rate").get<double>();
      rate = cfg.frames_per_second();
    }
  } else {
    for (const auto& entry : fs::directory_iterator(opt.in_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".csv")
        inputs.push_back(entry.path().filename().string());
    std::sort(inputs.begin(), inputs.end());
  }
  if (rate == 0.0) {
    rate = OfdmConfig{}.frames_per_second();
    log << "note: no input manifest; assuming " << rate << " snapshots/s\n";
  }
  if (inputs.empty()) throw data_error("featurize: no CFR csv files under '" + opt.in_dir + "'");

  std::vector<LabeledExample> examples;
  std::size_t rejected = 0, seen = 0;
  std::vector<std::string> warnings;
  for (const std::string& name : inputs) {
    auto snaps = io::read_cfr_csv((fs::path(opt.in_dir) / name).string());
    seen += snaps.size();
    RejectResult kept = reject_artifacts(std::move(snaps), opt.z_threshold);
    rejected += kept.n_rejected;
    FeaturizeResult feats = featurize(kept.kept, opt.filter, rate, opt.window_frames);
    examples.insert(examples.end(), feats.examples.begin(), feats.examples.end());
    warnings.insert(warnings.end(), feats.warnings.begin(), feats.warnings.end());
  }

  io::write_examples_csv(examples, opt.out_file);
  log << "artifact rejection removed " << rejected << " of " << seen << " frames\n";
  for (const auto& w : warnings) log << "warning: " << w << "\n";
  log << "wrote " << examples.size() << " examples to " << opt.out_file << "\n";

  io::json manifest = io::manifest_create("featurize");
  manifest["filter"] = filter_to_json(opt.filter);
  manifest["window_frames"] = opt.window_frames;
  manifest["z_threshold"] = opt.z_threshold;
  manifest["snapshot_rate_hz"] = rate;
  manifest["input_dir"] = opt.in_dir;
  manifest["inputs"] = inputs;
  manifest["frames_rejected"] = rejected;
  const fs::path out_path(opt.out_file);
  io::manifest_add_file(manifest, out_path.parent_path().empty()
                                      ? std::string(".")
                                      : out_path.parent_path().string(),
                        out_path.filename().string());
  const std::string manifest_out = opt.out_file + ".manifest.json";
  io::write_manifest(manifest, manifest_out);
  log << "wrote " << manifest_out << "\n";
}

void cmd_evaluate(const EvaluateOptions& opt, std::ostream& log) {
  if (opt.examples_file.empty()) throw config_error("evaluate: --examples file is required");
  if (opt.report_prefix.empty()) throw config_error("evaluate: --report prefix is required");
  if (opt.folds < 2) throw config_error("evaluate: --folds must be >= 2");

  std::vector<std::string> variants;
  if (opt.model == "all") {
    variants = ml::catalog();
  } else {
    if (!ml::in_catalog(opt.model)) {
      std::ostringstream msg;
      msg << "evaluate: unknown model variant '" << opt.model << "'; catalog:";
      for (const auto& v : ml::catalog()) msg << ' ' << v;
      throw config_error(msg.str());
    }
    variants.push_back(opt.model);
  }

  const auto examples = io::read_examples_csv(opt.examples_file);
  if (examples.empty()) throw data_error("evaluate: no examples in '" + opt.examples_file + "'");

  std::vector<CvReport> reports;
  for (const std::string& v : variants) {
    reports.push_back(cross_validate(examples, v, opt.folds, opt.seed));
    const CvReport& r = reports.back();
    log << r.variant << ": mean " << io::format_g9(r.mean_accuracy) << "%, pooled "
        << io::format_g9(r.pooled_accuracy) << "%\n";
  }

  const std::string acc_path = opt.report_prefix + "_accuracy.csv";
  {
    auto out = must_open(acc_path);
    out << "variant,mean_accuracy";
    for (int f = 1; f <= opt.folds; ++f) out << ",fold_" << f;
    out << '\n';
    for (const CvReport& r : reports) {
      out << r.variant << ',' << io::format_g9(r.mean_accuracy);
      for (double a : r.fold_accuracies) out << ',' << io::format_g9(a);
      out << '\n';
    }
  }

  const std::string conf_path = opt.report_prefix + "_confusion.csv";
  {
    auto out = must_open(conf_path);
    out << "variant,tp,tn,fp,fn\n";
    for (const CvReport& r : reports)
      out << r.variant << ',' << r.pooled.tp << ',' << r.pooled.tn << ',' << r.pooled.fp << ','
          << r.pooled.fn << '\n';
  }

  const std::string cmp_path = opt.report_prefix + "_comparison.csv";
  {
    auto out = must_open(cmp_path);
    out << "method,accuracy_pct,kind\n";
    for (const BaselineEntry& b : baseline_table())
      out << b.method << ',' << io::format_g9(b.accuracy_pct) << ',' << b.kind << '\n';
    for (const CvReport& r : reports)
      out << r.variant << ',' << io::format_g9(r.pooled_accuracy) << ",this-run\n";
  }

  io::json manifest = io::manifest_create("evaluate");
  manifest["examples_file"] = opt.examples_file;
  manifest["dataset_sha256"] = reports.front().dataset_fingerprint;
  manifest["folds"] = opt.folds;
  manifest["seeds"]["master"] = opt.seed;
  io::json models = io::json::array();
  for (const auto& v : variants) models.push_back(v);
  manifest["models"] = std::move(models);
  const fs::path prefix(opt.report_prefix);
  const std::string base =
      prefix.parent_path().empty() ? std::string(".") : prefix.parent_path().string();
  for (const std::string& p : {acc_path, conf_path, cmp_path})
    io::manifest_add_file(manifest, base, fs::path(p).filename().string());
  const std::string manifest_out = opt.report_prefix + "_manifest.json";
  io::write_manifest(manifest, manifest_out);
  for (const std::string& p : {acc_path, conf_path, cmp_path, manifest_out})
    log << "wrote " << p << "\n";
}

void cmd_report(const ReportOptions& opt, std::ostream& log) {
  if (opt.run_dir.empty()) throw config_error("report: --run directory is required");
  if (opt.format != "csv") throw config_error("report: unsupported format '" + opt.format + "'");
  if (!fs::is_directory(opt.run_dir))
    throw data_error("report: '" + opt.run_dir + "' is not a directory");

  std::vector<std::string> manifest_files;
  for (const auto& entry : fs::directory_iterator(opt.run_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() >= 13 &&
        name.substr(name.size() - 13) == "manifest.json")
      manifest_files.push_back(name);
  }
  std::sort(manifest_files.begin(), manifest_files.end());
  if (manifest_files.empty())
    throw data_error("report: no manifests under '" + opt.run_dir + "'");

  std::vector<std::string> accuracy_files;
  for (const std::string& name : manifest_files) {
    const io::json m = io::read_manifest((fs::path(opt.run_dir) / name).string());
    for (const io::FileCheck& check : io::manifest_verify_files(m, opt.run_dir)) {
      if (!check.ok)
        throw data_error("report: hash mismatch for '" + check.path + "' listed in " + name);
      log << "verified " << check.path << "\n";
      if (check.path.size() > 13 &&
          check.path.substr(check.path.size() - 13) == "_accuracy.csv")
        accuracy_files.push_back(check.path);
    }
  }

  const fs::path summary_path = fs::path(opt.run_dir) / "report_summary.csv";
  auto out = must_open(summary_path);
  out << "source,variant,mean_accuracy\n";
  std::size_t rows = 0;
  for (const std::string& name : accuracy_files) {
    std::ifstream in(fs::path(opt.run_dir) / name, std::ios::binary);
    if (!in) throw data_error("report: cannot open '" + name + "'");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::size_t c1 = line.find(',');
      const std::size_t c2 = line.find(',', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw parse_error("report: malformed accuracy row in '" + name + "'", 0);
      out << name << ',' << line.substr(0, c1) << ',' << line.substr(c1 + 1, c2 - c1 - 1)
          << '\n';
      ++rows;
    }
  }
  out.close();
  if (!out) throw data_error("failed writing '" + summary_path.string() + "'");

  io::json manifest = io::manifest_create("report");
  manifest["inputs"] = manifest_files;
  io::manifest_add_file(manifest, opt.run_dir, "report_summary.csv");
  io::write_manifest(manifest, (fs::path(opt.run_dir) / "report_manifest.json").string());
  log << "report_summary.csv: " << rows << " variant rows\n";
}

}  // namespace cfrsense
