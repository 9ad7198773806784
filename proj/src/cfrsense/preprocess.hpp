#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cfrsense/cfr.hpp"
#include "cfrsense/channel.hpp"

namespace cfrsense {

struct FilterSpec {
  int lowpass_order = 4;
  double lowpass_cutoff_hz = 5.0;
  int savgol_window = 11;
  int savgol_polyorder = 3;

  void validate(double snapshot_rate_hz) const;
};

struct LabeledExample {
  std::vector<double> features;
  Label label = Label::hydrated;
  int subject_id = 0;
  int session_id = 0;
  int window_index = 0;
};

struct RejectResult {
  std::vector<CfrSnapshot> kept;
  std::size_t n_rejected = 0;
};

// Drops every snapshot whose magnitude on any subcarrier sits more than
// z_threshold robust standard deviations (1.4826 * MAD) away from that
// session's per-subcarrier median.
RejectResult reject_artifacts(std::vector<CfrSnapshot> snapshots, double z_threshold = 6.0);

struct FeaturizeResult {
  std::vector<LabeledExample> examples;
  std::vector<std::string> warnings;
};

// Per session: filter each subcarrier's magnitude series (zero-phase lowpass,
// then Savitzky-Golay), cut it into non-overlapping windows of window_frames
// snapshots, and emit one example per window whose features are the
// per-subcarrier window means. Sessions too short for a single window are
// skipped with a warning.
FeaturizeResult featurize(const std::vector<CfrSnapshot>& snapshots, const FilterSpec& filt,
                          double snapshot_rate_hz, int window_frames = 125);

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1.0 where the feature had zero spread
};

Standardizer standardize_fit(const std::vector<LabeledExample>& examples);
void standardize_apply(const Standardizer& stats, std::vector<LabeledExample>& examples);

}  // namespace cfrsense
