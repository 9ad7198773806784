#include "cfrsense/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "cfrsense/dsp/butterworth.hpp"
#include "cfrsense/dsp/savgol.hpp"
#include "cfrsense/error.hpp"

namespace cfrsense {

namespace {

using SessionKey = std::tuple<int, int, int>;  // subject, session, label

SessionKey key_of(const CfrSnapshot& s) {
  return {s.subject_id, s.session_id, static_cast<int>(s.label)};
}

// Indices of the snapshots belonging to each recorded session, in input order,
// with the sessions themselves ordered by first appearance.
std::vector<std::vector<std::size_t>> group_sessions(const std::vector<CfrSnapshot>& snaps) {
  std::map<SessionKey, std::size_t> slot;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(key_of(snaps[i]), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
  return 0.5 * (v[mid - 1] + hi);
}

}  // namespace

void FilterSpec::validate(double snapshot_rate_hz) const {
  if (lowpass_order < 1) throw config_error("filter: lowpass order must be >= 1");
  if (!(lowpass_cutoff_hz > 0.0) || !(lowpass_cutoff_hz < snapshot_rate_hz / 2.0))
    throw config_error("filter: lowpass cutoff must lie in (0, rate/2)");
  if (savgol_window < 1 || savgol_window % 2 == 0)
    throw config_error("filter: savgol window must be odd");
  if (savgol_polyorder < 0 || savgol_polyorder >= savgol_window)
    throw config_error("filter: savgol polyorder must be < window");
}

RejectResult reject_artifacts(std::vector<CfrSnapshot> snapshots, double z_threshold) {
  if (!(z_threshold > 0.0)) throw config_error("reject_artifacts: threshold must be positive");
  RejectResult out;
  if (snapshots.empty()) return out;

  const std::size_t n_sub = snapshots.front().h.size();
  for (const auto& s : snapshots)
    if (s.h.size() != n_sub) throw data_error("reject_artifacts: mixed subcarrier counts");

  std::vector<char> keep(snapshots.size(), 1);
  for (const auto& group : group_sessions(snapshots)) {
    std::vector<double> med(n_sub), sigma(n_sub);
    std::vector<double> col(group.size());
    for (std::size_t k = 0; k < n_sub; ++k) {
      for (std::size_t j = 0; j < group.size(); ++j) col[j] = std::abs(snapshots[group[j]].h[k]);
      std::vector<double> sorted = col;
      med[k] = median_inplace(sorted);
      for (std::size_t j = 0; j < group.size(); ++j) sorted[j] = std::fabs(col[j] - med[k]);
      sigma[k] = std::max(1.4826 * median_inplace(sorted), 1e-12);
    }
    for (std::size_t j : group) {
      for (std::size_t k = 0; k < n_sub; ++k) {
        if (std::fabs(std::abs(snapshots[j].h[k]) - med[k]) > z_threshold * sigma[k]) {
          keep[j] = 0;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (keep[i])
      out.kept.push_back(std::move(snapshots[i]));
    else
      ++out.n_rejected;
  }
  return out;
}

FeaturizeResult featurize(const std::vector<CfrSnapshot>& snapshots, const FilterSpec& filt,
                          double snapshot_rate_hz, int window_frames) {
  filt.validate(snapshot_rate_hz);
  if (window_frames < 1) throw config_error("featurize: window_frames must be >= 1");

  FeaturizeResult out;
  if (snapshots.empty()) return out;

  const std::size_t n_sub = snapshots.front().h.size();
  const std::size_t min_frames =
      std::max({static_cast<std::size_t>(window_frames), static_cast<std::size_t>(filt.savgol_window),
                static_cast<std::size_t>(3 * filt.lowpass_order)});
  const auto sos =
      dsp::butterworth_lowpass(filt.lowpass_order, filt.lowpass_cutoff_hz, snapshot_rate_hz);

  for (const auto& group : group_sessions(snapshots)) {
    const CfrSnapshot& head = snapshots[group.front()];
    if (group.size() < min_frames) {
      out.warnings.push_back("subject " + std::to_string(head.subject_id) + " session " +
                             std::to_string(head.session_id) + " (" + label_name(head.label) +
                             "): " + std::to_string(group.size()) +
                             " frames, too short for one window; skipped");
      continue;
    }

    // filtered[k][t]: subcarrier k's denoised magnitude series.
    std::vector<std::vector<double>> filtered(n_sub);
    std::vector<double> series(group.size());
    for (std::size_t k = 0; k < n_sub; ++k) {
      for (std::size_t t = 0; t < group.size(); ++t)
        series[t] = std::abs(snapshots[group[t]].h[k]);
      filtered[k] =
          dsp::savgol_filter(dsp::filtfilt(sos, series), filt.savgol_window, filt.savgol_polyorder);
    }

    const std::size_t n_windows = group.size() / static_cast<std::size_t>(window_frames);
    for (std::size_t w = 0; w < n_windows; ++w) {
      LabeledExample ex;
      ex.label = head.label;
      ex.subject_id = head.subject_id;
      ex.session_id = head.session_id;
      ex.window_index = static_cast<int>(w);
      ex.features.resize(n_sub);
      const std::size_t begin = w * static_cast<std::size_t>(window_frames);
      for (std::size_t k = 0; k < n_sub; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < static_cast<std::size_t>(window_frames); ++t)
          acc += filtered[k][begin + t];
        ex.features[k] = acc / static_cast<double>(window_frames);
      }
      out.examples.push_back(std::move(ex));
    }
  }
  return out;
}

Standardizer standardize_fit(const std::vector<LabeledExample>& examples) {
  if (examples.empty()) throw data_error("standardize: no examples");
  const std::size_t d = examples.front().features.size();
  for (const auto& ex : examples)
    if (ex.features.size() != d) throw data_error("standardize: mixed feature lengths");

  Standardizer st;
  st.mean.assign(d, 0.0);
  st.scale.assign(d, 1.0);
  const double n = static_cast<double>(examples.size());
  for (const auto& ex : examples)
    for (std::size_t j = 0; j < d; ++j) st.mean[j] += ex.features[j];
  for (std::size_t j = 0; j < d; ++j) st.mean[j] /= n;

  if (examples.size() > 1) {
    std::vector<double> ss(d, 0.0);
    for (const auto& ex : examples)
      for (std::size_t j = 0; j < d; ++j) {
        const double dlt = ex.features[j] - st.mean[j];
        ss[j] += dlt * dlt;
      }
    for (std::size_t j = 0; j < d; ++j) {
      const double sd = std::sqrt(ss[j] / (n - 1.0));
      if (sd > 0.0) st.scale[j] = sd;
    }
  }
  return st;
}

void standardize_apply(const Standardizer& stats, std::vector<LabeledExample>& examples) {
  const std::size_t d = stats.mean.size();
  for (auto& ex : examples) {
    if (ex.features.size() != d) throw data_error("standardize: feature length mismatch");
    for (std::size_t j = 0; j < d; ++j)
      ex.features[j] = (ex.features[j] - stats.mean[j]) / stats.scale[j];
  }
}

}  // namespace cfrsense
