#include "cfrsense/cfr.hpp"

#include <cmath>

#include "cfrsense/error.hpp"

namespace cfrsense {

CfrSnapshot estimate_cfr(const TimeFrame& tx, const TimeFrame& rx, const OfdmConfig& cfg) {
  const FreqSymbolVector x = disassemble_frame(cfg, tx);
  const FreqSymbolVector y = disassemble_frame(cfg, rx);

  CfrSnapshot snap;
  snap.frame_index = tx.frame_index;
  snap.h.resize(cfg.n_subcarriers);
  for (std::uint32_t i = 0; i < cfg.n_subcarriers; ++i) {
    // QPSK symbols are unit magnitude; anything near zero means corrupt input.
    if (std::norm(x[i]) < 1e-12)
      throw data_error("estimate_cfr: transmitted symbol on subcarrier " +
                       std::to_string(i) + " is zero");
    snap.h[i] = y[i] / x[i];
  }
  return snap;
}

std::vector<CfrSnapshot> cfr_stream(const OfdmConfig& cfg, const ChannelScenario& sc,
                                    const std::vector<FramePair>& pairs) {
  if (pairs.empty()) return {};
  std::vector<CfrSnapshot> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    try {
      CfrSnapshot snap = estimate_cfr(p.tx, p.rx, cfg);
      snap.session_id = sc.session_id;
      snap.subject_id = sc.subject_id;
      snap.label = sc.hydration_label;
      out.push_back(std::move(snap));
    } catch (const data_error& e) {
      throw data_error(std::string(e.what()) + " (frame " +
                       std::to_string(p.tx.frame_index) + ")");
    }
  }
  return out;
}

}  // namespace cfrsense
