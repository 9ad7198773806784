#pragma once

#include <cstdint>
#include <vector>

#include "cfrsense/channel.hpp"
#include "cfrsense/ofdm.hpp"

namespace cfrsense {

struct CfrSnapshot {
  std::vector<cplx> h;  // one estimate per subcarrier
  std::uint64_t frame_index = 0;
  std::uint32_t session_id = 0;
  std::uint32_t subject_id = 0;
  Label label = Label::hydrated;
};

// Per-subcarrier least-squares estimate h_i = y_i / x_i. No smoothing here;
// denoising belongs to the preprocessing stage.
CfrSnapshot estimate_cfr(const TimeFrame& tx, const TimeFrame& rx, const OfdmConfig& cfg);

// One snapshot per frame pair, metadata stamped from the scenario.
std::vector<CfrSnapshot> cfr_stream(const OfdmConfig& cfg, const ChannelScenario& sc,
                                    const std::vector<FramePair>& pairs);

}  // namespace cfrsense
