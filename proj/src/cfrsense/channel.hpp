#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfrsense/ofdm.hpp"

namespace cfrsense {

enum class Label : std::uint8_t { hydrated = 0, dehydrated = 1 };

const char* label_name(Label l);
Label label_from_name(const std::string& name);  // throws data_error

enum class ScenarioKind : std::uint8_t { chest = 0, hand = 1 };

const char* kind_name(ScenarioKind k);
ScenarioKind kind_from_name(const std::string& name);  // throws config_error

// One recording of one subject. The body channel is a short tap-delay line:
// per-session complex-Gaussian taps with an exp(-l/2) power profile,
// normalized to unit power, constant within the session. Dehydration shrinks
// tap 0 by (1 - separation) and rotates it by separation*pi/4; the chest
// geometry additionally breathes: tap 0 swells by
// (1 + breathing_depth * sin(2 pi breathing_rate t)).
//
// Base taps are keyed by (seed, subject_id, session_id) only — the label
// enters through the dehydration effect alone — so the hydrated and
// dehydrated recordings with the same ids probe the same underlying channel.
struct ChannelScenario {
  ScenarioKind kind = ScenarioKind::chest;
  Label hydration_label = Label::hydrated;
  double separation = 0.1;      // dimensionless class-difference knob
  double snr_db = 20.0;         // +inf means noiseless
  std::uint32_t n_taps = 4;
  double breathing_rate_hz = 0.25;  // chest only
  double breathing_depth = 0.1;     // chest only, in [0,1)
  std::uint32_t subject_id = 0;
  std::uint32_t session_id = 0;
  std::uint64_t seed = 0;

  void validate(const OfdmConfig& cfg) const;  // throws config_error
};

struct ChannelRealization {
  std::vector<cplx> taps;
  std::uint64_t frame_index = 0;
};

// Deterministic channel for one frame of a session.
ChannelRealization draw_channel(const ChannelScenario& sc, std::uint64_t frame_index,
                                double frames_per_second);

// Base taps before the class effect and breathing (unit power). Exposed for
// calibration tests.
std::vector<cplx> base_taps(const ChannelScenario& sc);

// Linear convolution of the frame with the taps, truncated to the frame
// length, plus complex AWGN calibrated so that
// (average signal power) / (noise power) = 10^(snr_db/10).
// snr_db = +inf adds no noise.
TimeFrame apply_channel(const TimeFrame& frame, const ChannelRealization& ch,
                        double snr_db, std::uint64_t noise_seed);

struct FramePair {
  TimeFrame tx;
  TimeFrame rx;
};

// All frame pairs of one session: duration_s * frames_per_second frames,
// each with its own bit stream and noise stream.
std::vector<FramePair> simulate_session(const OfdmConfig& cfg, const ChannelScenario& sc,
                                        double duration_s);

// Streaming variant: invokes sink per frame pair without retaining them.
void simulate_session_stream(const OfdmConfig& cfg, const ChannelScenario& sc,
                             double duration_s,
                             const std::function<void(const FramePair&)>& sink);

// Campaign layout mirroring the experiment structure: for every subject and
// both class labels, sessions_per_class sessions. Ordering is
// subject-major, hydrated before dehydrated, session ascending.
struct SessionPlan {
  OfdmConfig cfg;
  double duration_s = 30.0;
  std::vector<ChannelScenario> sessions;
};

SessionPlan plan_campaign(const OfdmConfig& cfg, ScenarioKind kind,
                          std::uint32_t n_subjects, std::uint32_t sessions_per_class,
                          double duration_s, double separation, double snr_db,
                          std::uint64_t seed);

}  // namespace cfrsense
