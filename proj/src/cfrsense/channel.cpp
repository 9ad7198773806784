#include "cfrsense/channel.hpp"

#include <cmath>
#include <limits>

#include "cfrsense/error.hpp"
#include "cfrsense/prng.hpp"

namespace cfrsense {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

const char* label_name(Label l) { return l == Label::hydrated ? "hydrated" : "dehydrated"; }

Label label_from_name(const std::string& name) {
  if (name == "hydrated") return Label::hydrated;
  if (name == "dehydrated") return Label::dehydrated;
  throw data_error("unknown label token: '" + name + "'");
}

const char* kind_name(ScenarioKind k) { return k == ScenarioKind::chest ? "chest" : "hand"; }

ScenarioKind kind_from_name(const std::string& name) {
  if (name == "chest") return ScenarioKind::chest;
  if (name == "hand") return ScenarioKind::hand;
  throw config_error("unknown scenario kind: '" + name + "'");
}

void ChannelScenario::validate(const OfdmConfig& cfg) const {
  if (n_taps == 0) throw config_error("ChannelScenario: n_taps must be positive");
  if (n_taps > cfg.cp_len)
    throw config_error("ChannelScenario: channel memory (" + std::to_string(n_taps) +
                       " taps) exceeds the cyclic prefix (" + std::to_string(cfg.cp_len) + ")");
  if (!(breathing_depth >= 0.0 && breathing_depth < 1.0))
    throw config_error("ChannelScenario: breathing_depth must lie in [0,1)");
  if (!std::isfinite(separation) || separation < 0.0)
    throw config_error("ChannelScenario: separation must be finite and >= 0");
}

std::vector<cplx> base_taps(const ChannelScenario& sc) {
  // Label deliberately excluded from the key: both recordings of a session
  // pair share these taps.
  rng::Stream gen(rng::derive(sc.seed, sc.subject_id, sc.session_id, rng::kTagTaps), 0);
  std::vector<cplx> taps(sc.n_taps);
  double power = 0.0;
  for (std::uint32_t l = 0; l < sc.n_taps; ++l) {
    double g0, g1;
    gen.next_gaussian_pair(g0, g1);
    const double sigma = std::sqrt(std::exp(-0.5 * l) / 2.0);
    taps[l] = {sigma * g0, sigma * g1};
    power += std::norm(taps[l]);
  }
  const double inv = 1.0 / std::sqrt(power);
  for (auto& t : taps) t *= inv;
  return taps;
}

ChannelRealization draw_channel(const ChannelScenario& sc, std::uint64_t frame_index,
                                double frames_per_second) {
  ChannelRealization ch;
  ch.frame_index = frame_index;
  ch.taps = base_taps(sc);

  if (sc.hydration_label == Label::dehydrated && sc.separation != 0.0) {
    const double scale = 1.0 - sc.separation;
    const double phase = sc.separation * kPi / 4.0;
    ch.taps[0] *= cplx(scale * std::cos(phase), scale * std::sin(phase));
  }
  if (sc.kind == ScenarioKind::chest && sc.breathing_depth != 0.0) {
    const double t = static_cast<double>(frame_index) / frames_per_second;
    ch.taps[0] *= 1.0 + sc.breathing_depth * std::sin(2.0 * kPi * sc.breathing_rate_hz * t);
  }
  return ch;
}

TimeFrame apply_channel(const TimeFrame& frame, const ChannelRealization& ch,
                        double snr_db, std::uint64_t noise_seed) {
  const std::size_t n = frame.samples.size();
  const std::size_t taps = ch.taps.size();

  TimeFrame out;
  out.frame_index = frame.frame_index;
  out.samples.assign(n, cplx(0.0, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    cplx acc(0.0, 0.0);
    const std::size_t lmax = std::min(taps - 1, t);
    for (std::size_t l = 0; l <= lmax; ++l) acc += ch.taps[l] * frame.samples[t - l];
    out.samples[t] = acc;
  }

  if (std::isinf(snr_db)) return out;

  double sig_power = 0.0;
  for (const auto& s : out.samples) sig_power += std::norm(s);
  sig_power /= static_cast<double>(n);
  const double noise_var = sig_power / std::pow(10.0, snr_db / 10.0);
  const double comp_sigma = std::sqrt(noise_var / 2.0);

  rng::Stream gen(noise_seed, 0);
  for (auto& s : out.samples) {
    double g0, g1;
    gen.next_gaussian_pair(g0, g1);
    s += cplx(comp_sigma * g0, comp_sigma * g1);
  }
  return out;
}

void simulate_session_stream(const OfdmConfig& cfg, const ChannelScenario& sc,
                             double duration_s,
                             const std::function<void(const FramePair&)>& sink) {
  cfg.validate();
  sc.validate(cfg);
  if (duration_s <= 0.0) throw config_error("simulate_session: duration must be positive");

  const double fps = cfg.frames_per_second();
  const auto n_frames = static_cast<std::uint64_t>(std::llround(duration_s * fps));
  const std::uint64_t session_key =
      rng::derive(sc.seed, sc.subject_id, sc.session_id,
                  static_cast<std::uint64_t>(sc.hydration_label), rng::kTagSession);
  const std::uint64_t bits_seed = rng::derive(session_key, rng::kTagBits);

  FramePair pair;
  for (std::uint64_t i = 0; i < n_frames; ++i) {
    const auto bits = rng::prng_bits(bits_seed, i, cfg.bits_per_frame);
    pair.tx = assemble_frame(cfg, bits, i);
    const ChannelRealization ch = draw_channel(sc, i, fps);
    pair.rx = apply_channel(pair.tx, ch, sc.snr_db, rng::derive(session_key, rng::kTagNoise, i));
    sink(pair);
  }
}

std::vector<FramePair> simulate_session(const OfdmConfig& cfg, const ChannelScenario& sc,
                                        double duration_s) {
  std::vector<FramePair> pairs;
  simulate_session_stream(cfg, sc, duration_s,
                          [&](const FramePair& p) { pairs.push_back(p); });
  return pairs;
}

SessionPlan plan_campaign(const OfdmConfig& cfg, ScenarioKind kind,
                          std::uint32_t n_subjects, std::uint32_t sessions_per_class,
                          double duration_s, double separation, double snr_db,
                          std::uint64_t seed) {
  if (n_subjects == 0 || sessions_per_class == 0)
    throw config_error("plan_campaign: counts must be positive");
  if (duration_s <= 0.0) throw config_error("plan_campaign: duration must be positive");

  SessionPlan plan;
  plan.cfg = cfg;
  plan.duration_s = duration_s;
  for (std::uint32_t subj = 0; subj < n_subjects; ++subj) {
    for (Label label : {Label::hydrated, Label::dehydrated}) {
      for (std::uint32_t sess = 0; sess < sessions_per_class; ++sess) {
        ChannelScenario sc;
        sc.kind = kind;
        sc.hydration_label = label;
        sc.separation = separation;
        sc.snr_db = snr_db;
        sc.subject_id = subj;
        sc.session_id = sess;
        sc.seed = seed;
        sc.validate(cfg);
        plan.sessions.push_back(sc);
      }
    }
  }
  return plan;
}

}  // namespace cfrsense
