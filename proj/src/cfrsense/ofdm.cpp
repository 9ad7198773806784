#include "cfrsense/ofdm.hpp"

#include <cmath>

#include "cfrsense/error.hpp"

namespace cfrsense {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
}

void OfdmConfig::validate() const {
  if (bits_per_symbol != 2) throw config_error("OfdmConfig: only QPSK (2 bits/symbol) is supported");
  if (bits_per_frame != n_subcarriers * bits_per_symbol)
    throw config_error("OfdmConfig: bits_per_frame must equal n_subcarriers * bits_per_symbol");
  if (n_data_subcarriers + n_pilot_subcarriers != n_subcarriers)
    throw config_error("OfdmConfig: data + pilot subcarriers must equal n_subcarriers");
  if (!fft::is_pow2(n_subcarriers)) throw config_error("OfdmConfig: n_subcarriers must be a power of two");
  if (cp_len == 0 || cp_len > n_subcarriers) throw config_error("OfdmConfig: bad cp_len");
  if (sample_rate <= 0) throw config_error("OfdmConfig: sample_rate must be positive");
}

cplx qpsk_map(std::uint8_t b0, std::uint8_t b1) {
  const double re = b1 ? -kInvSqrt2 : kInvSqrt2;
  const double im = b0 ? -kInvSqrt2 : kInvSqrt2;
  return {re, im};
}

std::pair<std::uint8_t, std::uint8_t> qpsk_demap(cplx sym) {
  if (sym.real() == 0.0 && sym.imag() == 0.0)
    throw data_error("qpsk_demap: zero sample is equidistant from all constellation points");
  // Quadrant signs give the nearest point; boundary values go to the
  // non-negative side.
  const std::uint8_t b0 = sym.imag() < 0.0 ? 1 : 0;
  const std::uint8_t b1 = sym.real() < 0.0 ? 1 : 0;
  return {b0, b1};
}

FreqSymbolVector map_bits(const OfdmConfig& cfg, std::span<const std::uint8_t> bits) {
  if (bits.size() != cfg.bits_per_frame)
    throw config_error("map_bits: expected " + std::to_string(cfg.bits_per_frame) +
                       " bits, got " + std::to_string(bits.size()));
  FreqSymbolVector syms(cfg.n_subcarriers);
  for (std::uint32_t k = 0; k < cfg.n_subcarriers; ++k)
    syms[k] = qpsk_map(bits[2 * k], bits[2 * k + 1]);
  return syms;
}

TimeFrame assemble_frame(const OfdmConfig& cfg, std::span<const std::uint8_t> bits,
                         std::uint64_t frame_index) {
  const FreqSymbolVector syms = map_bits(cfg, bits);
  std::vector<cplx> body(cfg.n_subcarriers);
  fft::inverse(syms, body);

  TimeFrame frame;
  frame.frame_index = frame_index;
  frame.samples.resize(cfg.frame_len());
  for (std::uint32_t i = 0; i < cfg.cp_len; ++i)
    frame.samples[i] = body[cfg.n_subcarriers - cfg.cp_len + i];
  for (std::uint32_t i = 0; i < cfg.n_subcarriers; ++i)
    frame.samples[cfg.cp_len + i] = body[i];
  return frame;
}

FreqSymbolVector disassemble_frame(const OfdmConfig& cfg, const TimeFrame& frame) {
  if (frame.samples.size() != cfg.frame_len())
    throw data_error("disassemble_frame: expected frame of " +
                     std::to_string(cfg.frame_len()) + " samples, got " +
                     std::to_string(frame.samples.size()));
  std::span<const cplx> body(frame.samples.data() + cfg.cp_len, cfg.n_subcarriers);
  return fft::forward(body);
}

}  // namespace cfrsense
