#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cfrsense/fft.hpp"

namespace cfrsense {

// Link parameters. Defaults model a 64-subcarrier QPSK link with a 16-sample
// cyclic prefix at 20 kS/s, i.e. 80-sample frames at 250 frames/s. The
// data/pilot subcarrier split is metadata only: every subcarrier carries a
// pseudo-random symbol the receiver can regenerate, which is what makes
// per-subcarrier estimation possible on all 64 bins.
struct OfdmConfig {
  std::uint32_t n_subcarriers = 64;
  std::uint32_t cp_len = 16;
  std::uint32_t bits_per_frame = 128;
  std::uint32_t bits_per_symbol = 2;  // QPSK
  std::uint32_t n_data_subcarriers = 52;   // metadata
  std::uint32_t n_pilot_subcarriers = 12;  // metadata
  double sample_rate = 20000.0;
  double center_frequency = 5.23e9;  // metadata
  std::uint64_t master_seed = 0;

  std::uint32_t frame_len() const { return n_subcarriers + cp_len; }
  double frames_per_second() const { return sample_rate / frame_len(); }

  // Throws config_error when the invariants are violated.
  void validate() const;
};

struct TimeFrame {
  std::vector<cplx> samples;  // cp_len prefix + n_subcarriers body
  std::uint64_t frame_index = 0;
};

using FreqSymbolVector = std::vector<cplx>;

// Gray-coded QPSK, fixed convention:
// (0,0) -> (+1+j)/sqrt2, (0,1) -> (-1+j)/sqrt2,
// (1,1) -> (-1-j)/sqrt2, (1,0) -> (+1-j)/sqrt2.
cplx qpsk_map(std::uint8_t b0, std::uint8_t b1);

// Nearest constellation point; throws data_error on an exact zero sample.
std::pair<std::uint8_t, std::uint8_t> qpsk_demap(cplx sym);

// Maps bits pairwise onto all subcarriers in index order, inverse-DFT (1/N)
// to the body, prepends the cyclic prefix. With unit-magnitude symbols the
// body energy is exactly 1 under this scaling.
TimeFrame assemble_frame(const OfdmConfig& cfg, std::span<const std::uint8_t> bits,
                         std::uint64_t frame_index);

// Drops the prefix, forward-DFT (unscaled) of the body. Values are returned
// as received, not re-quantized to the constellation.
FreqSymbolVector disassemble_frame(const OfdmConfig& cfg, const TimeFrame& frame);

// Frequency-domain symbols for a bit sequence (the receiver-side regeneration
// of what assemble_frame transmitted).
FreqSymbolVector map_bits(const OfdmConfig& cfg, std::span<const std::uint8_t> bits);

}  // namespace cfrsense
