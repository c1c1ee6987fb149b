#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rfim/iqcore/iq_segment.hpp"

namespace rfim::wave {

enum class WaveformKind { dvbs2_like, lte_like, umts_like, gsm_like, tone, awgn };

std::string_view to_string(WaveformKind kind);
std::optional<WaveformKind> parse_kind(std::string_view name);

/// Class label used in datasets: DVBS2, LTE, UMTS, GSM, TONE, AWGN.
std::string_view class_label(WaveformKind kind);

/// Surrogate waveform description. Only the fields relevant to `kind`
/// are read; defaults are the desk-scale air-interface shapes.
struct WaveformSpec {
  WaveformKind kind = WaveformKind::dvbs2_like;
  std::size_t num_samples = 512;
  double sample_rate_hz = 50e6;
  std::uint64_t seed = 0;

  // dvbs2_like (RRC-shaped QPSK) and gsm_like share samples_per_symbol.
  std::size_t samples_per_symbol = 4;
  double rolloff = 0.25;
  std::size_t filter_span_symbols = 8;  // RRC taps on each side, in symbols

  // lte_like: CP-OFDM, DC bin left empty.
  std::size_t fft_size = 128;
  std::size_t active_subcarriers = 64;
  std::size_t cyclic_prefix = 9;
  std::size_t tx_filter_taps = 63;

  // umts_like: DS-spread QPSK, RRC chip shaping.
  std::size_t spreading_factor = 8;
  std::size_t samples_per_chip = 2;
  double chip_rolloff = 0.22;

  // gsm_like: GMSK.
  double bt = 0.3;

  // tone
  double tone_offset_hz = 0.0;
};

/// Throws std::invalid_argument when the spec is inconsistent or its
/// occupied bandwidth exceeds the sample rate.
void validate(const WaveformSpec& spec);

/// Unit-mean-power samples, bitwise deterministic in the spec.
IqSegment generate(const WaveformSpec& spec);

/// Root-raised-cosine taps, 2 * span * sps + 1 long, unit energy.
std::vector<double> rrc_taps(double rolloff, std::size_t samples_per_symbol, std::size_t span_symbols);

}  // namespace rfim::wave
