#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rfim/iqcore/iq_segment.hpp"
#include "rfim/wavegen/waveform.hpp"

namespace rfim::wave {

inline constexpr std::string_view kCleanLabel = "NONE";

struct LabeledSegment {
  IqSegment segment;
  std::string label;  // class_label() of the interferer, or "NONE"
  double sir_db;      // +inf for interference-free segments
  std::uint64_t seed;
};

struct LabeledDataset {
  std::vector<LabeledSegment> items;

  std::size_t size() const { return items.size(); }
  std::vector<IqSegment> segments() const;
};

/// Mixed segments cycling through `classes` in order at each SIR point:
/// for every SIR, `segments_per_point` rounds of (class 0, class 1, ...).
/// Segment k uses seed derive_seed(seed, k); intended, interferer and noise
/// draw children 1, 2 and 3 of it. Segment length and sample rate come from
/// `intended`.
LabeledDataset build_dataset(std::span<const WaveformSpec> classes, const WaveformSpec& intended,
                             std::span<const double> sir_list_db, std::size_t segments_per_point,
                             std::uint64_t seed, double snr_db = 20.0);

/// Interference-free segments (intended + noise), labelled "NONE".
LabeledDataset build_clean_dataset(const WaveformSpec& intended, std::size_t count, std::uint64_t seed,
                                   double snr_db = 20.0);

/// Deterministic Fisher-Yates shuffle.
void shuffle(LabeledDataset& dataset, std::uint64_t seed);

/// Writes seg_NNNNNN.cf32 files plus manifest.json, a JSON array of
/// {class, sir_db, seed, file} records; +inf SIR is written as "inf".
void write_dataset(const std::filesystem::path& dir, const LabeledDataset& dataset);

/// Reads a manifest written by write_dataset; file paths resolve
/// relative to the manifest's directory.
LabeledDataset read_dataset(const std::filesystem::path& manifest);

}  // namespace rfim::wave
