#pragma once

#include <filesystem>
#include <stdexcept>

#include "rfim/iqcore/iq_segment.hpp"

namespace rfim {

/// Raised for unreadable, truncated or inconsistent IQ captures.
class IqFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Captures are raw interleaved cf32le (I then Q, 8 bytes per sample) with
/// a JSON sidecar at `<path>.json`:
///   {"format":"cf32le","sample_rate_hz":<num>,"num_samples":<num>}
std::filesystem::path sidecar_path(const std::filesystem::path& path);

void write_iq_file(const std::filesystem::path& path, const IqSegment& segment);
IqSegment read_iq_file(const std::filesystem::path& path);

}  // namespace rfim
