#pragma once

#include <cstdint>
#include <limits>

#include "rfim/iqcore/iq_segment.hpp"

namespace rfim::wave {

inline constexpr double kNoInterference = std::numeric_limits<double>::infinity();

/// Channel parameters: y = sqrt(rho) (x + sqrt(beta) i) + w.
struct MixSpec {
  double snr_db = 20.0;
  double sir_db = kNoInterference;  // +inf disables the interferer
  double beta = 0.0;                // filled in by mix()
};

struct MixResult {
  IqSegment received;
  double beta;
};

/// Interferer gain that realizes `sir_db` for the measured powers.
double interference_scale(double intended_power, double interference_power, double sir_db);

/// Mixes the intended signal, the scaled interferer and unit-power complex
/// AWGN drawn from `seed`. Both segments must agree in length and rate.
MixResult mix(const IqSegment& intended, const IqSegment& interference, const MixSpec& spec,
              std::uint64_t seed);

/// Interference-free case: sqrt(rho) x + w.
IqSegment add_noise(const IqSegment& intended, double snr_db, std::uint64_t seed);

}  // namespace rfim::wave
