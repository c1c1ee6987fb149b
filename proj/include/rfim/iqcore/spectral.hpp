#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rfim/iqcore/iq_segment.hpp"

namespace rfim {

inline constexpr double kPsdFloorDb = -300.0;

struct PsdEstimate {
  std::vector<double> frequencies_hz;  // strictly increasing, centred on DC
  std::vector<double> power_db;
};

/// Forward DFT, X_k = sum_n x_n exp(-j 2 pi k n / N), unnormalized.
std::vector<cdouble> dft(std::span<const cdouble> x);
std::vector<cdouble> dft(const IqSegment& segment);

/// Inverse DFT including the 1/N factor, so idft(dft(x)) == x.
std::vector<cdouble> idft(std::span<const cdouble> spectrum);

/// Hann-windowed averaged periodogram. White noise of variance s2 gives
/// s2 / nfft in every bin before the dB conversion, so bins sum to the
/// mean power. Values below the floor are clamped to kPsdFloorDb.
PsdEstimate welch_psd(const IqSegment& signal, std::size_t nfft = 512,
                      double overlap_fraction = 0.5);

/// `frequency_hz,power_db` CSV, one row per bin, %.12g.
void write_psd_csv(std::ostream& os, const PsdEstimate& psd);

}  // namespace rfim
