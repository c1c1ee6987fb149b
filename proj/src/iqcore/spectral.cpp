#include "rfim/iqcore/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace rfim {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// fftw planning is not thread-safe; execution of an existing plan on new
// arrays is.
fftw_plan plan_for(std::size_t n, int sign) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, PlanPtr> plans;
  std::lock_guard lock(mu);
  auto& slot = plans[{n, sign}];
  if (!slot) {
    std::vector<cdouble> in(n), out(n);
    slot.reset(fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED));
    if (!slot) throw std::runtime_error("dft: fftw planning failed");
  }
  return slot.get();
}

std::vector<cdouble> transform(std::span<const cdouble> x, int sign) {
  if (x.empty()) throw std::invalid_argument("dft: empty input");
  std::vector<cdouble> in(x.begin(), x.end());
  std::vector<cdouble> out(x.size());
  fftw_execute_dft(plan_for(x.size(), sign), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cdouble> dft(std::span<const cdouble> x) { return transform(x, FFTW_FORWARD); }

std::vector<cdouble> dft(const IqSegment& segment) { return dft(segment.samples()); }

std::vector<cdouble> idft(std::span<const cdouble> spectrum) {
  auto out = transform(spectrum, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= inv;
  return out;
}

PsdEstimate welch_psd(const IqSegment& signal, std::size_t nfft, double overlap_fraction) {
  if (nfft == 0) throw std::invalid_argument("welch_psd: nfft must be positive");
  if (nfft > signal.size()) throw std::invalid_argument("welch_psd: nfft longer than signal");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw std::invalid_argument("welch_psd: overlap_fraction must lie in [0, 1)");
  }

  // Periodic Hann window; nfft == 1 degenerates to a rectangular window.
  std::vector<double> window(nfft, 1.0);
  if (nfft > 1) {
    for (std::size_t n = 0; n < nfft; ++n) {
      window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                       static_cast<double>(nfft));
    }
  }
  double window_energy = 0.0;
  for (double w : window) window_energy += w * w;

  const auto overlap = static_cast<std::size_t>(std::llround(overlap_fraction * static_cast<double>(nfft)));
  const std::size_t hop = std::max<std::size_t>(1, nfft - std::min(overlap, nfft - 1));
  const std::size_t count = segment_count(signal.size(), nfft, hop);

  std::vector<double> acc(nfft, 0.0);
  std::vector<cdouble> frame(nfft);
  const auto& x = signal.vector();
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t n = 0; n < nfft; ++n) frame[n] = x[s * hop + n] * window[n];
    const auto spectrum = dft(frame);
    for (std::size_t k = 0; k < nfft; ++k) acc[k] += std::norm(spectrum[k]);
  }

  const double scale = 1.0 / (static_cast<double>(count) * window_energy * static_cast<double>(nfft));
  const double bin_hz = signal.sample_rate_hz() / static_cast<double>(nfft);
  const auto half = static_cast<std::ptrdiff_t>(nfft / 2);

  PsdEstimate psd;
  psd.frequencies_hz.resize(nfft);
  psd.power_db.resize(nfft);
  // fftshift: output index i holds bin (i - half) mod nfft.
  for (std::size_t i = 0; i < nfft; ++i) {
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) - half;
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<std::ptrdiff_t>(nfft)) %
                                                     static_cast<std::ptrdiff_t>(nfft));
    psd.frequencies_hz[i] = static_cast<double>(k) * bin_hz;
    const double p = acc[bin] * scale;
    psd.power_db[i] = p > 0.0 ? std::max(kPsdFloorDb, 10.0 * std::log10(p)) : kPsdFloorDb;
  }
  return psd;
}

void write_psd_csv(std::ostream& os, const PsdEstimate& psd) {
  os << "frequency_hz,power_db\n";
  char line[96];
  for (std::size_t i = 0; i < psd.frequencies_hz.size(); ++i) {
    std::snprintf(line, sizeof line, "%.12g,%.12g\n", psd.frequencies_hz[i], psd.power_db[i]);
    os << line;
  }
}

}  // namespace rfim
