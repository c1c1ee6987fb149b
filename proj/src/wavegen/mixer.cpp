#include "rfim/wavegen/mixer.hpp"

#include <cmath>
#include <stdexcept>

#include "rfim/iqcore/random.hpp"

namespace rfim::wave {

double interference_scale(double intended_power, double interference_power, double sir_db) {
  if (std::isinf(sir_db) && sir_db > 0.0) return 0.0;
  if (!std::isfinite(sir_db)) throw std::invalid_argument("mix: sir_db must be finite or +inf");
  if (!(interference_power > 0.0)) throw std::invalid_argument("mix: interference has zero power");
  return intended_power / (std::pow(10.0, sir_db / 10.0) * interference_power);
}

MixResult mix(const IqSegment& intended, const IqSegment& interference, const MixSpec& spec,
              std::uint64_t seed) {
  if (intended.size() != interference.size()) {
    throw std::invalid_argument("mix: intended and interference lengths differ");
  }
  if (intended.sample_rate_hz() != interference.sample_rate_hz()) {
    throw std::invalid_argument("mix: intended and interference sample rates differ");
  }
  if (!std::isfinite(spec.snr_db)) throw std::invalid_argument("mix: snr_db must be finite");

  const double beta = interference_scale(measure_power(intended).mean_power,
                                         measure_power(interference).mean_power, spec.sir_db);
  const double signal_gain = std::sqrt(std::pow(10.0, spec.snr_db / 10.0));
  const double interference_gain = std::sqrt(beta);

  Rng rng(seed);
  std::vector<cdouble> y(intended.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    y[n] = signal_gain * (intended[n] + interference_gain * interference[n]) + rng.complex_gaussian(1.0);
  }
  return {IqSegment(std::move(y), intended.sample_rate_hz()), beta};
}

IqSegment add_noise(const IqSegment& intended, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_noise: snr_db must be finite");
  const double gain = std::sqrt(std::pow(10.0, snr_db / 10.0));
  Rng rng(seed);
  std::vector<cdouble> y(intended.size());
  for (std::size_t n = 0; n < y.size(); ++n) y[n] = gain * intended[n] + rng.complex_gaussian(1.0);
  return {std::move(y), intended.sample_rate_hz()};
}

}  // namespace rfim::wave
