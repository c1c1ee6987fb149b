#include "rfim/wavegen/waveform.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rfim/iqcore/random.hpp"
#include "rfim/iqcore/spectral.hpp"

namespace rfim::wave {
namespace {

constexpr double kPi = std::numbers::pi;

struct KindName {
  WaveformKind kind;
  std::string_view name;
  std::string_view label;
};

constexpr std::array<KindName, 6> kKinds{{
    {WaveformKind::dvbs2_like, "dvbs2_like", "DVBS2"},
    {WaveformKind::lte_like, "lte_like", "LTE"},
    {WaveformKind::umts_like, "umts_like", "UMTS"},
    {WaveformKind::gsm_like, "gsm_like", "GSM"},
    {WaveformKind::tone, "tone", "TONE"},
    {WaveformKind::awgn, "awgn", "AWGN"},
}};

cdouble qpsk(Rng& rng) {
  constexpr double a = std::numbers::sqrt2 / 2.0;
  const auto b = rng.bits();
  return {(b & 1u) ? a : -a, (b & 2u) ? a : -a};
}

// Full-overlap outputs y[start + n], n < count, of taps * (symbols upsampled by sps).
std::vector<cdouble> shape(const std::vector<cdouble>& symbols, std::size_t sps,
                           const std::vector<double>& taps, std::size_t start, std::size_t count) {
  std::vector<cdouble> out(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t m = start + n;  // index in the upsampled stream
    cdouble acc{};
    // taps[k] pairs with upsampled index m - k, nonzero only at multiples of sps.
    for (std::size_t k = m % sps; k < taps.size() && k <= m; k += sps) {
      acc += taps[k] * symbols[(m - k) / sps];
    }
    out[n] = acc;
  }
  return out;
}

std::vector<cdouble> linear_modulation(std::vector<cdouble> symbols, std::size_t sps, double rolloff,
                                       std::size_t span, std::size_t num_samples, std::size_t offset) {
  const auto taps = rrc_taps(rolloff, sps, span);
  return shape(symbols, sps, taps, taps.size() - 1 + offset, num_samples);
}

std::size_t symbols_needed(std::size_t num_samples, std::size_t sps, std::size_t span) {
  return (num_samples + (2 * span + 2) * sps) / sps + 2;
}

std::vector<cdouble> gen_dvbs2(const WaveformSpec& s, Rng& rng) {
  const std::size_t sps = s.samples_per_symbol;
  const std::size_t offset = rng.below(sps);
  std::vector<cdouble> symbols(symbols_needed(s.num_samples, sps, s.filter_span_symbols));
  for (auto& v : symbols) v = qpsk(rng);
  return linear_modulation(std::move(symbols), sps, s.rolloff, s.filter_span_symbols, s.num_samples, offset);
}

std::vector<cdouble> gen_umts(const WaveformSpec& s, Rng& rng) {
  const std::size_t spc = s.samples_per_chip;
  const std::size_t offset = rng.below(spc * s.spreading_factor);
  std::vector<double> code(s.spreading_factor);
  for (auto& c : code) c = (rng.bits() & 1u) ? 1.0 : -1.0;

  const std::size_t span = s.filter_span_symbols;
  std::vector<cdouble> chips(symbols_needed(s.num_samples + spc * s.spreading_factor, spc, span));
  cdouble symbol{};
  for (std::size_t m = 0; m < chips.size(); ++m) {
    if (m % s.spreading_factor == 0) symbol = qpsk(rng);
    // Complex scrambling per chip on top of the channelisation code.
    const cdouble scramble = qpsk(rng) * std::numbers::sqrt2;
    chips[m] = symbol * code[m % s.spreading_factor] * scramble;
  }
  return linear_modulation(std::move(chips), spc, s.chip_rolloff, span, s.num_samples, offset);
}

// Hamming-windowed sinc, cutoff in cycles/sample, odd length.
std::vector<double> lowpass_taps(double cutoff, std::size_t len) {
  len |= 1u;
  std::vector<double> h(len);
  const double mid = static_cast<double>(len / 2);
  for (std::size_t k = 0; k < len; ++k) {
    const double t = static_cast<double>(k) - mid;
    const double sinc = t == 0.0 ? 2.0 * cutoff : std::sin(2.0 * kPi * cutoff * t) / (kPi * t);
    const double w = len > 1 ? 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(len - 1)) : 1.0;
    h[k] = sinc * w;
  }
  return h;
}

std::vector<cdouble> gen_lte(const WaveformSpec& s, Rng& rng) {
  const std::size_t n = s.fft_size;
  const std::size_t period = n + s.cyclic_prefix;
  const std::size_t offset = rng.below(period);
  const std::size_t nsym = (s.num_samples + offset + s.tx_filter_taps) / period + 1;
  const std::size_t half = s.active_subcarriers / 2;
  const std::size_t upper = s.active_subcarriers - half;  // bins 1..upper, then n-half..n-1

  std::vector<cdouble> stream;
  stream.reserve(nsym * period);
  std::vector<cdouble> bins(n);
  for (std::size_t sym = 0; sym < nsym; ++sym) {
    std::fill(bins.begin(), bins.end(), cdouble{});
    for (std::size_t k = 1; k <= upper; ++k) bins[k] = qpsk(rng);
    for (std::size_t k = n - half; k < n; ++k) bins[k] = qpsk(rng);
    const auto body = idft(bins);
    stream.insert(stream.end(), body.end() - static_cast<std::ptrdiff_t>(s.cyclic_prefix), body.end());
    stream.insert(stream.end(), body.begin(), body.end());
  }
  // Transmit filter suppresses the sinc sidelobes of the rectangular symbols.
  const double edge = static_cast<double>(s.active_subcarriers + 2) / static_cast<double>(2 * n);
  const auto taps = lowpass_taps(std::min(edge, 0.5), s.tx_filter_taps);
  const std::size_t delay = taps.size() - 1;
  std::vector<cdouble> out(s.num_samples);
  for (std::size_t m = 0; m < out.size(); ++m) {
    cdouble acc{};
    for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * stream[offset + delay + m - k];
    out[m] = acc;
  }
  return out;
}

std::vector<cdouble> gen_gsm(const WaveformSpec& s, Rng& rng) {
  const std::size_t sps = s.samples_per_symbol;
  // Gaussian frequency filter, std deviation in samples, truncated at +-2 symbols.
  const double sigma = std::sqrt(std::log(2.0)) / (2.0 * kPi * s.bt) * static_cast<double>(sps);
  const std::size_t half = 2 * sps;
  std::vector<double> gauss(2 * half + 1);
  double gsum = 0.0;
  for (std::size_t k = 0; k < gauss.size(); ++k) {
    const double t = static_cast<double>(k) - static_cast<double>(half);
    gauss[k] = std::exp(-t * t / (2.0 * sigma * sigma));
    gsum += gauss[k];
  }
  for (auto& g : gauss) g /= gsum;

  const std::size_t total = s.num_samples + gauss.size() + sps;
  const std::size_t nbits = total / sps + 1;
  std::vector<double> nrz(nbits * sps);
  for (std::size_t b = 0; b < nbits; ++b) {
    const double a = (rng.bits() & 1u) ? 1.0 : -1.0;
    for (std::size_t k = 0; k < sps; ++k) nrz[b * sps + k] = a;
  }

  // Modulation index 1/2: each bit advances the phase by pi/2.
  double phase = rng.uniform(-kPi, kPi);
  const double step = kPi / (2.0 * static_cast<double>(sps));
  std::vector<cdouble> out(s.num_samples);
  const std::size_t start = gauss.size() - 1;
  for (std::size_t n = 0; n < start + s.num_samples; ++n) {
    double freq = 0.0;
    for (std::size_t k = 0; k < gauss.size() && k <= n; ++k) freq += gauss[k] * nrz[n - k];
    phase = std::remainder(phase + step * freq, 2.0 * kPi);
    if (n >= start) out[n - start] = std::polar(1.0, phase);
  }
  return out;
}

std::vector<cdouble> gen_tone(const WaveformSpec& s, Rng& rng) {
  const double phase0 = rng.uniform(-kPi, kPi);
  const double w = 2.0 * kPi * s.tone_offset_hz / s.sample_rate_hz;
  std::vector<cdouble> out(s.num_samples);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::polar(1.0, std::remainder(phase0 + w * static_cast<double>(n), 2.0 * kPi));
  }
  return out;
}

std::vector<cdouble> gen_awgn(const WaveformSpec& s, Rng& rng) {
  std::vector<cdouble> out(s.num_samples);
  for (auto& v : out) v = rng.complex_gaussian(1.0);
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("waveform spec: " + what);
}

}  // namespace

std::string_view to_string(WaveformKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::optional<WaveformKind> parse_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

std::string_view class_label(WaveformKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.label;
  }
  return "UNKNOWN";
}

std::vector<double> rrc_taps(double rolloff, std::size_t sps, std::size_t span) {
  const std::size_t len = 2 * span * sps + 1;
  std::vector<double> h(len);
  const double b = rolloff;
  double energy = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double t = (static_cast<double>(i) - static_cast<double>(span * sps)) / static_cast<double>(sps);
    double v;
    if (std::abs(t) < 1e-12) {
      v = 1.0 - b + 4.0 * b / kPi;
    } else if (b > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-12) {
      v = b / std::numbers::sqrt2 *
          ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * b)) + (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * b)));
    } else {
      const double num = std::sin(kPi * t * (1.0 - b)) + 4.0 * b * t * std::cos(kPi * t * (1.0 + b));
      const double den = kPi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t));
      v = num / den;
    }
    h[i] = v;
    energy += v * v;
  }
  const double norm = 1.0 / std::sqrt(energy);
  for (auto& v : h) v *= norm;
  return h;
}

void validate(const WaveformSpec& s) {
  require(s.num_samples > 0, "num_samples must be positive");
  require(s.sample_rate_hz > 0.0 && std::isfinite(s.sample_rate_hz), "sample_rate_hz must be positive");
  switch (s.kind) {
    case WaveformKind::dvbs2_like:
      require(s.samples_per_symbol >= 1, "samples_per_symbol must be >= 1");
      require(s.rolloff >= 0.0 && s.rolloff <= 1.0, "rolloff must lie in [0, 1]");
      require(s.filter_span_symbols >= 1, "filter_span_symbols must be >= 1");
      require((1.0 + s.rolloff) / static_cast<double>(s.samples_per_symbol) <= 1.0,
              "occupied bandwidth exceeds sample rate");
      break;
    case WaveformKind::umts_like:
      require(s.spreading_factor >= 1, "spreading_factor must be >= 1");
      require(s.samples_per_chip >= 1, "samples_per_chip must be >= 1");
      require(s.chip_rolloff >= 0.0 && s.chip_rolloff <= 1.0, "chip_rolloff must lie in [0, 1]");
      require(s.filter_span_symbols >= 1, "filter_span_symbols must be >= 1");
      require((1.0 + s.chip_rolloff) / static_cast<double>(s.samples_per_chip) <= 1.0,
              "occupied bandwidth exceeds sample rate");
      break;
    case WaveformKind::lte_like:
      require(s.fft_size >= 2, "fft_size must be >= 2");
      require(s.active_subcarriers >= 1, "active_subcarriers must be >= 1");
      require(s.active_subcarriers <= s.fft_size - 1, "occupied bandwidth exceeds sample rate");
      require(s.cyclic_prefix < s.fft_size, "cyclic_prefix must be shorter than fft_size");
      break;
    case WaveformKind::gsm_like:
      require(s.bt > 0.0, "bt must be positive");
      require(static_cast<double>(s.samples_per_symbol) >= 1.0 + s.bt, "occupied bandwidth exceeds sample rate");
      break;
    case WaveformKind::tone:
      require(std::isfinite(s.tone_offset_hz) && std::abs(s.tone_offset_hz) < s.sample_rate_hz / 2.0,
              "tone offset outside the sampled band");
      break;
    case WaveformKind::awgn:
      break;
    default:
      throw std::invalid_argument("waveform spec: unknown kind");
  }
}

IqSegment generate(const WaveformSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  std::vector<cdouble> x;
  switch (spec.kind) {
    case WaveformKind::dvbs2_like: x = gen_dvbs2(spec, rng); break;
    case WaveformKind::lte_like: x = gen_lte(spec, rng); break;
    case WaveformKind::umts_like: x = gen_umts(spec, rng); break;
    case WaveformKind::gsm_like: x = gen_gsm(spec, rng); break;
    case WaveformKind::tone: x = gen_tone(spec, rng); break;
    case WaveformKind::awgn: x = gen_awgn(spec, rng); break;
  }
  const double p = mean_power(x);
  if (!(p > 0.0)) throw std::runtime_error("generate: zero-power waveform");
  const double g = 1.0 / std::sqrt(p);
  for (auto& v : x) v *= g;
  return {std::move(x), spec.sample_rate_hz};
}

}  // namespace rfim::wave
