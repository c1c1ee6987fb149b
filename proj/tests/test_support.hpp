#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rfim/iqcore/iq_segment.hpp"
#include "rfim/iqcore/random.hpp"

namespace rfim::test {

// O(N^2) reference transform, independent of the FFT path.
inline std::vector<cdouble> naive_dft(const std::vector<cdouble>& x) {
  const std::size_t n = x.size();
  std::vector<cdouble> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t m = 0; m < n; ++m) {
      const long double a = -2.0L * std::numbers::pi_v<long double> *
                            static_cast<long double>((k * m) % n) / static_cast<long double>(n);
      re += x[m].real() * std::cos(a) - x[m].imag() * std::sin(a);
      im += x[m].real() * std::sin(a) + x[m].imag() * std::cos(a);
    }
    out[k] = {static_cast<double>(re), static_cast<double>(im)};
  }
  return out;
}

inline std::vector<cdouble> random_samples(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cdouble> v(n);
  for (auto& s : v) s = rng.complex_gaussian(1.0);
  return v;
}

inline double max_rel_error(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rfim_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

template <typename F>
Eigen::VectorXd central_difference(const Eigen::VectorXd& theta, F&& f, double step = 1e-5) {
  Eigen::VectorXd g(theta.size());
  Eigen::VectorXd t = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    t[i] = theta[i] + step;
    const double up = f(t);
    t[i] = theta[i] - step;
    const double down = f(t);
    t[i] = theta[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

// Terriberry's single-pass update for central moment sums, kept separate
// from the two-pass library path.
struct StreamingMoments {
  double n = 0, mean = 0, m2 = 0, m3 = 0, m4 = 0;
  void add(double x) {
    const double n1 = n;
    n += 1;
    const double delta = x - mean;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double t1 = delta * dn * n1;
    mean += dn;
    m4 += t1 * dn2 * (n * n - 3 * n + 3) + 6 * dn2 * m2 - 4 * dn * m3;
    m3 += t1 * dn * (n - 2) - 3 * dn * m2;
    m2 += t1;
  }
  double variance() const { return m2 / (n - 1); }
  double skewness() const { return (m3 / n) / std::pow(variance(), 1.5); }
  double kurtosis() const { return (m4 / n) / (variance() * variance()); }
};

}  // namespace rfim::test
