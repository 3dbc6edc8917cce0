#include "qmg/classical/compress.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace qmg::classical {

CompressionCurve compressibility_probe(const std::vector<double>& values) {
  const std::size_t n = values.size();
  CompressionCurve out;
  if (n == 0) {
    out.max_error.push_back(0.0);
    return out;
  }
  // naive DFT; sizes here are a few hundred points
  std::vector<std::complex<double>> spectrum(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{};
    for (std::size_t i = 0; i < n; ++i) {
      acc += values[i] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * i % n) / n);
    }
    spectrum[k] = acc;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(spectrum[a]) > std::abs(spectrum[b]); });

  std::vector<double> recon(n, 0.0);
  const auto max_error = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(recon[i] - values[i]));
    return m;
  };
  out.max_error.push_back(max_error());
  for (std::size_t k : order) {
    for (std::size_t i = 0; i < n; ++i) {
      recon[i] += (spectrum[k] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k * i % n) / n)).real() /
                  static_cast<double>(n);
    }
    out.max_error.push_back(max_error());
  }
  return out;
}

}  // namespace qmg::classical
