#pragma once

#include <cstddef>
#include <vector>

namespace qmg::classical {

struct CompressionCurve {
  /// max_error[m] is the max pointwise error keeping the m largest modes, m = 0..N.
  std::vector<double> max_error;
};

/// Truncated-Fourier reconstruction error of `values` versus the number of
/// retained discrete Fourier modes, largest magnitude first (ties by
/// frequency). Each of the N complex modes counts as one.
CompressionCurve compressibility_probe(const std::vector<double>& values);

}  // namespace qmg::classical
