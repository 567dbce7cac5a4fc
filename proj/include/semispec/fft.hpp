#pragma once

#include <cstddef>
#include <vector>

#include "semispec/types.hpp"

namespace semispec {

/// Unnormalized in-place DFT, out_j = sum_k in_k exp(sign * 2*pi*i*j*k/N).
/// Thread-safe; FFTW plans are cached per (size, sign).
void fft_inplace(std::vector<cplx>& data, int sign);

/// Multi-dimensional variant (row-major layout, dims.front() slowest).
void fft_inplace_nd(std::vector<cplx>& data, const std::vector<int>& dims, int sign);

}  // namespace semispec
