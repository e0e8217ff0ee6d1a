#pragma once

#include <cstddef>
#include <vector>

#include "skewprod/fourier.hpp"

namespace skewprod::detail {

/// X_k = sum_j x_j exp(-2 pi i j k / n), n a power of two (FFTW-backed,
/// planning serialized for thread safety).
std::vector<Complex> dft_forward(const std::vector<Complex>& x);

std::size_t next_pow2(std::size_t n);

}  // namespace skewprod::detail
