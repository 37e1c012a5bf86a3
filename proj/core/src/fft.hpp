#pragma once

#include "fsosnr/signal.hpp"

#include <vector>

namespace fsosnr::detail {

enum class FftDirection { forward, inverse };

/// In-place unnormalized DFT of any length (FFTW backend).
void fft_inplace(std::vector<Complex>& data, FftDirection dir = FftDirection::forward);

} // namespace fsosnr::detail
