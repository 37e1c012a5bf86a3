#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fsosnr {

using Complex = std::complex<double>;

/// Uniformly sampled complex baseband waveform.
struct IqStream {
    std::vector<Complex> samples;
    double sample_rate = 0.0; // Hz

    std::size_t size() const noexcept { return samples.size(); }
};

/// One sample per symbol, as fed to the estimators and the decision stage.
struct SymbolBlock {
    std::vector<Complex> symbols;
    double symbol_rate = 0.0; // Hz

    std::size_t size() const noexcept { return symbols.size(); }
};

/// Mean of |x|^2. Throws fsosnr::Error("empty input") on an empty range.
double average_power(std::span<const Complex> x);
inline double average_power(const SymbolBlock& block) { return average_power(block.symbols); }

double db_to_linear(double db) noexcept;
/// Throws fsosnr::Error("non-positive power") for x <= 0.
double linear_to_db(double x);

bool all_finite(std::span<const Complex> x) noexcept;

/// Rejects non-positive rates, empty sample vectors and non-finite samples.
void validate(const IqStream& s);
void validate(const SymbolBlock& b);

} // namespace fsosnr
