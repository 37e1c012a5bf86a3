#pragma once

#include "fsosnr/signal.hpp"
#include "fsosnr/tx.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fsosnr {

/// Fractionally spaced (T/2) constant-modulus equalizer settings.
struct CmaConfig {
    int num_taps = 11;
    double step_size = 1e-3;
    double modulus_target = 1.0;
    int iterations_per_sample = 1;
    /// Input samples consumed by the training pass that runs before any symbol is emitted.
    std::size_t preamble_samples = 50000;
};

struct BpsConfig {
    int num_test_phases = 32;
    int window_half_width = 16;
};

void validate(const CmaConfig& c);
void validate(const BpsConfig& c);

/// Full convolution with the (symmetric) transmit taps.
IqStream matched_filter(const IqStream& signal, const RrcFilter& filter);

/// Drops `delay` leading samples and returns `n_symbols * sps` samples,
/// zero-padding the tail if the input is short.
IqStream align_samples(const IqStream& signal, std::size_t delay, std::size_t n_samples);

/// Fourth-power spectral CFO estimate over the whole input (zero-padded to a
/// power-of-two FFT). Resolution is fs / (4 * fft_len).
struct CfoEstimate {
    double cfo = 0.0;          // Hz
    double resolution = 0.0;   // Hz, one FFT bin mapped back to the carrier
    double peak_to_mean = 0.0; // power spectrum peak over its mean
};

/// Requires >= 2^14 samples. Throws "unreliable estimate" when the
/// fourth-power spectrum has no dominant line (peak-to-mean < 4).
CfoEstimate coarse_cfo_estimate(const IqStream& signal);

/// Same method at one sample per symbol. Requires >= 2^12 symbols.
CfoEstimate fine_cfo_estimate(const SymbolBlock& symbols);

/// Equalizes a 2-samples-per-symbol stream whose sample 0 is the first symbol instant.
/// Throws "CMA diverged at sample k" if any tap magnitude exceeds 1e3.
SymbolBlock cma_equalize(const IqStream& signal, const CmaConfig& cfg);

struct BpsResult {
    SymbolBlock symbols;
    std::vector<double> phase; // unwrapped estimate per symbol, rad
};

/// Blind phase search over B test phases in [0, pi/2), windowed squared
/// decision distance, unwrapped across the pi/2 ambiguity.
BpsResult bps_recover(const SymbolBlock& symbols, const BpsConfig& cfg);

/// Nearest QPSK point per symbol; zero components go to the positive side.
SymbolBlock hard_decision(const SymbolBlock& symbols);

/// Differential decoding of symbol-to-symbol quadrant increments into Gray
/// bit pairs. Without a reference the first symbol only serves as the phase
/// reference and 2 * (n - 1) bits come out; with one, 2 * n bits.
Bits diff_decode(const SymbolBlock& symbols, std::optional<Complex> reference = std::nullopt);

} // namespace fsosnr
