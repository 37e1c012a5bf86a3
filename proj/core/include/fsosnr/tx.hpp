#pragma once

#include "fsosnr/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fsosnr {

using Bits = std::vector<std::uint8_t>;

inline constexpr std::size_t kPrbs15Period = 32767;

/// PRBS15 generator state (x^15 + x^14 + 1). The all-zero register is absorbing and rejected.
struct PrbsState {
    std::uint16_t reg = 0x7fff;
};

/// Emits `n_bits` of PRBS15 and advances `state`.
/// Throws "degenerate LFSR seed" for a zero register and rejects n_bits == 0.
Bits prbs_generate(PrbsState& state, std::size_t n_bits);

/// One full PRBS15 period starting from the default all-ones seed.
const Bits& prbs15_period();

/// Gray-mapped unit-power QPSK: (b0,b1) -> ((1-2b0) + j(1-2b1))/sqrt(2).
SymbolBlock qpsk_map(const Bits& bits, double symbol_rate);

/// Quadrant index of a QPSK point in Gray circular order:
/// 0 -> (+,+), 1 -> (-,+), 2 -> (-,-), 3 -> (+,-).
/// Nearest-quadrant test; zero components count as positive.
int qpsk_quadrant(Complex s) noexcept;
Complex qpsk_point(int quadrant) noexcept;

/// Phase-increment differential encoding. Each input symbol is read as an
/// increment of k*pi/2 (its quadrant index) and accumulated onto the
/// previous output, starting from `seed_symbol`.
/// Throws "invalid symbol" for inputs off the constellation.
SymbolBlock diff_encode(const SymbolBlock& symbols, Complex seed_symbol = qpsk_point(0));

/// Root-raised-cosine FIR with unit-energy taps.
struct RrcFilter {
    double rolloff = 0.1;
    int span = 32; // symbols
    int sps = 2;
    std::vector<double> taps;

    std::size_t group_delay() const noexcept { return static_cast<std::size_t>(span * sps / 2); }
};

RrcFilter rrc_design(double rolloff, int span, int sps);

/// Pulse-shaped waveform plus the filter's group delay in samples.
struct ShapedSignal {
    IqStream stream;
    std::size_t group_delay = 0;
};

/// Zero-stuffs by `filter.sps` and convolves. Output holds
/// (n - 1) * sps + taps samples, so a single impulse reproduces the taps.
ShapedSignal pulse_shape(const SymbolBlock& symbols, const RrcFilter& filter);

} // namespace fsosnr
