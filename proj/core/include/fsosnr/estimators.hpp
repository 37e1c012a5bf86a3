#pragma once

#include "fsosnr/signal.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace fsosnr {

inline constexpr double kSnrCap = 1e6;

struct MomentPair {
    double m2 = 0.0;
    double m4 = 0.0;
};

enum class SnrMethod { m2m4, evm_blind, evm_aided };

std::string_view to_string(SnrMethod m) noexcept;

struct SnrEstimate {
    double value = 0.0; // linear, in [0, kSnrCap]
    SnrMethod method = SnrMethod::m2m4;
    std::size_t block_index = 0;
    std::size_t block_len = 0;
    double time = 0.0; // s, block centre
};

MomentPair compute_moments(std::span<const Complex> block);

/// QPSK closed-form M2M4 estimate. A negative radicand clamps to SNR 0 and a
/// vanishing denominator saturates at kSnrCap.
SnrEstimate m2m4_snr(const MomentPair& moments);
SnrEstimate m2m4_snr(std::span<const Complex> block);

/// P0 / mean |r - t|^2 with P0 = 1.
SnrEstimate evm_snr(std::span<const Complex> received, std::span<const Complex> reference);
/// EVM against the receiver's own hard decisions.
SnrEstimate evm_snr_blind(std::span<const Complex> received);

/// Splits `symbols` into non-overlapping blocks of `block_len` (the partial
/// tail is dropped) and runs each requested method per block. Blocks are
/// scaled to unit mean power before the EVM methods, which assume P0 = 1;
/// M2M4 is scale-free and sees the raw block. `reference` is required for
/// SnrMethod::evm_aided. Results are grouped per block, in `methods` order.
std::vector<SnrEstimate> blockwise_estimate(const SymbolBlock& symbols, std::size_t block_len,
                                            std::span<const SnrMethod> methods,
                                            const SymbolBlock* reference = nullptr);

} // namespace fsosnr
