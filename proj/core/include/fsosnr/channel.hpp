#pragma once

#include "fsosnr/signal.hpp"

#include <cstdint>

namespace fsosnr {

enum class FadingShape { triangular, constant };

/// Deterministic SNR-vs-time profile, linear in dB.
struct FadingProfile {
    FadingShape shape = FadingShape::triangular;
    double period = 250e-6;     // s
    double snr_ceiling_db = 7.0;
    double snr_floor_db = -10.0;
    double phase_offset = 0.0;  // fraction of period, [0, 1)
};

struct ImpairmentConfig {
    double cfo = 0.0;         // Hz
    double linewidth = 0.0;   // Hz, combined Tx + LO
    double noise_power = 0.2; // per-symbol complex variance after matched filtering
};

void validate(const FadingProfile& p);
void validate(const ImpairmentConfig& c);

/// SNR in dB at time `t`. The triangular wave sits at the floor at phase 0
/// and reaches the ceiling at half a period.
double profile_snr_at(const FadingProfile& profile, double t);

/// Multiplies sample n by sqrt(10^((snr(t_n) - ceiling)/10)), t_n = n / fs.
IqStream apply_fading(const IqStream& signal, const FadingProfile& profile);

/// Adds circular complex Gaussian noise of total variance `noise_power`.
IqStream add_awgn(const IqStream& signal, double noise_power, std::uint64_t rng_seed);

/// Rotates sample n by exp(j 2 pi cfo n / fs). Requires |cfo| < fs / 2.
IqStream apply_cfo(const IqStream& signal, double cfo);
SymbolBlock apply_cfo(const SymbolBlock& block, double cfo);

/// Wiener phase noise with per-sample increment variance 2 pi linewidth / fs.
IqStream apply_phase_noise(const IqStream& signal, double linewidth, std::uint64_t rng_seed);

/// Full channel in its fixed order: fading, CFO, phase noise, AWGN.
IqStream apply_channel(const IqStream& signal, const FadingProfile& profile,
                       const ImpairmentConfig& impairments, std::uint64_t rng_seed);

} // namespace fsosnr
