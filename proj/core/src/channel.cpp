#include "fsosnr/channel.hpp"

#include "fsosnr/error.hpp"
#include "seeding.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fsosnr {

void validate(const FadingProfile& p)
{
    if (!(p.period > 0.0)) throw Error("fading period must be positive");
    if (!(p.snr_ceiling_db > p.snr_floor_db)) throw Error("snr_ceiling must exceed snr_floor");
    if (!(p.phase_offset >= 0.0 && p.phase_offset < 1.0)) throw Error("phase_offset must be in [0, 1)");
}

void validate(const ImpairmentConfig& c)
{
    if (!(c.linewidth >= 0.0)) throw Error("linewidth must be >= 0");
    if (!(c.noise_power > 0.0)) throw Error("noise_power must be positive");
    if (!std::isfinite(c.cfo)) throw Error("cfo must be finite");
}

double profile_snr_at(const FadingProfile& profile, double t)
{
    if (profile.shape == FadingShape::constant) return profile.snr_ceiling_db;

    double u = t / profile.period + profile.phase_offset;
    u -= std::floor(u);
    const double tri = u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
    return profile.snr_floor_db + (profile.snr_ceiling_db - profile.snr_floor_db) * tri;
}

IqStream apply_fading(const IqStream& signal, const FadingProfile& profile)
{
    IqStream out = signal;
    if (profile.shape == FadingShape::constant) return out;
    for (std::size_t n = 0; n < out.samples.size(); ++n) {
        const double t = static_cast<double>(n) / signal.sample_rate;
        const double rel_db = profile_snr_at(profile, t) - profile.snr_ceiling_db;
        out.samples[n] *= std::sqrt(db_to_linear(rel_db));
    }
    return out;
}

IqStream add_awgn(const IqStream& signal, double noise_power, std::uint64_t rng_seed)
{
    if (!(noise_power > 0.0)) throw Error("noise_power must be positive");
    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));

    IqStream out = signal;
    for (auto& s : out.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        s += Complex(re, im);
    }
    return out;
}

namespace {

template <class Seq>
void rotate_linear(Seq& v, double cycles_per_sample)
{
    // Phase is recomputed from the index rather than accumulated so long
    // streams do not drift.
    const double w = 2.0 * std::numbers::pi * cycles_per_sample;
    for (std::size_t n = 0; n < v.size(); ++n) v[n] *= std::polar(1.0, w * static_cast<double>(n));
}

} // namespace

IqStream apply_cfo(const IqStream& signal, double cfo)
{
    if (!(std::abs(cfo) < signal.sample_rate / 2.0)) throw Error("cfo beyond Nyquist");
    IqStream out = signal;
    if (cfo != 0.0) rotate_linear(out.samples, cfo / signal.sample_rate);
    return out;
}

SymbolBlock apply_cfo(const SymbolBlock& block, double cfo)
{
    if (!(std::abs(cfo) < block.symbol_rate / 2.0)) throw Error("cfo beyond Nyquist");
    SymbolBlock out = block;
    if (cfo != 0.0) rotate_linear(out.symbols, cfo / block.symbol_rate);
    return out;
}

IqStream apply_phase_noise(const IqStream& signal, double linewidth, std::uint64_t rng_seed)
{
    if (!(linewidth >= 0.0)) throw Error("linewidth must be >= 0");
    IqStream out = signal;
    if (linewidth == 0.0) return out;

    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> step(0.0, std::sqrt(2.0 * std::numbers::pi * linewidth / signal.sample_rate));
    double phi = 0.0;
    for (auto& s : out.samples) {
        phi += step(rng);
        s *= std::polar(1.0, phi);
    }
    return out;
}

IqStream apply_channel(const IqStream& signal, const FadingProfile& profile,
                       const ImpairmentConfig& impairments, std::uint64_t rng_seed)
{
    validate(profile);
    validate(impairments);

    IqStream x = apply_fading(signal, profile);
    x = apply_cfo(x, impairments.cfo);
    x = apply_phase_noise(x, impairments.linewidth, detail::derive_seed(rng_seed, 1));
    return add_awgn(x, impairments.noise_power, detail::derive_seed(rng_seed, 2));
}

} // namespace fsosnr
