#include "fsosnr/rx.hpp"

#include "fft.hpp"
#include "fsosnr/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace fsosnr {

void validate(const CmaConfig& c)
{
    if (c.num_taps < 1 || c.num_taps % 2 == 0) throw Error("CMA num_taps must be odd");
    // Zero is accepted and freezes the taps.
    if (!(c.step_size >= 0.0 && c.step_size <= 0.1)) throw Error("CMA step_size must be in [0, 0.1]");
    if (!(c.modulus_target > 0.0)) throw Error("CMA modulus_target must be positive");
    if (c.iterations_per_sample < 1) throw Error("CMA iterations_per_sample must be >= 1");
}

void validate(const BpsConfig& c)
{
    if (c.num_test_phases < 8) throw Error("BPS needs at least 8 test phases");
    if (c.window_half_width < 1) throw Error("BPS window_half_width must be >= 1");
}

IqStream matched_filter(const IqStream& signal, const RrcFilter& filter)
{
    const auto& h = filter.taps;
    const auto& x = signal.samples;
    IqStream out;
    out.sample_rate = signal.sample_rate;
    if (x.empty() || h.empty()) return out;

    out.samples.assign(x.size() + h.size() - 1, Complex{});
    Complex* y = out.samples.data();
    for (std::size_t n = 0; n < x.size(); ++n) {
        const Complex s = x[n];
        if (s == Complex{}) continue;
        Complex* dst = y + n;
        for (std::size_t i = 0; i < h.size(); ++i) dst[i] += s * h[i];
    }
    return out;
}

IqStream align_samples(const IqStream& signal, std::size_t delay, std::size_t n_samples)
{
    IqStream out;
    out.sample_rate = signal.sample_rate;
    out.samples.assign(n_samples, Complex{});
    if (delay < signal.samples.size()) {
        const std::size_t avail = std::min(n_samples, signal.samples.size() - delay);
        std::copy_n(signal.samples.begin() + static_cast<std::ptrdiff_t>(delay), avail, out.samples.begin());
    }
    return out;
}

namespace {

CfoEstimate fourth_power_cfo(std::span<const Complex> x, double rate)
{
    const std::size_t nfft = std::bit_ceil(x.size());
    std::vector<Complex> spec(nfft, Complex{});
    for (std::size_t n = 0; n < x.size(); ++n) {
        const Complex s2 = x[n] * x[n];
        spec[n] = s2 * s2;
    }
    detail::fft_inplace(spec);

    std::size_t peak = 0;
    double peak_pow = -1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < nfft; ++k) {
        const double p = std::norm(spec[k]);
        total += p;
        if (p > peak_pow) {
            peak_pow = p;
            peak = k;
        }
    }
    const double mean = total / static_cast<double>(nfft);
    const double ratio = mean > 0.0 ? peak_pow / mean : 0.0;
    if (!(ratio >= 4.0)) throw Error("unreliable estimate");

    const auto signed_bin = peak < nfft / 2 ? static_cast<double>(peak)
                                            : static_cast<double>(peak) - static_cast<double>(nfft);
    const double bin_hz = rate / static_cast<double>(nfft);
    return {signed_bin * bin_hz / 4.0, bin_hz / 4.0, ratio};
}

} // namespace

CfoEstimate coarse_cfo_estimate(const IqStream& signal)
{
    if (signal.size() < (std::size_t{1} << 14)) throw Error("coarse CFO estimate needs >= 2^14 samples");
    return fourth_power_cfo(signal.samples, signal.sample_rate);
}

CfoEstimate fine_cfo_estimate(const SymbolBlock& symbols)
{
    if (symbols.size() < (std::size_t{1} << 12)) throw Error("fine CFO estimate needs >= 2^12 symbols");
    return fourth_power_cfo(symbols.symbols, symbols.symbol_rate);
}

SymbolBlock cma_equalize(const IqStream& signal, const CmaConfig& cfg)
{
    validate(cfg);
    const auto& x = signal.samples;
    const auto n_taps = static_cast<std::size_t>(cfg.num_taps);
    const auto centre = static_cast<std::ptrdiff_t>(n_taps / 2);
    const auto len = static_cast<std::ptrdiff_t>(x.size());

    std::vector<Complex> w(n_taps, Complex{});
    w[n_taps / 2] = 1.0;
    std::vector<Complex> reg(n_taps);

    // reg[i] = x[2k + centre - i], zero outside the stream.
    auto load = [&](std::size_t k) {
        const auto base = static_cast<std::ptrdiff_t>(2 * k) + centre;
        for (std::size_t i = 0; i < n_taps; ++i) {
            const auto idx = base - static_cast<std::ptrdiff_t>(i);
            reg[i] = (idx >= 0 && idx < len) ? x[static_cast<std::size_t>(idx)] : Complex{};
        }
    };
    auto filter = [&] {
        Complex y{};
        for (std::size_t i = 0; i < n_taps; ++i) y += w[i] * reg[i];
        return y;
    };
    auto adapt = [&](std::size_t k, Complex y) {
        if (cfg.step_size == 0.0) return;
        const Complex e = y * (std::norm(y) - cfg.modulus_target);
        const Complex g = cfg.step_size * e;
        for (std::size_t i = 0; i < n_taps; ++i) {
            w[i] -= g * std::conj(reg[i]);
            const double m = std::abs(w[i]);
            if (!(m <= 1e3)) throw Error("CMA diverged at sample " + std::to_string(2 * k));
        }
    };
    auto step = [&](std::size_t k) {
        load(k);
        Complex y = filter();
        const Complex first = y;
        for (int it = 0; it < cfg.iterations_per_sample; ++it) {
            if (it > 0) y = filter();
            adapt(k, y);
        }
        return first;
    };

    const std::size_t n_sym = x.size() / 2;
    const std::size_t n_train = std::min(cfg.preamble_samples / 2, n_sym);
    for (std::size_t k = 0; k < n_train; ++k) step(k);

    SymbolBlock out;
    out.symbol_rate = signal.sample_rate / 2.0;
    out.symbols.resize(n_sym);
    for (std::size_t k = 0; k < n_sym; ++k) out.symbols[k] = step(k);
    return out;
}

BpsResult bps_recover(const SymbolBlock& symbols, const BpsConfig& cfg)
{
    validate(cfg);
    using std::numbers::pi;
    const auto B = static_cast<std::size_t>(cfg.num_test_phases);
    const auto W = static_cast<std::size_t>(cfg.window_half_width);
    const std::size_t n = symbols.size();
    const double grid = (pi / 2.0) / static_cast<double>(B);

    std::vector<Complex> rot(B);
    for (std::size_t b = 0; b < B; ++b) rot[b] = std::polar(1.0, -grid * static_cast<double>(b));

    const std::size_t ring_len = 2 * W + 1;
    std::vector<double> ring(ring_len * B, 0.0);
    std::vector<double> sums(B, 0.0);

    BpsResult out;
    out.symbols.symbol_rate = symbols.symbol_rate;
    out.symbols.symbols.resize(n);
    out.phase.resize(n);

    long long prev_idx = 0;
    for (std::size_t j = 0; j < n + W; ++j) {
        double* slot = ring.data() + (j % ring_len) * B;
        if (j >= ring_len) {
            for (std::size_t b = 0; b < B; ++b) sums[b] -= slot[b];
        }
        if (j < n) {
            const Complex s = symbols.symbols[j];
            for (std::size_t b = 0; b < B; ++b) {
                const Complex r = s * rot[b];
                const Complex d = r - qpsk_point(qpsk_quadrant(r));
                slot[b] = std::norm(d);
                sums[b] += slot[b];
            }
        } else {
            std::fill(slot, slot + B, 0.0);
        }
        if (j < W) continue;

        const std::size_t k = j - W;
        const auto best = static_cast<long long>(std::min_element(sums.begin(), sums.end()) - sums.begin());
        const auto period = static_cast<long long>(B);
        long long idx = best;
        if (k > 0) {
            // Shift by whole quarter turns to stay closest to the previous estimate.
            const double m = std::round(static_cast<double>(prev_idx - best) / static_cast<double>(period));
            idx = best + static_cast<long long>(m) * period;
        }
        prev_idx = idx;
        const double phi = grid * static_cast<double>(idx);
        out.phase[k] = phi;
        out.symbols.symbols[k] = symbols.symbols[k] * std::polar(1.0, -phi);
    }
    return out;
}

SymbolBlock hard_decision(const SymbolBlock& symbols)
{
    SymbolBlock out;
    out.symbol_rate = symbols.symbol_rate;
    out.symbols.reserve(symbols.size());
    for (const auto& s : symbols.symbols) out.symbols.push_back(qpsk_point(qpsk_quadrant(s)));
    return out;
}

Bits diff_decode(const SymbolBlock& symbols, std::optional<Complex> reference)
{
    // Quadrant increment -> Gray pair, inverse of the encoder's bit-pair -> quadrant map.
    static constexpr std::array<std::array<std::uint8_t, 2>, 4> kIncrementBits{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

    const auto& s = symbols.symbols;
    std::size_t first = 0;
    int prev;
    if (reference) {
        prev = qpsk_quadrant(*reference);
    } else {
        if (s.size() < 2) throw Error("diff_decode needs at least 2 symbols");
        prev = qpsk_quadrant(s[0]);
        first = 1;
    }

    Bits bits;
    bits.reserve(2 * (s.size() - first));
    for (std::size_t k = first; k < s.size(); ++k) {
        const int q = qpsk_quadrant(s[k]);
        const auto& pair = kIncrementBits[static_cast<std::size_t>((q - prev) & 3)];
        bits.push_back(pair[0]);
        bits.push_back(pair[1]);
        prev = q;
    }
    return bits;
}

} // namespace fsosnr
