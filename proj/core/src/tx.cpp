#include "fsosnr/tx.hpp"

#include "fsosnr/error.hpp"

#include <cmath>
#include <numbers>

namespace fsosnr {

namespace {

constexpr double kInvSqrt2 = (std::numbers::sqrt2 / 2.0);

} // namespace

Bits prbs_generate(PrbsState& state, std::size_t n_bits)
{
    if ((state.reg & 0x7fff) == 0) throw Error("degenerate LFSR seed");
    if (n_bits == 0) throw Error("n_bits must be >= 1");

    Bits out(n_bits);
    std::uint16_t reg = state.reg & 0x7fff;
    for (auto& bit : out) {
        const auto fb = static_cast<std::uint16_t>(((reg >> 14) ^ (reg >> 13)) & 1u);
        reg = static_cast<std::uint16_t>(((reg << 1) | fb) & 0x7fff);
        bit = static_cast<std::uint8_t>(fb);
    }
    state.reg = reg;
    return out;
}

const Bits& prbs15_period()
{
    static const Bits period = [] {
        PrbsState s;
        return prbs_generate(s, kPrbs15Period);
    }();
    return period;
}

int qpsk_quadrant(Complex s) noexcept
{
    const bool re_pos = s.real() >= 0.0;
    const bool im_pos = s.imag() >= 0.0;
    if (re_pos) return im_pos ? 0 : 3;
    return im_pos ? 1 : 2;
}

Complex qpsk_point(int quadrant) noexcept
{
    switch (quadrant & 3) {
    case 0: return {kInvSqrt2, kInvSqrt2};
    case 1: return {-kInvSqrt2, kInvSqrt2};
    case 2: return {-kInvSqrt2, -kInvSqrt2};
    default: return {kInvSqrt2, -kInvSqrt2};
    }
}

SymbolBlock qpsk_map(const Bits& bits, double symbol_rate)
{
    if (bits.size() % 2 != 0) throw Error("dangling bit");
    SymbolBlock out;
    out.symbol_rate = symbol_rate;
    out.symbols.reserve(bits.size() / 2);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        out.symbols.emplace_back((1.0 - 2.0 * bits[i]) * kInvSqrt2, (1.0 - 2.0 * bits[i + 1]) * kInvSqrt2);
    }
    return out;
}

namespace {

int constellation_index(Complex s)
{
    const int q = qpsk_quadrant(s);
    if (std::abs(s - qpsk_point(q)) > 1e-9) throw Error("invalid symbol");
    return q;
}

} // namespace

SymbolBlock diff_encode(const SymbolBlock& symbols, Complex seed_symbol)
{
    int state = constellation_index(seed_symbol);
    SymbolBlock out;
    out.symbol_rate = symbols.symbol_rate;
    out.symbols.reserve(symbols.size());
    for (const auto& s : symbols.symbols) {
        state = (state + constellation_index(s)) & 3;
        out.symbols.push_back(qpsk_point(state));
    }
    return out;
}

RrcFilter rrc_design(double rolloff, int span, int sps)
{
    if (!(rolloff > 0.0 && rolloff <= 1.0)) throw Error("rolloff must be in (0, 1]");
    if (span < 2) throw Error("span must be >= 2");
    if (sps < 2) throw Error("sps must be >= 2");
    if ((span * sps) % 2 != 0) throw Error("span * sps must be even");

    using std::numbers::pi;
    const int n = span * sps;
    RrcFilter f{rolloff, span, sps, std::vector<double>(static_cast<std::size_t>(n) + 1)};

    const double b = rolloff;
    for (int k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k - n / 2) / sps;
        double h;
        if (std::abs(t) < 1e-12) {
            h = 1.0 - b + 4.0 * b / pi;
        } else if (std::abs(std::abs(4.0 * b * t) - 1.0) < 1e-9) {
            h = b / std::sqrt(2.0) *
                ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * b)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * b)));
        } else {
            h = (std::sin(pi * t * (1.0 - b)) + 4.0 * b * t * std::cos(pi * t * (1.0 + b))) /
                (pi * t * (1.0 - (4.0 * b * t) * (4.0 * b * t)));
        }
        f.taps[static_cast<std::size_t>(k)] = h;
    }

    // Symmetrize before normalizing so taps[k] == taps[n-k] holds bit-exactly.
    for (int k = 0; k < n / 2; ++k) {
        auto& lo = f.taps[static_cast<std::size_t>(k)];
        auto& hi = f.taps[static_cast<std::size_t>(n - k)];
        lo = hi = 0.5 * (lo + hi);
    }
    double energy = 0.0;
    for (double h : f.taps) energy += h * h;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& h : f.taps) h *= scale;
    return f;
}

ShapedSignal pulse_shape(const SymbolBlock& symbols, const RrcFilter& filter)
{
    if (filter.sps < 2) throw Error("sps must be >= 2");
    if (symbols.symbols.empty()) throw Error("empty input");

    const auto sps = static_cast<std::size_t>(filter.sps);
    const auto& taps = filter.taps;
    const std::size_t n_out = (symbols.size() - 1) * sps + taps.size();

    ShapedSignal out;
    out.group_delay = filter.group_delay();
    out.stream.sample_rate = symbols.symbol_rate * filter.sps;
    out.stream.samples.assign(n_out, Complex{});

    // Polyphase form of zero-stuff + convolve: each symbol adds a scaled copy of the taps.
    auto* y = out.stream.samples.data();
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const Complex s = symbols.symbols[k];
        if (s == Complex{}) continue;
        Complex* dst = y + k * sps;
        for (std::size_t i = 0; i < taps.size(); ++i) dst[i] += s * taps[i];
    }
    return out;
}

} // namespace fsosnr
