#include "fsosnr/estimators.hpp"

#include "fsosnr/error.hpp"
#include "fsosnr/tx.hpp"

#include <algorithm>
#include <cmath>

namespace fsosnr {

std::string_view to_string(SnrMethod m) noexcept
{
    switch (m) {
    case SnrMethod::m2m4: return "m2m4";
    case SnrMethod::evm_blind: return "evm_blind";
    case SnrMethod::evm_aided: return "evm_aided";
    }
    return "unknown";
}

MomentPair compute_moments(std::span<const Complex> block)
{
    if (block.empty()) throw Error("empty input");
    double m2 = 0.0;
    double m4 = 0.0;
    for (const auto& s : block) {
        const double p = std::norm(s);
        m2 += p;
        m4 += p * p;
    }
    const auto n = static_cast<double>(block.size());
    return {m2 / n, m4 / n};
}

SnrEstimate m2m4_snr(const MomentPair& moments)
{
    SnrEstimate est;
    est.method = SnrMethod::m2m4;
    const double m2 = moments.m2;
    if (!(m2 > 0.0)) return est;

    const double radicand = std::max(0.0, 2.0 * m2 * m2 - moments.m4);
    const double signal = std::sqrt(radicand);
    const double noise = m2 - signal;
    est.value = noise <= 1e-9 * m2 ? kSnrCap : std::min(signal / noise, kSnrCap);
    return est;
}

SnrEstimate m2m4_snr(std::span<const Complex> block)
{
    SnrEstimate est = m2m4_snr(compute_moments(block));
    est.block_len = block.size();
    return est;
}

SnrEstimate evm_snr(std::span<const Complex> received, std::span<const Complex> reference)
{
    if (received.size() != reference.size()) throw Error("length mismatch");
    if (received.empty()) throw Error("empty input");

    double err = 0.0;
    for (std::size_t n = 0; n < received.size(); ++n) err += std::norm(received[n] - reference[n]);
    err /= static_cast<double>(received.size());

    constexpr double p0 = 1.0;
    SnrEstimate est;
    est.method = SnrMethod::evm_aided;
    est.block_len = received.size();
    est.value = err <= p0 / kSnrCap ? kSnrCap : p0 / err;
    return est;
}

SnrEstimate evm_snr_blind(std::span<const Complex> received)
{
    if (received.empty()) throw Error("empty input");
    std::vector<Complex> decided(received.size());
    std::transform(received.begin(), received.end(), decided.begin(),
                   [](const Complex& s) { return qpsk_point(qpsk_quadrant(s)); });
    SnrEstimate est = evm_snr(received, decided);
    est.method = SnrMethod::evm_blind;
    return est;
}

std::vector<SnrEstimate> blockwise_estimate(const SymbolBlock& symbols, std::size_t block_len,
                                            std::span<const SnrMethod> methods, const SymbolBlock* reference)
{
    if (block_len < 100) throw Error("block_len must be >= 100");
    if (!(symbols.symbol_rate > 0.0)) throw Error("symbol_rate must be positive");
    const bool needs_ref = std::find(methods.begin(), methods.end(), SnrMethod::evm_aided) != methods.end();
    if (needs_ref && (reference == nullptr || reference->size() < symbols.size()))
        throw Error("evm_aided needs a reference at least as long as the input");

    const std::size_t n_blocks = symbols.size() / block_len;
    std::vector<SnrEstimate> out;
    out.reserve(n_blocks * methods.size());
    std::vector<Complex> scaled(block_len);

    for (std::size_t k = 0; k < n_blocks; ++k) {
        const std::span<const Complex> block(symbols.symbols.data() + k * block_len, block_len);
        const double time = (static_cast<double>(k) + 0.5) * static_cast<double>(block_len) / symbols.symbol_rate;

        bool scaled_ready = false;
        auto unit_power = [&]() -> std::span<const Complex> {
            if (!scaled_ready) {
                const double p = average_power(block);
                const double g = p > 0.0 ? 1.0 / std::sqrt(p) : 1.0;
                std::transform(block.begin(), block.end(), scaled.begin(), [g](const Complex& s) { return s * g; });
                scaled_ready = true;
            }
            return scaled;
        };

        for (const SnrMethod m : methods) {
            SnrEstimate est;
            switch (m) {
            case SnrMethod::m2m4: est = m2m4_snr(block); break;
            case SnrMethod::evm_blind: est = evm_snr_blind(unit_power()); break;
            case SnrMethod::evm_aided:
                est = evm_snr(unit_power(), std::span<const Complex>(reference->symbols.data() + k * block_len, block_len));
                break;
            }
            est.method = m;
            est.block_index = k;
            est.block_len = block_len;
            est.time = time;
            out.push_back(est);
        }
    }
    return out;
}

} // namespace fsosnr
