#include "fsosnr/metrics.hpp"

#include "fft.hpp"
#include "fsosnr/error.hpp"

#include <algorithm>
#include <cmath>

namespace fsosnr {

double snr_to_ber(double snr) noexcept
{
    if (!(snr > 0.0)) return 1.0;
    return std::clamp(std::erfc(std::sqrt(snr / 2.0)), 0.0, 1.0);
}

Alignment prbs_align(std::span<const std::uint8_t> received, std::span<const std::uint8_t> reference)
{
    const std::size_t period = reference.size();
    if (period == 0) throw Error("empty reference");
    if (received.size() < period) throw Error("alignment needs at least one reference period of bits");

    std::vector<Complex> r(period);
    std::vector<Complex> p(period);
    for (std::size_t i = 0; i < period; ++i) {
        r[i] = received[i] ? -1.0 : 1.0;
        p[i] = reference[i] ? -1.0 : 1.0;
    }
    detail::fft_inplace(r);
    detail::fft_inplace(p);
    for (std::size_t k = 0; k < period; ++k) r[k] = std::conj(r[k]) * p[k];
    detail::fft_inplace(r, detail::FftDirection::inverse);

    // r[o] / period = sum_i rx[i] * ref[(i + o) mod period], an integer in [-period, period].
    const auto n = static_cast<double>(period);
    std::size_t best = 0;
    double best_corr = -1e300;
    for (std::size_t o = 0; o < period; ++o) {
        const double c = std::round(r[o].real() / n);
        if (c > best_corr) {
            best_corr = c;
            best = o;
        }
    }
    const double agreement = (best_corr / n + 1.0) / 2.0;
    if (!(agreement > kAlignmentThreshold)) throw Error("no alignment found");
    return {best, agreement};
}

std::vector<BerPoint> counted_ber(std::span<const std::uint8_t> received, std::span<const std::uint8_t> reference,
                                  std::size_t window, double bit_rate, std::size_t stride)
{
    if (received.size() != reference.size()) throw Error("length mismatch");
    if (window == 0 || stride == 0) throw Error("window and stride must be positive");
    if (received.size() < window) throw Error("sequence shorter than the BER window");

    std::vector<std::size_t> cum(received.size() + 1, 0);
    for (std::size_t i = 0; i < received.size(); ++i)
        cum[i + 1] = cum[i] + ((received[i] != 0) != (reference[i] != 0) ? 1 : 0);

    std::vector<BerPoint> out;
    out.reserve((received.size() - window) / stride + 1);
    for (std::size_t start = 0; start + window <= received.size(); start += stride) {
        const double errors = static_cast<double>(cum[start + window] - cum[start]);
        const double centre = static_cast<double>(start + window / 2);
        out.push_back({centre / bit_rate, errors / static_cast<double>(window), BerSource::counted});
    }
    return out;
}

std::optional<double> window_ber(std::span<const std::uint8_t> received, std::span<const std::uint8_t> reference,
                                 std::size_t offset, std::size_t centre, std::size_t window)
{
    const std::size_t period = reference.size();
    if (period == 0 || window == 0 || centre < window / 2) return std::nullopt;
    const std::size_t start = centre - window / 2;
    if (start + window > received.size()) return std::nullopt;

    std::size_t errors = 0;
    std::size_t ref_idx = (start + offset) % period;
    for (std::size_t i = start; i < start + window; ++i) {
        errors += (received[i] != 0) != (reference[ref_idx] != 0) ? 1 : 0;
        if (++ref_idx == period) ref_idx = 0;
    }
    return static_cast<double>(errors) / static_cast<double>(window);
}

std::vector<ResyncEvent> resync_controller(std::span<const SnrEstimate> trace, double threshold_db,
                                           std::size_t refractory_blocks)
{
    const double threshold = db_to_linear(threshold_db);
    std::vector<ResyncEvent> events;
    std::size_t next_allowed = 0;
    for (std::size_t k = 1; k < trace.size(); ++k) {
        if (trace[k - 1].value < threshold && trace[k].value >= threshold && trace[k].block_index >= next_allowed) {
            ResyncEvent ev;
            ev.time = trace[k].time;
            ev.block_index = trace[k].block_index;
            events.push_back(ev);
            next_allowed = trace[k].block_index + std::max<std::size_t>(refractory_blocks, 1);
        }
    }
    return events;
}

} // namespace fsosnr
