#pragma once

#include "fsosnr/estimators.hpp"
#include "fsosnr/tx.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fsosnr {

enum class BerSource { counted, m2m4, evm };

struct BerPoint {
    double time = 0.0; // s
    double ber = 0.0;
    BerSource source = BerSource::counted;
};

struct ResyncEvent {
    double time = 0.0;
    std::size_t block_index = 0;
    /// Absolute bit offset into the PRBS period once alignment succeeded.
    std::optional<std::size_t> alignment_offset;
    /// Block at which alignment first succeeded after this event.
    std::optional<std::size_t> aligned_block;
    double agreement = 0.0;
};

/// Differentially decoded QPSK bit error rate, erfc(sqrt(snr/2)), clamped to [0, 1].
double snr_to_ber(double snr) noexcept;

struct Alignment {
    std::size_t offset = 0; // received[i] ~ reference[(i + offset) % reference.size()]
    double agreement = 0.0;
};

inline constexpr double kAlignmentThreshold = 0.9;

/// Cyclic cross-correlation of the first reference.size() received bits with
/// the periodic reference. Returns the offset of maximum bit agreement.
/// Throws "no alignment found" when that agreement is <= 0.9, and rejects
/// inputs shorter than one reference period.
Alignment prbs_align(std::span<const std::uint8_t> received, std::span<const std::uint8_t> reference);

/// Centered moving average of the bit-error indicator over `window` bits,
/// one point every `stride` positions where the whole window fits. Point i is
/// timestamped at its centre bit divided by `bit_rate`.
/// Throws when the sequences differ in length or are shorter than `window`.
std::vector<BerPoint> counted_ber(std::span<const std::uint8_t> received,
                                  std::span<const std::uint8_t> reference, std::size_t window,
                                  double bit_rate, std::size_t stride = 1);

/// Error rate of the `window` bits centred on `centre`, comparing received[i]
/// against reference[(i + offset) % period]. Empty if the window does not fit.
std::optional<double> window_ber(std::span<const std::uint8_t> received,
                                 std::span<const std::uint8_t> reference, std::size_t offset,
                                 std::size_t centre, std::size_t window);

/// Rising threshold crossings snr(k-1) < threshold <= snr(k). After an event
/// at block k no further event fires before block k + refractory_blocks.
std::vector<ResyncEvent> resync_controller(std::span<const SnrEstimate> trace, double threshold_db = 0.0,
                                           std::size_t refractory_blocks = 1);

} // namespace fsosnr
