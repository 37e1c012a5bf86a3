#pragma once

#include "fsosnr/channel.hpp"
#include "fsosnr/estimators.hpp"
#include "fsosnr/metrics.hpp"
#include "fsosnr/rx.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fsosnr {

struct ScenarioConfig {
    double symbol_rate = 4e9;
    std::size_t n_symbols = 2'000'000;
    int sps = 2;
    double rrc_rolloff = 0.1;
    int rrc_span = 32;
    FadingProfile fading;
    /// noise_power is tied to the ceiling: 10^(-ceiling/10). Call sync_noise_power() after editing the ceiling.
    ImpairmentConfig impairments;
    CmaConfig cma;
    BpsConfig bps;
    std::size_t block_len = 10000;
    std::size_t ber_window = 50000;
    double resync_threshold_db = 0.0;
    std::size_t resync_refractory_blocks = 1;
    SnrMethod resync_method = SnrMethod::m2m4;
    std::uint64_t seed = 1;

    void sync_noise_power();
};

/// Throws ConfigError on any invalid field.
void validate(const ScenarioConfig& cfg);

/// Named presets reproducing the two fading experiments: ceilings 7 dB and 10 dB.
ScenarioConfig preset(const std::string& name);

/// One row per estimation block.
struct BlockRecord {
    std::size_t block_index = 0;
    double time = 0.0;
    double snr_true_db = 0.0;
    SnrEstimate m2m4;
    SnrEstimate evm_blind;
    std::optional<double> ber_counted; // empty while alignment is lost
    double ber_m2m4 = 0.0;
    double ber_evm = 0.0;
    bool resync = false;
};

struct MethodError {
    double mean_log_error = 0.0;
    double max_log_error = 0.0;
    std::size_t blocks = 0;
};

struct Summary {
    MethodError m2m4;
    MethodError evm;
    std::size_t resync_count = 0;
    double invalid_fraction = 0.0;
    std::size_t n_blocks = 0;
};

struct RunResult {
    std::vector<BlockRecord> blocks;
    std::vector<SnrEstimate> estimate_trace; // m2m4 and evm_blind per block
    std::vector<BerPoint> ber_points;        // all three sources at block centres
    std::vector<ResyncEvent> resync_events;
    Summary summary;
    double coarse_cfo = 0.0;
    double fine_cfo = 0.0;
};

/// Mean and max |log10(est) - log10(counted)| over blocks where both lie in [1e-6, 0.5].
/// Throws when no block qualifies for either method.
Summary summarize(const RunResult& result);

/// Comparison kernel behind summarize(); pairs with an empty counted value are skipped.
MethodError log_ber_error(std::span<const double> estimated, std::span<const std::optional<double>> counted);

/// Runs tx -> channel -> rx -> estimation -> metrics. Deterministic in cfg.seed.
/// Stage failures surface as PipelineError.
RunResult run_scenario(const ScenarioConfig& cfg);

} // namespace fsosnr
