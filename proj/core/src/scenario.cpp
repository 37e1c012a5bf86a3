#include "fsosnr/scenario.hpp"

#include "fsosnr/error.hpp"
#include "seeding.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace fsosnr {

void ScenarioConfig::sync_noise_power() { impairments.noise_power = db_to_linear(-fading.snr_ceiling_db); }

void validate(const ScenarioConfig& cfg)
{
    auto check = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    check(cfg.symbol_rate > 0.0 && std::isfinite(cfg.symbol_rate), "symbol_rate must be positive");
    check(cfg.block_len >= 100, "block_len must be >= 100");
    check(cfg.n_symbols >= cfg.block_len, "n_symbols must be >= block_len");
    check(cfg.sps >= 2 && cfg.sps % 2 == 0, "sps must be an even number >= 2");
    check(cfg.rrc_rolloff > 0.0 && cfg.rrc_rolloff <= 1.0, "rrc.rolloff must be in (0, 1]");
    check(cfg.rrc_span >= 2, "rrc.span must be >= 2");
    check(cfg.ber_window >= 2, "ber_window must be >= 2");
    check(cfg.resync_refractory_blocks >= 1, "resync_refractory_blocks must be >= 1");
    check(cfg.resync_method != SnrMethod::evm_aided, "resync_method must be m2m4 or evm_blind");
    check(std::isfinite(cfg.resync_threshold_db), "resync_threshold_db must be finite");
    check(std::abs(cfg.impairments.cfo) < cfg.symbol_rate / 8.0,
          "impairments.cfo must be within the fourth-power estimator range (|cfo| < symbol_rate / 8)");
    try {
        validate(cfg.fading);
        validate(cfg.impairments);
        validate(cfg.cma);
        validate(cfg.bps);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

ScenarioConfig preset(const std::string& name)
{
    ScenarioConfig cfg;
    cfg.symbol_rate = 4e9;
    cfg.fading.shape = FadingShape::triangular;
    cfg.fading.period = 250e-6;
    cfg.fading.snr_floor_db = -10.0;
    cfg.fading.phase_offset = 0.0;
    // Two fading periods.
    cfg.n_symbols = static_cast<std::size_t>(std::llround(2.0 * cfg.fading.period * cfg.symbol_rate));
    cfg.impairments.cfo = 1e6;
    cfg.impairments.linewidth = 1e-5 * cfg.symbol_rate;

    if (name == "fig2a") {
        cfg.fading.snr_ceiling_db = 7.0;
    } else if (name == "fig2b") {
        cfg.fading.snr_ceiling_db = 10.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig2a or fig2b)");
    }
    cfg.sync_noise_power();
    return cfg;
}

MethodError log_ber_error(std::span<const double> estimated, std::span<const std::optional<double>> counted)
{
    constexpr double lo = 1e-6;
    constexpr double hi = 0.5;
    MethodError out;
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(estimated.size(), counted.size()); ++i) {
        if (!counted[i]) continue;
        const double e = estimated[i];
        const double c = *counted[i];
        if (e < lo || e > hi || c < lo || c > hi) continue;
        const double d = std::abs(std::log10(e) - std::log10(c));
        sum += d;
        out.max_log_error = std::max(out.max_log_error, d);
        ++out.blocks;
    }
    out.mean_log_error = out.blocks ? sum / static_cast<double>(out.blocks) : std::numeric_limits<double>::quiet_NaN();
    if (!out.blocks) out.max_log_error = std::numeric_limits<double>::quiet_NaN();
    return out;
}

namespace {

Summary summarize_lenient(const RunResult& result)
{
    std::vector<double> m2m4;
    std::vector<double> evm;
    std::vector<std::optional<double>> counted;
    std::size_t invalid = 0;
    for (const auto& b : result.blocks) {
        m2m4.push_back(b.ber_m2m4);
        evm.push_back(b.ber_evm);
        counted.push_back(b.ber_counted);
        if (!b.ber_counted) ++invalid;
    }
    Summary s;
    s.m2m4 = log_ber_error(m2m4, counted);
    s.evm = log_ber_error(evm, counted);
    s.resync_count = result.resync_events.size();
    s.n_blocks = result.blocks.size();
    s.invalid_fraction = s.n_blocks ? static_cast<double>(invalid) / static_cast<double>(s.n_blocks) : 0.0;
    return s;
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
    try {
        return std::forward<F>(f)();
    } catch (const PipelineError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineError(name, e.what());
    }
}

} // namespace

Summary summarize(const RunResult& result)
{
    if (result.blocks.empty()) throw Error("empty trace");
    Summary s = summarize_lenient(result);
    if (s.m2m4.blocks == 0 && s.evm.blocks == 0) throw Error("no valid comparison blocks");
    return s;
}

RunResult run_scenario(const ScenarioConfig& cfg)
{
    validate(cfg);

    const Bits& reference = prbs15_period();
    const std::size_t period = reference.size();

    // Transmitter.
    const auto [tx_wave, filter] = stage("tx", [&] {
        PrbsState prbs;
        const Bits bits = prbs_generate(prbs, 2 * cfg.n_symbols);
        const SymbolBlock diff = diff_encode(qpsk_map(bits, cfg.symbol_rate));
        RrcFilter f = rrc_design(cfg.rrc_rolloff, cfg.rrc_span, cfg.sps);
        return std::pair{pulse_shape(diff, f), f};
    });

    const IqStream rx_wave = stage("channel", [&] {
        return apply_channel(tx_wave.stream, cfg.fading, cfg.impairments, detail::derive_seed(cfg.seed, 0x6368));
    });

    // Receiver: matched filter and delay removal, then back to 2 samples per symbol.
    IqStream x = stage("matched_filter", [&] {
        IqStream mf = matched_filter(rx_wave, filter);
        mf = align_samples(mf, 2 * tx_wave.group_delay, cfg.n_symbols * static_cast<std::size_t>(cfg.sps));
        if (cfg.sps == 2) return mf;
        const auto decim = static_cast<std::size_t>(cfg.sps / 2);
        IqStream two;
        two.sample_rate = mf.sample_rate / static_cast<double>(decim);
        two.samples.reserve(mf.size() / decim);
        for (std::size_t i = 0; i < mf.size(); i += decim) two.samples.push_back(mf.samples[i]);
        return two;
    });

    RunResult result;
    x = stage("coarse_frequency_recovery", [&] {
        const CfoEstimate est = coarse_cfo_estimate(x);
        result.coarse_cfo = est.cfo;
        return apply_cfo(x, -est.cfo);
    });

    SymbolBlock eq = stage("cma", [&] { return cma_equalize(x, cfg.cma); });
    x = IqStream{};

    eq = stage("fine_frequency_recovery", [&] {
        const CfoEstimate est = fine_cfo_estimate(eq);
        result.fine_cfo = est.cfo;
        return apply_cfo(eq, -est.cfo);
    });

    const SymbolBlock recovered = stage("phase_recovery", [&] { return bps_recover(eq, cfg.bps).symbols; });
    eq = SymbolBlock{};

    // rx_bits[b] belongs to symbol b / 2 + 1; symbol 0 is the differential reference.
    const Bits rx_bits = stage("decision", [&] { return diff_decode(hard_decision(recovered)); });

    const std::array methods{SnrMethod::m2m4, SnrMethod::evm_blind};
    const std::vector<SnrEstimate> estimates =
        stage("estimation", [&] { return blockwise_estimate(recovered, cfg.block_len, methods); });

    stage("metrics", [&] {
        const std::size_t n_blocks = estimates.size() / methods.size();
        std::vector<SnrEstimate> trigger;
        trigger.reserve(n_blocks);
        for (std::size_t k = 0; k < n_blocks; ++k) {
            const SnrEstimate& m = estimates[2 * k];
            const SnrEstimate& e = estimates[2 * k + 1];
            trigger.push_back(cfg.resync_method == SnrMethod::m2m4 ? m : e);
            result.estimate_trace.push_back(m);
            result.estimate_trace.push_back(e);
        }
        result.resync_events = resync_controller(trigger, cfg.resync_threshold_db, cfg.resync_refractory_blocks);

        auto try_align = [&](std::size_t k) -> std::optional<std::pair<std::size_t, double>> {
            const std::size_t first_symbol = k * cfg.block_len;
            const std::size_t start = first_symbol > 0 ? 2 * (first_symbol - 1) : 0;
            if (start + period > rx_bits.size()) return std::nullopt;
            try {
                const Alignment a = prbs_align(std::span(rx_bits).subspan(start), reference);
                return std::pair{(a.offset + period - start % period) % period, a.agreement};
            } catch (const Error&) {
                return std::nullopt;
            }
        };

        bool synced = false;
        std::size_t offset = 0;
        std::size_t next_event = 0;
        ResyncEvent* pending = nullptr;
        for (std::size_t k = 0; k < n_blocks; ++k) {
            BlockRecord rec;
            rec.block_index = k;
            rec.m2m4 = estimates[2 * k];
            rec.evm_blind = estimates[2 * k + 1];
            rec.time = rec.m2m4.time;
            rec.snr_true_db = profile_snr_at(cfg.fading, rec.time);
            rec.ber_m2m4 = snr_to_ber(rec.m2m4.value);
            rec.ber_evm = snr_to_ber(rec.evm_blind.value);

            if (next_event < result.resync_events.size() && result.resync_events[next_event].block_index == k) {
                rec.resync = true;
                synced = false;
                pending = &result.resync_events[next_event++];
            }
            if (!synced) {
                if (const auto a = try_align(k)) {
                    synced = true;
                    offset = a->first;
                    if (pending) {
                        pending->alignment_offset = offset;
                        pending->aligned_block = k;
                        pending->agreement = a->second;
                        pending = nullptr;
                    }
                }
            }
            if (synced) {
                const double centre_symbol = (static_cast<double>(k) + 0.5) * static_cast<double>(cfg.block_len);
                const auto centre_bit = static_cast<std::size_t>(2.0 * centre_symbol) - 2;
                rec.ber_counted = window_ber(rx_bits, reference, offset, centre_bit, cfg.ber_window);
            }

            result.ber_points.push_back({rec.time, rec.ber_m2m4, BerSource::m2m4});
            result.ber_points.push_back({rec.time, rec.ber_evm, BerSource::evm});
            if (rec.ber_counted) result.ber_points.push_back({rec.time, *rec.ber_counted, BerSource::counted});
            result.blocks.push_back(rec);
        }
    });

    result.summary = summarize_lenient(result);
    return result;
}

} // namespace fsosnr
