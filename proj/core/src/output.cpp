#include "fsosnr/output.hpp"

#include "fsosnr/config.hpp"
#include "fsosnr/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace fsosnr {

std::string format_float(double v)
{
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

namespace {

std::string snr_db_field(double linear) { return linear > 0.0 ? format_float(linear_to_db(linear)) : std::string{}; }

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json method_json(const MethodError& m)
{
    return {{"mean_log10_error", finite_or_null(m.mean_log_error)},
            {"max_log10_error", finite_or_null(m.max_log_error)},
            {"blocks", m.blocks}};
}

} // namespace

std::string trace_csv(const RunResult& result)
{
    std::string out = kTraceHeader;
    out += '\n';
    for (const auto& b : result.blocks) {
        out += format_float(b.time * 1e6);
        out += ',';
        out += format_float(b.snr_true_db);
        out += ',';
        out += snr_db_field(b.m2m4.value);
        out += ',';
        out += snr_db_field(b.evm_blind.value);
        out += ',';
        if (b.ber_counted) out += format_float(*b.ber_counted);
        out += ',';
        out += format_float(b.ber_m2m4);
        out += ',';
        out += format_float(b.ber_evm);
        out += ',';
        out += b.resync ? '1' : '0';
        out += '\n';
    }
    return out;
}

nlohmann::json summary_json(const RunResult& result, const ScenarioConfig& cfg)
{
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : result.resync_events) {
        nlohmann::json ev{{"time_us", e.time * 1e6}, {"block_index", e.block_index}};
        ev["aligned_block"] = e.aligned_block ? nlohmann::json(*e.aligned_block) : nlohmann::json(nullptr);
        ev["alignment_offset"] = e.alignment_offset ? nlohmann::json(*e.alignment_offset) : nlohmann::json(nullptr);
        ev["agreement"] = e.aligned_block ? nlohmann::json(e.agreement) : nlohmann::json(nullptr);
        events.push_back(std::move(ev));
    }
    const Summary& s = result.summary;
    return {
        {"m2m4", method_json(s.m2m4)},
        {"evm_blind", method_json(s.evm)},
        {"resync_count", s.resync_count},
        {"resync_events", std::move(events)},
        {"invalid_fraction", s.invalid_fraction},
        {"n_blocks", s.n_blocks},
        {"coarse_cfo_hz", result.coarse_cfo},
        {"fine_cfo_hz", result.fine_cfo},
        {"config", config_to_json(cfg)},
    };
}

void write_run(const std::filesystem::path& dir, const RunResult& result, const ScenarioConfig& cfg)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write '" + (dir / name).string() + "'");
        f << body;
    };
    write("trace.csv", trace_csv(result));
    write("summary.json", summary_json(result, cfg).dump(2) + "\n");
}

} // namespace fsosnr
