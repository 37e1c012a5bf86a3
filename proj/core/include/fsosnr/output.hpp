#pragma once

#include "fsosnr/scenario.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

namespace fsosnr {

inline constexpr const char* kTraceHeader =
    "time_us,snr_true_db,snr_m2m4_db,snr_evm_db,ber_counted,ber_m2m4,ber_evm,resync";

/// Nine significant digits, shortest form.
std::string format_float(double v);

std::string trace_csv(const RunResult& result);
nlohmann::json summary_json(const RunResult& result, const ScenarioConfig& cfg);

/// Writes trace.csv and summary.json under `dir`, creating it if needed.
void write_run(const std::filesystem::path& dir, const RunResult& result, const ScenarioConfig& cfg);

} // namespace fsosnr
