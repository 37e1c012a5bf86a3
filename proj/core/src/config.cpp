#include "fsosnr/config.hpp"

#include "fsosnr/error.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace fsosnr {

namespace {

using json = nlohmann::json;
using Handler = std::function<void(const json&, const std::string&)>;

void walk(const json& obj, const std::string& prefix, const std::map<std::string, Handler>& handlers)
{
    if (!obj.is_object()) throw ConfigError("'" + prefix + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        const auto it = handlers.find(key);
        if (it == handlers.end()) throw ConfigError("unknown key '" + path + "'");
        it->second(value, path);
    }
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) throw ConfigError("'" + path + "' must be a number");
    return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& path)
{
    if (!v.is_number_unsigned()) throw ConfigError("'" + path + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

int integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) throw ConfigError("'" + path + "' must be an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& path)
{
    if (!v.is_string()) throw ConfigError("'" + path + "' must be a string");
    return v.get<std::string>();
}

template <class T>
Handler set_number(T& field)
{
    return [&field](const json& v, const std::string& p) { field = static_cast<T>(number(v, p)); };
}
template <class T>
Handler set_count(T& field)
{
    return [&field](const json& v, const std::string& p) { field = static_cast<T>(count(v, p)); };
}
Handler set_int(int& field)
{
    return [&field](const json& v, const std::string& p) { field = integer(v, p); };
}

FadingShape parse_shape(const std::string& s)
{
    if (s == "triangular") return FadingShape::triangular;
    if (s == "constant") return FadingShape::constant;
    throw ConfigError("fading.shape must be 'triangular' or 'constant'");
}

SnrMethod parse_method(const std::string& s)
{
    if (s == "m2m4") return SnrMethod::m2m4;
    if (s == "evm_blind") return SnrMethod::evm_blind;
    throw ConfigError("resync.method must be 'm2m4' or 'evm_blind'");
}

} // namespace

ScenarioConfig config_from_json(const json& j, ScenarioConfig base)
{
    ScenarioConfig cfg = std::move(base);
    if (j.is_object() && j.contains("preset")) cfg = preset(text(j.at("preset"), "preset"));

    const std::map<std::string, Handler> rrc{
        {"rolloff", set_number(cfg.rrc_rolloff)},
        {"span", set_int(cfg.rrc_span)},
    };
    const std::map<std::string, Handler> fading{
        {"shape", [&](const json& v, const std::string& p) { cfg.fading.shape = parse_shape(text(v, p)); }},
        {"period", set_number(cfg.fading.period)},
        {"snr_ceiling_db", set_number(cfg.fading.snr_ceiling_db)},
        {"snr_floor_db", set_number(cfg.fading.snr_floor_db)},
        {"phase_offset", set_number(cfg.fading.phase_offset)},
    };
    const std::map<std::string, Handler> impairments{
        {"cfo_hz", set_number(cfg.impairments.cfo)},
        {"linewidth_hz", set_number(cfg.impairments.linewidth)},
    };
    const std::map<std::string, Handler> cma{
        {"num_taps", set_int(cfg.cma.num_taps)},
        {"step_size", set_number(cfg.cma.step_size)},
        {"modulus_target", set_number(cfg.cma.modulus_target)},
        {"iterations_per_sample", set_int(cfg.cma.iterations_per_sample)},
        {"preamble_samples", set_count(cfg.cma.preamble_samples)},
    };
    const std::map<std::string, Handler> bps{
        {"num_test_phases", set_int(cfg.bps.num_test_phases)},
        {"window_half_width", set_int(cfg.bps.window_half_width)},
    };
    const std::map<std::string, Handler> resync{
        {"threshold_db", set_number(cfg.resync_threshold_db)},
        {"refractory_blocks", set_count(cfg.resync_refractory_blocks)},
        {"method", [&](const json& v, const std::string& p) { cfg.resync_method = parse_method(text(v, p)); }},
    };
    const std::map<std::string, Handler> top{
        {"preset", [](const json&, const std::string&) {}},
        {"symbol_rate", set_number(cfg.symbol_rate)},
        {"n_symbols", set_count(cfg.n_symbols)},
        {"sps", set_int(cfg.sps)},
        {"rrc", [&](const json& v, const std::string& p) { walk(v, p, rrc); }},
        {"fading", [&](const json& v, const std::string& p) { walk(v, p, fading); }},
        {"impairments", [&](const json& v, const std::string& p) { walk(v, p, impairments); }},
        {"cma", [&](const json& v, const std::string& p) { walk(v, p, cma); }},
        {"bps", [&](const json& v, const std::string& p) { walk(v, p, bps); }},
        {"block_len", set_count(cfg.block_len)},
        {"ber_window", set_count(cfg.ber_window)},
        {"resync", [&](const json& v, const std::string& p) { walk(v, p, resync); }},
        {"seed", set_count(cfg.seed)},
    };
    walk(j, "", top);
    cfg.sync_noise_power();
    return cfg;
}

json config_to_json(const ScenarioConfig& cfg)
{
    return json{
        {"symbol_rate", cfg.symbol_rate},
        {"n_symbols", cfg.n_symbols},
        {"sps", cfg.sps},
        {"rrc", {{"rolloff", cfg.rrc_rolloff}, {"span", cfg.rrc_span}}},
        {"fading",
         {{"shape", cfg.fading.shape == FadingShape::triangular ? "triangular" : "constant"},
          {"period", cfg.fading.period},
          {"snr_ceiling_db", cfg.fading.snr_ceiling_db},
          {"snr_floor_db", cfg.fading.snr_floor_db},
          {"phase_offset", cfg.fading.phase_offset}}},
        {"impairments", {{"cfo_hz", cfg.impairments.cfo}, {"linewidth_hz", cfg.impairments.linewidth}}},
        {"cma",
         {{"num_taps", cfg.cma.num_taps},
          {"step_size", cfg.cma.step_size},
          {"modulus_target", cfg.cma.modulus_target},
          {"iterations_per_sample", cfg.cma.iterations_per_sample},
          {"preamble_samples", cfg.cma.preamble_samples}}},
        {"bps", {{"num_test_phases", cfg.bps.num_test_phases}, {"window_half_width", cfg.bps.window_half_width}}},
        {"block_len", cfg.block_len},
        {"ber_window", cfg.ber_window},
        {"resync",
         {{"threshold_db", cfg.resync_threshold_db},
          {"refractory_blocks", cfg.resync_refractory_blocks},
          {"method", std::string(to_string(cfg.resync_method))}}},
        {"seed", cfg.seed},
    };
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in '" + path.string() + "': " + e.what());
    }
    ScenarioConfig cfg = config_from_json(j);
    validate(cfg);
    return cfg;
}

} // namespace fsosnr
