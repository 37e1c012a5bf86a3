// fsosnr: run fading-link SNR estimation scenarios and write per-block traces.
//
//   fsosnr run    --config <path> --seed <int> --out <dir>
//   fsosnr sweep  --config <path> --seeds <a>..<b> --out <dir> [--jobs N]
//   fsosnr preset fig2a|fig2b --out <dir> [--seed <int>]
//
// Exit codes: 0 success, 1 configuration error, 2 pipeline error.

#include "fsosnr/config.hpp"
#include "fsosnr/error.hpp"
#include "fsosnr/output.hpp"
#include "fsosnr/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitPipeline = 2;

struct Overrides {
    std::optional<std::size_t> block_len;
    std::optional<double> ceiling_db;
    std::optional<double> floor_db;

    void add_to(CLI::App& app)
    {
        app.add_option("--block-len", block_len, "Symbols per estimation block");
        app.add_option("--ceiling-db", ceiling_db, "SNR ceiling of the fading profile (dB)");
        app.add_option("--floor-db", floor_db, "SNR floor of the fading profile (dB)");
    }

    void apply(fsosnr::ScenarioConfig& cfg) const
    {
        if (block_len) cfg.block_len = *block_len;
        if (ceiling_db) cfg.fading.snr_ceiling_db = *ceiling_db;
        if (floor_db) cfg.fading.snr_floor_db = *floor_db;
        cfg.sync_noise_power();
        fsosnr::validate(cfg);
    }
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw fsosnr::ConfigError("--seeds expects <a>..<b>, got '" + s + "'");
    auto parse = [&](std::string_view part) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw fsosnr::ConfigError("bad seed '" + std::string(part) + "' in --seeds");
        return v;
    };
    const std::string_view view(s);
    const auto a = parse(view.substr(0, dots));
    const auto b = parse(view.substr(dots + 2));
    if (b < a) throw fsosnr::ConfigError("--seeds range is empty");
    return {a, b};
}

void run_one(const fsosnr::ScenarioConfig& cfg, const std::filesystem::path& out)
{
    const auto result = fsosnr::run_scenario(cfg);
    fsosnr::write_run(out, result, cfg);
}

void sweep(const fsosnr::ScenarioConfig& base, std::uint64_t first, std::uint64_t last,
           const std::filesystem::path& out, unsigned jobs)
{
    const std::uint64_t total = last - first + 1;
    std::atomic<std::uint64_t> next{0};
    std::mutex err_mutex;
    std::optional<fsosnr::PipelineError> failure;

    auto worker = [&] {
        for (std::uint64_t i = next++; i < total; i = next++) {
            fsosnr::ScenarioConfig cfg = base;
            cfg.seed = first + i;
            try {
                run_one(cfg, out / ("seed_" + std::to_string(cfg.seed)));
            } catch (const fsosnr::PipelineError& e) {
                std::lock_guard lock(err_mutex);
                if (!failure) failure = e;
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) throw *failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fading-link blind SNR estimation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string seeds;
    std::string preset_name;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool dump_config = false;
    Overrides overrides;

    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("--config", config_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Random seed")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    overrides.add_to(*run);

    auto* sw = app.add_subcommand("sweep", "Run one scenario over a seed range");
    sw->add_option("--config", config_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sw->add_option("--seeds", seeds, "Seed range <a>..<b>, inclusive")->required();
    sw->add_option("--out", out_dir, "Output directory; one seed_<n>/ per seed")->required();
    sw->add_option("--jobs", jobs, "Concurrent runs");
    overrides.add_to(*sw);

    auto* pre = app.add_subcommand("preset", "Run a built-in scenario");
    pre->add_option("name", preset_name, "fig2a (7 dB ceiling) or fig2b (10 dB ceiling)")
        ->required()
        ->check(CLI::IsMember({"fig2a", "fig2b"}));
    pre->add_option("--out", out_dir, "Output directory");
    pre->add_option("--seed", seed, "Random seed");
    pre->add_flag("--dump-config", dump_config, "Print the preset as a scenario file and exit");
    overrides.add_to(*pre);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            auto cfg = fsosnr::load_config(config_path);
            cfg.seed = seed;
            overrides.apply(cfg);
            run_one(cfg, out_dir);
        } else if (*sw) {
            auto cfg = fsosnr::load_config(config_path);
            overrides.apply(cfg);
            const auto [a, b] = parse_seed_range(seeds);
            sweep(cfg, a, b, out_dir, jobs);
        } else if (*pre) {
            auto cfg = fsosnr::preset(preset_name);
            cfg.seed = seed;
            overrides.apply(cfg);
            if (dump_config) {
                std::cout << fsosnr::config_to_json(cfg).dump(2) << '\n';
                return 0;
            }
            if (out_dir.empty()) throw fsosnr::ConfigError("preset: --out is required");
            run_one(cfg, out_dir);
        }
    } catch (const fsosnr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fsosnr::PipelineError& e) {
        std::cerr << "pipeline error in stage " << e.what() << '\n';
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kExitPipeline;
    }
    return 0;
}
