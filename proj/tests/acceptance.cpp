// Acceptance gate. Each criterion prints detail lines and then exactly one
// "PASS"/"FAIL" line; the exit status is non-zero if any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include "fsosnr/channel.hpp"
#include "fsosnr/estimators.hpp"
#include "fsosnr/metrics.hpp"
#include "fsosnr/output.hpp"
#include "fsosnr/rx.hpp"
#include "fsosnr/scenario.hpp"
#include "fsosnr/tx.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace fsosnr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double to_db(double x) { return 10.0 * std::log10(x); }

bool report(int id, bool ok, const std::string& what)
{
    std::printf("%s C%d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Unit-power QPSK from the PRBS with AWGN of variance 10^(-snr/10).
SymbolBlock noisy_qpsk(std::size_t n, double snr_db, std::uint64_t seed, SymbolBlock* clean = nullptr)
{
    PrbsState st;
    // Start each seed at a different point of the sequence.
    prbs_generate(st, seed % kPrbs15Period);
    const SymbolBlock tx = qpsk_map(prbs_generate(st, 2 * n), 4e9);
    if (clean) *clean = tx;
    return {add_awgn(IqStream{tx.symbols, tx.symbol_rate}, db_to_linear(-snr_db), seed).samples, tx.symbol_rate};
}

bool c1()
{
    const auto t0 = Clock::now();
    const int seeds = 20;
    const std::size_t n = 1'000'000;
    bool ok = true;
    double worst = 0.0;
    for (double snr : {3.0, 5.0, 7.0, 10.0, 15.0}) {
        double m2m4 = 0.0;
        double evm = 0.0;
        for (int s = 0; s < seeds; ++s) {
            SymbolBlock tx;
            const SymbolBlock rx = noisy_qpsk(n, snr, 1000 + s, &tx);
            m2m4 += to_db(m2m4_snr(rx.symbols).value) / seeds;
            evm += to_db(evm_snr(rx.symbols, tx.symbols).value) / seeds;
        }
        std::printf("  C1 true %5.1f dB: M2M4 %.4f dB, data-aided EVM %.4f dB\n", snr, m2m4, evm);
        worst = std::max({worst, std::abs(m2m4 - snr), std::abs(evm - snr)});
        ok = ok && std::abs(m2m4 - snr) <= 0.2 && std::abs(evm - snr) <= 0.2;
    }
    const double t = seconds_since(t0);
    return report(1, ok && t < 60.0,
                  fmt("estimator calibration: worst mean error %.4f dB (limit 0.2), runtime %.1f s (limit 60)", worst, t));
}

bool c2()
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        const SymbolBlock rx = noisy_qpsk(10000, -5.0 + 0.5 * trial, 200 + trial);
        auto rotated = rx.symbols;
        for (auto& s : rotated) s *= std::polar(1.0, phase(rng));
        const double a = m2m4_snr(rx.symbols).value;
        const double b = m2m4_snr(rotated).value;
        if (a > 0.0) worst_rel = std::max(worst_rel, std::abs(b - a) / a);
        else if (b != 0.0) worst_rel = 1.0;
    }

    SymbolBlock tx;
    const SymbolBlock rx = noisy_qpsk(10000, 15.0, 77, &tx);
    auto turned = rx.symbols;
    for (auto& s : turned) s *= std::polar(1.0, std::numbers::pi / 8.0);
    const double drop = to_db(evm_snr(rx.symbols, tx.symbols).value) - to_db(evm_snr(turned, tx.symbols).value);
    const double m2m4_change = std::abs(m2m4_snr(turned).value / m2m4_snr(rx.symbols).value - 1.0);
    std::printf("  C2 M2M4 worst relative change under random per-symbol rotation %.3g\n", worst_rel);
    std::printf("  C2 pi/8 rotation at 15 dB: EVM drop %.3f dB, M2M4 relative change %.3g\n", drop, m2m4_change);
    return report(2, worst_rel <= 1e-12 && m2m4_change <= 1e-12 && drop > 1.0,
                  fmt("phase insensitivity: M2M4 rel change %.3g (limit 1e-12), aided EVM drop %.2f dB (need > 1)",
                      std::max(worst_rel, m2m4_change), drop));
}

bool c3()
{
    const auto t0 = Clock::now();
    const std::size_t n_sym = 5'000'001; // 1e7 decoded bits
    PrbsState st;
    const Bits bits = prbs_generate(st, 2 * n_sym);
    const SymbolBlock tx = diff_encode(qpsk_map(bits, 4e9));
    bool ok = true;
    std::string worst;
    double worst_z = 0.0;
    for (double snr_db : {6.0, 8.0, 10.0}) {
        const IqStream rx = add_awgn(IqStream{tx.symbols, tx.symbol_rate}, db_to_linear(-snr_db), 300 + std::llround(snr_db));
        const Bits got = diff_decode(hard_decision(SymbolBlock{rx.samples, tx.symbol_rate}));
        std::size_t errors = 0;
        for (std::size_t i = 0; i < got.size(); ++i) errors += got[i] != bits[i + 2];
        const double nbits = static_cast<double>(got.size());
        const double counted = static_cast<double>(errors) / nbits;
        const double predicted = snr_to_ber(db_to_linear(snr_db));
        const double sigma = std::sqrt(predicted * (1.0 - predicted) / nbits);
        const double z = (counted - predicted) / sigma;
        std::printf("  C3 %4.1f dB: counted %.6e over %.0f bits, erfc formula %.6e, deviation %+.2f sigma\n", snr_db,
                    counted, nbits, predicted, z);
        if (std::abs(z) > std::abs(worst_z)) worst_z = z;
        ok = ok && std::abs(z) <= 3.0;
    }
    const double t = seconds_since(t0);
    return report(3, ok && t < 300.0,
                  fmt("DQPSK BER vs erfc(sqrt(SNR/2)): worst deviation %+.2f sigma (limit 3), runtime %.1f s (limit 300)",
                      worst_z, t));
}

struct PresetStats {
    double m2m4 = 0.0;
    double evm = 0.0;
    double seconds = 0.0;
    // Same statistic restricted to blocks where both estimates qualify.
    double m2m4_common = 0.0;
    double evm_common = 0.0;
};

bool in_range(double ber) { return ber >= 1e-6 && ber <= 0.5; }

PresetStats run_preset(const std::string& name, int seeds)
{
    const auto t0 = Clock::now();
    double m_sum = 0.0;
    double e_sum = 0.0;
    std::size_t m_n = 0;
    std::size_t e_n = 0;
    double mc = 0.0;
    double ec = 0.0;
    std::size_t common = 0;
    for (int s = 1; s <= seeds; ++s) {
        ScenarioConfig cfg = preset(name);
        cfg.seed = static_cast<std::uint64_t>(s);
        const RunResult r = run_scenario(cfg);
        const Summary sum = summarize(r);
        for (const auto& b : r.blocks) {
            if (!b.ber_counted || !in_range(*b.ber_counted) || !in_range(b.ber_m2m4) || !in_range(b.ber_evm)) continue;
            mc += std::abs(std::log10(b.ber_m2m4) - std::log10(*b.ber_counted));
            ec += std::abs(std::log10(b.ber_evm) - std::log10(*b.ber_counted));
            ++common;
        }
        std::printf("  C4 %s seed %2d: M2M4 %.4f over %zu blocks, EVM-blind %.4f over %zu blocks\n", name.c_str(), s,
                    sum.m2m4.mean_log_error, sum.m2m4.blocks, sum.evm.mean_log_error, sum.evm.blocks);
        if (sum.m2m4.blocks) m_sum += sum.m2m4.mean_log_error * static_cast<double>(sum.m2m4.blocks);
        if (sum.evm.blocks) e_sum += sum.evm.mean_log_error * static_cast<double>(sum.evm.blocks);
        m_n += sum.m2m4.blocks;
        e_n += sum.evm.blocks;
    }
    const auto c = static_cast<double>(common);
    return {m_sum / static_cast<double>(m_n), e_sum / static_cast<double>(e_n), seconds_since(t0), mc / c, ec / c};
}

bool c4()
{
    const int seeds = 10;
    const PresetStats a = run_preset("fig2a", seeds);
    const PresetStats b = run_preset("fig2b", seeds);
    const double gap_a = std::abs(a.evm - a.m2m4);
    const double gap_b = std::abs(b.evm - b.m2m4);
    std::printf("  C4 fig2a: mean |log10 error| M2M4 %.4f, EVM-blind %.4f, gap %.4f (%.1f s)\n", a.m2m4, a.evm, gap_a,
                a.seconds);
    std::printf("  C4 fig2b: mean |log10 error| M2M4 %.4f, EVM-blind %.4f, gap %.4f (%.1f s)\n", b.m2m4, b.evm, gap_b,
                b.seconds);
    std::printf("  C4 blocks where both qualify: fig2a M2M4 %.4f vs EVM-blind %.4f, fig2b M2M4 %.4f vs EVM-blind %.4f\n",
                a.m2m4_common, a.evm_common, b.m2m4_common, b.evm_common);
    const bool ok = a.m2m4 < a.evm && gap_b < gap_a && a.seconds < 600.0 && b.seconds < 600.0;
    return report(4, ok,
                  fmt("fading presets over %d seeds: fig2a M2M4 %.3f < EVM %.3f, gap fig2b %.3f < fig2a %.3f", seeds,
                      a.m2m4, a.evm, gap_b, gap_a));
}

bool c5()
{
    ScenarioConfig cfg = preset("fig2a");
    cfg.seed = 1;
    const RunResult r = run_scenario(cfg);
    bool ok = r.resync_events.size() == 2;
    std::size_t worst_latency = 0;
    for (const auto& ev : r.resync_events) {
        if (ev.aligned_block) {
            const std::size_t latency = *ev.aligned_block - ev.block_index;
            worst_latency = std::max(worst_latency, latency);
            std::printf("  C5 event at block %zu (%.2f us, M2M4 %.2f dB): aligned at block %zu, latency %zu blocks, "
                        "agreement %.4f, true SNR there %.2f dB\n",
                        ev.block_index, ev.time * 1e6, to_db(r.blocks[ev.block_index].m2m4.value), *ev.aligned_block,
                        latency, ev.agreement, r.blocks[*ev.aligned_block].snr_true_db);
            ok = ok && latency <= 1 && ev.agreement > kAlignmentThreshold;
        } else {
            std::printf("  C5 event at block %zu never aligned\n", ev.block_index);
            ok = false;
        }
    }
    return report(5, ok,
                  fmt("resync over 2 fading periods: %zu events (need 2), worst alignment latency %zu blocks (limit 1)",
                      r.resync_events.size(), worst_latency));
}

bool c6()
{
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::vector<Complex> noise(1'000'000);
    for (auto& x : noise) x = {g(rng), g(rng)};
    const MomentPair m = compute_moments(noise);
    const double ratio = m.m4 / (m.m2 * m.m2);
    const double noise_snr_db = to_db(m2m4_snr(m).value);

    const Bits& period = prbs15_period();
    const SymbolBlock clean = qpsk_map(Bits(period.begin(), period.end() - 1), 4e9);
    const double clean_snr = m2m4_snr(clean.symbols).value;
    std::printf("  C6 Gaussian: m4/m2^2 = %.5f, M2M4 %.2f dB; noiseless QPSK M2M4 %.6g (cap %.6g)\n", ratio,
                noise_snr_db, clean_snr, kSnrCap);
    return report(6, std::abs(ratio - 2.0) <= 0.02 && noise_snr_db < -10.0 && clean_snr == kSnrCap,
                  fmt("moment identities: Gaussian kurtosis %.4f (2 +- 0.02), M2M4 on noise %.1f dB (< -10), "
                      "noiseless at cap: %s",
                      ratio, noise_snr_db, clean_snr == kSnrCap ? "yes" : "no"));
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool c7()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "fsosnr_acceptance_c7";
    fs::remove_all(root);
    bool ok = true;
    int pairs = 0;
    for (const char* name : {"fig2a", "fig2b"}) {
        for (std::uint64_t seed : {1ull, 12345ull}) {
            ScenarioConfig cfg = preset(name);
            cfg.seed = seed;
            cfg.n_symbols = 1'000'000;
            for (int rep = 0; rep < 2; ++rep)
                write_run(root / (std::string(name) + "_" + std::to_string(seed) + "_" + std::to_string(rep)),
                          run_scenario(cfg), cfg);
            const std::string stem = std::string(name) + "_" + std::to_string(seed) + "_";
            const bool same = slurp(root / (stem + "0") / "trace.csv") == slurp(root / (stem + "1") / "trace.csv") &&
                              slurp(root / (stem + "0") / "summary.json") == slurp(root / (stem + "1") / "summary.json");
            std::printf("  C7 %s seed %llu: %s\n", name, static_cast<unsigned long long>(seed),
                        same ? "identical" : "DIFFERENT");
            ok = ok && same;
            ++pairs;
        }
    }
    fs::remove_all(root);
    return report(7, ok, fmt("determinism: %d (config, seed) pairs written twice, byte-identical: %s", pairs,
                             ok ? "yes" : "no"));
}

bool c8()
{
    const std::size_t n_sym = 500'001; // 1e6 decoded bits
    const double rs = 4e9;
    PrbsState st;
    const Bits bits = prbs_generate(st, 2 * n_sym);
    const SymbolBlock tx = diff_encode(qpsk_map(bits, rs));
    const RrcFilter f = rrc_design(0.1, 32, 2);
    const ShapedSignal shaped = pulse_shape(tx, f);

    IqStream x = align_samples(matched_filter(shaped.stream, f), 2 * shaped.group_delay, 2 * n_sym);
    x = apply_cfo(x, -coarse_cfo_estimate(x).cfo);
    SymbolBlock eq = cma_equalize(x, CmaConfig{});
    eq = apply_cfo(eq, -fine_cfo_estimate(eq).cfo);
    const SymbolBlock rec = bps_recover(eq, BpsConfig{}).symbols;
    const Bits got = diff_decode(hard_decision(rec));

    std::size_t errors = 0;
    for (std::size_t i = 0; i < got.size(); ++i) errors += got[i] != bits[i + 2];
    std::printf("  C8 %zu bits through shaping, matched filter, CFO, CMA, BPS and decoding: %zu errors\n", got.size(),
                errors);
    return report(8, errors == 0 && got.size() >= 1'000'000,
                  fmt("loopback transparency: %zu errors in %zu bits", errors, got.size()));
}

} // namespace

int main(int argc, char** argv)
{
    const std::function<bool()> criteria[] = {c1, c2, c3, c4, c5, c6, c7, c8};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion 1..8]\n");
            return 2;
        }
    }
    if (only < 0 || only > 8) {
        std::fprintf(stderr, "criterion must be 1..8\n");
        return 2;
    }
    bool all = true;
    for (int id = 1; id <= 8; ++id) {
        if (only != 0 && id != only) continue;
        try {
            all = criteria[id - 1]() && all;
        } catch (const std::exception& e) {
            all = report(id, false, std::string("raised: ") + e.what()) && all;
        }
    }
    return all ? 0 : 1;
}
