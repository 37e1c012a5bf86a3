#include "fsosnr/channel.hpp"
#include "fsosnr/estimators.hpp"
#include "fsosnr/metrics.hpp"
#include "fsosnr/rx.hpp"
#include "fsosnr/scenario.hpp"
#include "fsosnr/tx.hpp"

#include <benchmark/benchmark.h>

#include <array>

using namespace fsosnr;

namespace {

SymbolBlock noisy_symbols(std::size_t n, double snr_db)
{
    PrbsState st;
    const SymbolBlock tx = qpsk_map(prbs_generate(st, 2 * n), 4e9);
    return {add_awgn(IqStream{tx.symbols, tx.symbol_rate}, db_to_linear(-snr_db), 1).samples, tx.symbol_rate};
}

IqStream noisy_waveform(std::size_t n_sym, double snr_db)
{
    PrbsState st;
    const SymbolBlock tx = diff_encode(qpsk_map(prbs_generate(st, 2 * n_sym), 4e9));
    const RrcFilter f = rrc_design(0.1, 32, 2);
    const ShapedSignal shaped = pulse_shape(tx, f);
    const IqStream mf = matched_filter(add_awgn(shaped.stream, db_to_linear(-snr_db), 2), f);
    return align_samples(mf, 2 * shaped.group_delay, 2 * n_sym);
}

void BM_M2M4(benchmark::State& state)
{
    const auto s = noisy_symbols(static_cast<std::size_t>(state.range(0)), 7.0);
    for (auto _ : state) benchmark::DoNotOptimize(m2m4_snr(s.symbols));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_M2M4)->Arg(10000)->Arg(1000000);

void BM_EvmBlind(benchmark::State& state)
{
    const auto s = noisy_symbols(static_cast<std::size_t>(state.range(0)), 7.0);
    for (auto _ : state) benchmark::DoNotOptimize(evm_snr_blind(s.symbols));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvmBlind)->Arg(10000)->Arg(1000000);

void BM_Blockwise(benchmark::State& state)
{
    const auto s = noisy_symbols(1'000'000, 7.0);
    const std::array methods{SnrMethod::m2m4, SnrMethod::evm_blind};
    for (auto _ : state) benchmark::DoNotOptimize(blockwise_estimate(s, 10000, methods));
    state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_Blockwise);

void BM_Cma(benchmark::State& state)
{
    const auto x = noisy_waveform(200000, 10.0);
    CmaConfig cfg;
    cfg.preamble_samples = 20000;
    for (auto _ : state) benchmark::DoNotOptimize(cma_equalize(x, cfg));
    state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_Cma)->Unit(benchmark::kMillisecond);

void BM_Bps(benchmark::State& state)
{
    const auto s = noisy_symbols(200000, 10.0);
    BpsConfig cfg;
    cfg.num_test_phases = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bps_recover(s, cfg));
    state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_Bps)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PrbsAlign(benchmark::State& state)
{
    const Bits& ref = prbs15_period();
    Bits rx(2 * ref.size());
    for (std::size_t i = 0; i < rx.size(); ++i) rx[i] = ref[(i + 1234) % ref.size()];
    for (auto _ : state) benchmark::DoNotOptimize(prbs_align(rx, ref));
}
BENCHMARK(BM_PrbsAlign)->Unit(benchmark::kMillisecond);

void BM_ScenarioShort(benchmark::State& state)
{
    ScenarioConfig cfg = preset("fig2a");
    cfg.n_symbols = 200000;
    cfg.fading.period = 25e-6;
    cfg.cma.preamble_samples = 20000;
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(cfg));
}
BENCHMARK(BM_ScenarioShort)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
