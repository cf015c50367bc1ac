#include <benchmark/benchmark.h>

#include "gncoset/baselines.hpp"
#include "gncoset/bench.hpp"
#include "gncoset/channel.hpp"
#include "gncoset/scos.hpp"

using namespace gncoset;

namespace {

std::vector<double> frame_llrs(const CodeSpec& spec, double snr, std::uint64_t f) {
    Xoshiro256pp rng = frame_rng(77, 0, f);
    BitVector payload(spec.payload_length());
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_bit());
    return transmit(spec.encode(spec.info_with_crc(payload)),
                    ebn0_to_sigma(snr, spec.rate()), rng);
}

void BM_Encode(benchmark::State& state) {
    CodeSpec spec = make_pac(7, 64, {0, 1, 1, 0, 1, 1});
    Xoshiro256pp rng(5);
    BitVector info(spec.dimension());
    for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_bit());
    for (auto _ : state) {
        BitVector c = spec.encode(info);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_Encode);

void BM_ScDecode(benchmark::State& state) {
    CodeSpec spec = make_pac(7, 64, {0, 1, 1, 0, 1, 1});
    Workspace ws(spec.n);
    std::vector<double> llr = frame_llrs(spec, 3.0, 1);
    for (auto _ : state) {
        ScResult r = sc_decode(ws, spec, llr);
        benchmark::DoNotOptimize(r.pm);
    }
}
BENCHMARK(BM_ScDecode);

void BM_Scos(benchmark::State& state) {
    CodeSpec spec = make_pac(7, 64, {0, 1, 1, 0, 1, 1});
    double snr = state.range(0) / 10.0;
    ScosDecoder dec(spec, {});
    std::uint64_t f = 0;
    std::int64_t visits = 0;
    std::int64_t frames = 0;
    for (auto _ : state) {
        state.PauseTiming();
        std::vector<double> llr = frame_llrs(spec, snr, f++);
        state.ResumeTiming();
        ScosOutcome out = dec.decode(llr);
        visits += out.node_visits;
        ++frames;
        benchmark::DoNotOptimize(out.pm);
    }
    state.counters["visits/frame"] =
        benchmark::Counter(static_cast<double>(visits) / frames);
}
BENCHMARK(BM_Scos)->Arg(20)->Arg(30)->Arg(40);

void BM_SclDecode(benchmark::State& state) {
    CodeSpec spec = make_crc_polar(7, 64, CrcSpec::from_string("11100101"));
    SclDecoder dec(spec, {.list_size = static_cast<int>(state.range(0))});
    std::vector<double> llr = frame_llrs(spec, 3.0, 2);
    for (auto _ : state) {
        SclResult r = dec.decode(llr);
        benchmark::DoNotOptimize(r.pm);
    }
}
BENCHMARK(BM_SclDecode)->Arg(8)->Arg(16)->Arg(32);

void BM_GenieBiasEstimate(benchmark::State& state) {
    CodeSpec spec = make_pac(7, 64, {0, 1, 1, 0, 1, 1});
    for (auto _ : state) {
        BiasProfile prof = estimate_bias(spec, 3.0, 2000, 9);
        benchmark::DoNotOptimize(prof.b.back());
    }
}
BENCHMARK(BM_GenieBiasEstimate);

}  // namespace

BENCHMARK_MAIN();
