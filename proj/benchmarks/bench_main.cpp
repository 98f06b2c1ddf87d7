#include <benchmark/benchmark.h>

#include <random>

#include "voiptap/analysis.hpp"
#include "voiptap/capture.hpp"
#include "voiptap/hex.hpp"
#include "voiptap/ringbuf.hpp"
#include "voiptap/transport.hpp"
#include "voiptap/wav.hpp"

using namespace voiptap;

namespace {

analysis::Signal noise(std::size_t n) {
    std::mt19937 rng(1);
    std::normal_distribution<double> d;
    analysis::Signal s{std::vector<double>(n), 16000.0};
    for (auto& v : s.x) v = d(rng);
    return s;
}

void BM_RingBufferPutGet(benchmark::State& state) {
    RingBuffer buf;
    std::uint8_t v = 0;
    for (auto _ : state) {
        buf.put(v++);
        benchmark::DoNotOptimize(buf.get());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RingBufferPutGet);

void BM_Packetize(benchmark::State& state) {
    const SampleStream block(static_cast<std::size_t>(state.range(0)), 0x42);
    TransportConfig cfg;
    RingBuffer buf;
    for (auto _ : state) {
        pump(block, buf);
        benchmark::DoNotOptimize(packetize(buf, cfg));
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Packetize)->Arg(1600)->Arg(8192);

void BM_HexEncode(benchmark::State& state) {
    const std::vector<std::uint8_t> block(2048, 0xa5);
    for (auto _ : state) benchmark::DoNotOptimize(hex_encode(block));
    state.SetBytesProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_HexEncode);

void BM_HexStreamDecode(benchmark::State& state) {
    const auto text = hex_encode(std::vector<std::uint8_t>(4096, 0x3c));
    for (auto _ : state) {
        HexStreamDecoder dec;
        std::vector<std::uint8_t> out;
        // Odd chunk length so pairs straddle chunk boundaries.
        for (std::size_t off = 0; off < text.size(); off += 1023) {
            dec.feed(std::string_view(text).substr(off, 1023), out);
        }
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_HexStreamDecode);

void BM_Generate(benchmark::State& state) {
    const SignalSource src{source::Sine{1000.0, 0.9, 0.0}, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(generate(src));
    state.SetItemsProcessed(state.iterations() * 16000);
}
BENCHMARK(BM_Generate);

void BM_ParseWav(benchmark::State& state) {
    WavArtifact art;
    art.samples = std::vector<std::uint8_t>(160000, 128);
    auto bytes = write_header(art.params, 160000);
    bytes.resize(bytes.size() + 160000, 128);
    for (auto _ : state) benchmark::DoNotOptimize(parse_wav(bytes));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_ParseWav);

void BM_Stats(benchmark::State& state) {
    const auto s = noise(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(analysis::stats(s));
}
BENCHMARK(BM_Stats)->Arg(16000)->Arg(160000)->Unit(benchmark::kMillisecond);

void BM_Spectrogram(benchmark::State& state) {
    const auto s = noise(160000);
    for (auto _ : state) benchmark::DoNotOptimize(analysis::spectrogram(s));
}
BENCHMARK(BM_Spectrogram)->Unit(benchmark::kMillisecond);

void BM_Cepstrogram(benchmark::State& state) {
    const auto s = noise(160000);
    for (auto _ : state) benchmark::DoNotOptimize(analysis::cepstrogram(s));
}
BENCHMARK(BM_Cepstrogram)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
