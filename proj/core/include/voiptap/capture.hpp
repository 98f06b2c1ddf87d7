#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <thread>
#include <variant>
#include <vector>

#include "voiptap/ringbuf.hpp"

namespace voiptap {

struct SamplerConfig {
    double sample_rate_hz = 16000.0;
    double tick_us = 62.5;
    int adc_bits = 12;
    int out_bits = 8;
    // Tolerance on tick_us * sample_rate_hz against one second.
    double timing_tolerance = 1e-9;

    // Firmware timer: 62 us ticks (about 16129 samples per wall-second)
    // while the nominal rate stays 16 kHz.
    static SamplerConfig legacy();

    int adc_max() const { return (1 << adc_bits) - 1; }
    void validate() const;
};

namespace source {

struct Sine {
    double frequency_hz = 1000.0;
    double amplitude = 1.0;  // 0..1
    double dc_offset = 0.0;  // -1..1
};

struct WhiteNoise {
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};

// x = 1 at t = 0, 0 afterwards.
struct Impulse {};

// 8- or 16-bit mono PCM file, looped to fill the requested duration.
struct WavFile {
    std::filesystem::path path;
};

}  // namespace source

struct SignalSource {
    std::variant<source::Sine, source::WhiteNoise, source::Impulse, source::WavFile> kind;
    double duration_s = 1.0;
    bool allow_clipping = false;
};

using SampleStream = std::vector<std::uint8_t>;

// Arduino-style integer map of a 12-bit reading onto 0..255 (truncating).
std::uint8_t quantize12to8(int v);

// Continuous x in [-1, 1] to ADC counts: round-half-up of (x + 1) / 2 * 4095.
int to_adc_counts(double x, int adc_max = 4095);

// Inverse of the 8-bit output scale: 0 -> -1, 255 -> +1.
double dequantize8(std::uint8_t q);

// round(duration_s * sample_rate_hz) quantized samples.
SampleStream generate(const SignalSource& src, const SamplerConfig& cfg = {});

// Offers every sample to buf; returns how many were rejected.
std::size_t pump(std::span<const std::uint8_t> stream, RingBuffer& buf);

// Feeds a stream into a ring buffer in real time, one sample per tick, from
// a background thread. Samples are released in small batches sized from the
// elapsed wall time, so the long-run rate is 1e6 / tick_us per second.
class PacedProducer {
public:
    PacedProducer(SampleStream stream, RingBuffer& buf, SamplerConfig cfg, bool loop = false);
    ~PacedProducer();

    PacedProducer(const PacedProducer&) = delete;
    PacedProducer& operator=(const PacedProducer&) = delete;

    void start();
    void stop();

    std::size_t produced() const noexcept { return produced_.load(); }
    std::size_t dropped() const noexcept { return dropped_.load(); }
    bool finished() const noexcept { return finished_.load(); }

private:
    void run();

    SampleStream stream_;
    RingBuffer& buf_;
    SamplerConfig cfg_;
    bool loop_;
    std::atomic<bool> running_{false};
    std::atomic<bool> finished_{false};
    std::atomic<std::size_t> produced_{0};
    std::atomic<std::size_t> dropped_{0};
    std::thread worker_;
};

}  // namespace voiptap
