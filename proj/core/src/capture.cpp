#include "voiptap/capture.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "voiptap/error.hpp"
#include "voiptap/wav.hpp"

namespace voiptap {
namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void check_amplitude(double amplitude, double dc, bool allow_clipping) {
    if (amplitude < 0.0 || amplitude > 1.0) {
        throw ConfigError("amplitude must be within 0..1");
    }
    if (dc < -1.0 || dc > 1.0) {
        throw ConfigError("dc offset must be within -1..1");
    }
    if (!allow_clipping && amplitude + std::abs(dc) > 1.0 + 1e-12) {
        throw ConfigError("amplitude + |dc offset| exceeds full scale");
    }
}

std::uint8_t sample_of(double x, const SamplerConfig& cfg) {
    return quantize12to8(to_adc_counts(x, cfg.adc_max()));
}

// File samples mapped into the ADC domain, then through the same 12->8 path.
// 8-bit files are already at output resolution and pass through unchanged.
std::vector<std::uint8_t> load_wav_source(const std::filesystem::path& path) {
    WavArtifact art;
    try {
        art = read_wav(path);
    } catch (const Error& e) {
        throw IoError(std::string("unreadable wav source (") + e.what() + ")", path.string());
    }
    const std::size_t ch = art.params.num_channels;
    std::vector<std::uint8_t> out;
    if (const auto* s8 = std::get_if<std::vector<std::uint8_t>>(&art.samples)) {
        for (std::size_t i = 0; i < s8->size(); i += ch) {
            out.push_back((*s8)[i]);
        }
    } else {
        const auto& s16 = std::get<std::vector<std::int16_t>>(art.samples);
        for (std::size_t i = 0; i < s16.size(); i += ch) {
            const long long shifted = static_cast<long long>(s16[i]) + 32768;
            const int adc = static_cast<int>((shifted * 4095 + 32767) / 65535);
            out.push_back(quantize12to8(adc));
        }
    }
    if (out.empty()) {
        throw IoError("wav source holds no samples", path.string());
    }
    return out;
}

}  // namespace

SamplerConfig SamplerConfig::legacy() {
    SamplerConfig cfg;
    cfg.tick_us = 62.0;
    cfg.timing_tolerance = 0.01;
    return cfg;
}

void SamplerConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) {
        throw ConfigError("sample rate must be positive");
    }
    if (!(tick_us > 0.0)) {
        throw ConfigError("tick must be positive");
    }
    if (adc_bits != 12 || out_bits != 8) {
        throw ConfigError("only 12-bit ADC input and 8-bit output are supported");
    }
    const double mismatch = std::abs(tick_us * sample_rate_hz / 1e6 - 1.0);
    if (mismatch > timing_tolerance) {
        throw ConfigError("tick " + std::to_string(tick_us) + " us does not match " +
                          std::to_string(sample_rate_hz) + " Hz");
    }
}

std::uint8_t quantize12to8(int v) {
    if (v < 0 || v > 4095) {
        throw DomainError("ADC reading " + std::to_string(v) + " outside 0..4095");
    }
    return static_cast<std::uint8_t>(v * 255 / 4095);
}

int to_adc_counts(double x, int adc_max) {
    const double scaled = (x + 1.0) / 2.0 * adc_max;
    const double r = std::floor(scaled + 0.5);
    if (r < 0.0) return 0;
    if (r > adc_max) return adc_max;
    return static_cast<int>(r);
}

double dequantize8(std::uint8_t q) { return static_cast<double>(q) / 255.0 * 2.0 - 1.0; }

SampleStream generate(const SignalSource& src, const SamplerConfig& cfg) {
    cfg.validate();
    if (!(src.duration_s > 0.0)) {
        throw DomainError("duration must be positive");
    }
    const auto n = static_cast<std::size_t>(std::llround(src.duration_s * cfg.sample_rate_hz));
    const double fs = cfg.sample_rate_hz;
    SampleStream out(n);

    std::visit(overloaded{
                   [&](const source::Sine& s) {
                       check_amplitude(s.amplitude, s.dc_offset, src.allow_clipping);
                       const double w = 2.0 * std::numbers::pi * s.frequency_hz / fs;
                       for (std::size_t i = 0; i < n; ++i) {
                           out[i] = sample_of(s.dc_offset + s.amplitude * std::sin(w * static_cast<double>(i)), cfg);
                       }
                   },
                   [&](const source::WhiteNoise& s) {
                       check_amplitude(s.amplitude, 0.0, src.allow_clipping);
                       std::mt19937_64 rng(s.seed);
                       std::uniform_real_distribution<double> dist(-1.0, 1.0);
                       for (auto& v : out) {
                           v = sample_of(s.amplitude * dist(rng), cfg);
                       }
                   },
                   [&](const source::Impulse&) {
                       for (std::size_t i = 0; i < n; ++i) {
                           out[i] = sample_of(i == 0 ? 1.0 : 0.0, cfg);
                       }
                   },
                   [&](const source::WavFile& s) {
                       const auto file = load_wav_source(s.path);
                       for (std::size_t i = 0; i < n; ++i) {
                           out[i] = file[i % file.size()];
                       }
                   },
               },
               src.kind);
    return out;
}

std::size_t pump(std::span<const std::uint8_t> stream, RingBuffer& buf) {
    std::size_t dropped = 0;
    for (auto v : stream) {
        if (!buf.put(v)) {
            ++dropped;
        }
    }
    return dropped;
}

PacedProducer::PacedProducer(SampleStream stream, RingBuffer& buf, SamplerConfig cfg, bool loop)
    : stream_(std::move(stream)), buf_(buf), cfg_(cfg), loop_(loop) {
    cfg_.validate();
}

PacedProducer::~PacedProducer() { stop(); }

void PacedProducer::start() {
    if (running_.exchange(true)) {
        return;
    }
    worker_ = std::thread([this] { run(); });
}

void PacedProducer::stop() {
    running_ = false;
    if (worker_.joinable()) {
        worker_.join();
    }
}

void PacedProducer::run() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    std::size_t next = 0;
    std::size_t emitted = 0;
    while (running_.load()) {
        const double elapsed_us =
            std::chrono::duration<double, std::micro>(clock::now() - t0).count();
        const auto due = static_cast<std::size_t>(elapsed_us / cfg_.tick_us) + 1;
        while (emitted < due) {
            if (next == stream_.size()) {
                if (!loop_ || stream_.empty()) {
                    finished_ = true;
                    return;
                }
                next = 0;
            }
            if (!buf_.put(stream_[next])) {
                dropped_.fetch_add(1);
            }
            ++next;
            ++emitted;
            produced_.fetch_add(1);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

}  // namespace voiptap
