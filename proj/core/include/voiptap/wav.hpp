#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <variant>
#include <vector>

namespace voiptap {

enum class HeaderMode {
    standard,  // canonical 44-octet RIFF/WAVE header with correct sizes
    legacy,    // 50-octet firmware-client header, data size left at 0
};

struct WavParams {
    std::uint32_t sample_rate_hz = 16000;
    std::uint16_t bits_per_sample = 8;
    std::uint16_t num_channels = 1;
    HeaderMode header_mode = HeaderMode::standard;

    // Throws ConfigError unless bits_per_sample is 8 or 16 and channels >= 1.
    void validate() const;

    friend bool operator==(const WavParams&, const WavParams&) = default;
};

// 8-bit PCM is unsigned (silence = 128); 16-bit PCM is signed.
using PcmSamples = std::variant<std::vector<std::uint8_t>, std::vector<std::int16_t>>;

struct WavArtifact {
    WavParams params;
    PcmSamples samples;

    // Number of stored sample values (all channels, interleaved).
    std::size_t sample_count() const;

    // First channel scaled to [-1, 1): (v - 128) / 128 for 8-bit and
    // v / 32768 for 16-bit.
    std::vector<double> first_channel() const;
};

inline constexpr std::size_t kStandardHeaderSize = 44;
inline constexpr std::size_t kLegacyHeaderSize = 50;
// samplesLength constant baked into the firmware client's header.
inline constexpr std::uint32_t kLegacySamplesLength = 1000;

// Header octets for `samples_length` sample values.
//
// Legacy layout reproduces the firmware client exactly: RIFF size is
// 32 + samples_length * channels, byte rate is rate * 1, block align is
// channels * 1, data size is 0, and octets 44..49 are zero padding.
std::vector<std::uint8_t> write_header(const WavParams& params, std::size_t samples_length);

void write_wav(const WavArtifact& artifact, const std::filesystem::path& destination);

// Parses a standard header strictly. A file whose data size field is 0 and
// which is at least 50 octets long is treated as legacy: samples are the
// octets after offset 50.
WavArtifact read_wav(const std::filesystem::path& source);
WavArtifact parse_wav(std::span<const std::uint8_t> bytes);

// Incremental writer used by the recording client: header first, samples
// appended as they arrive, sizes patched on finalize() in standard mode.
// Legacy mode writes the header once, with kLegacySamplesLength, and never
// revisits it.
class WavStreamWriter {
public:
    WavStreamWriter(const std::filesystem::path& destination, WavParams params);
    ~WavStreamWriter();

    WavStreamWriter(const WavStreamWriter&) = delete;
    WavStreamWriter& operator=(const WavStreamWriter&) = delete;

    void append(std::span<const std::uint8_t> pcm);
    void finalize();

    std::size_t bytes_written() const noexcept { return data_bytes_; }

private:
    std::filesystem::path path_;
    WavParams params_;
    std::ofstream out_;
    std::size_t data_bytes_ = 0;
    bool finalized_ = false;
};

}  // namespace voiptap
