#include "voiptap/wav.hpp"

#include <algorithm>
#include <cstring>
#include <iterator>
#include <string>

#include "voiptap/error.hpp"

namespace voiptap {
namespace {

void put_tag(std::vector<std::uint8_t>& b, std::size_t at, const char (&tag)[5]) {
    std::memcpy(b.data() + at, tag, 4);
}

void put_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
    b[at] = static_cast<std::uint8_t>(v & 0xff);
    b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::vector<std::uint8_t>& b, std::size_t at, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        b[at + i] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xff);
    }
}

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
    return std::memcmp(b.data() + at, tag, 4) == 0;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > 0xffffffffu) {
        throw ConfigError(std::string(what) + " does not fit a 32-bit RIFF field");
    }
    return static_cast<std::uint32_t>(v);
}

PcmSamples decode_pcm(std::span<const std::uint8_t> data, std::uint16_t bits) {
    if (bits == 8) {
        return std::vector<std::uint8_t>(data.begin(), data.end());
    }
    std::vector<std::int16_t> out(data.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::int16_t>(get_u16(data, 2 * i));
    }
    return out;
}

std::vector<std::uint8_t> encode_pcm(const PcmSamples& samples) {
    if (const auto* s8 = std::get_if<std::vector<std::uint8_t>>(&samples)) {
        return *s8;
    }
    const auto& s16 = std::get<std::vector<std::int16_t>>(samples);
    std::vector<std::uint8_t> out(s16.size() * 2);
    for (std::size_t i = 0; i < s16.size(); ++i) {
        put_u16(out, 2 * i, static_cast<std::uint16_t>(s16[i]));
    }
    return out;
}

std::uint16_t bits_of(const PcmSamples& samples) {
    return std::holds_alternative<std::vector<std::uint8_t>>(samples) ? 8 : 16;
}

}  // namespace

void WavParams::validate() const {
    if (bits_per_sample != 8 && bits_per_sample != 16) {
        throw ConfigError("unsupported bit depth " + std::to_string(bits_per_sample) +
                          " (expected 8 or 16)");
    }
    if (num_channels < 1) {
        throw ConfigError("num_channels must be at least 1");
    }
    if (sample_rate_hz == 0) {
        throw ConfigError("sample rate must be positive");
    }
}

std::size_t WavArtifact::sample_count() const {
    return std::visit([](const auto& v) { return v.size(); }, samples);
}

std::vector<double> WavArtifact::first_channel() const {
    const std::size_t ch = params.num_channels;
    std::vector<double> x;
    if (const auto* s8 = std::get_if<std::vector<std::uint8_t>>(&samples)) {
        x.reserve(s8->size() / ch);
        for (std::size_t i = 0; i < s8->size(); i += ch) {
            x.push_back((static_cast<double>((*s8)[i]) - 128.0) / 128.0);
        }
    } else {
        const auto& s16 = std::get<std::vector<std::int16_t>>(samples);
        x.reserve(s16.size() / ch);
        for (std::size_t i = 0; i < s16.size(); i += ch) {
            x.push_back(static_cast<double>(s16[i]) / 32768.0);
        }
    }
    return x;
}

std::vector<std::uint8_t> write_header(const WavParams& params, std::size_t samples_length) {
    params.validate();
    const std::uint16_t ch = params.num_channels;

    if (params.header_mode == HeaderMode::legacy) {
        std::vector<std::uint8_t> b(kLegacyHeaderSize, 0);
        put_tag(b, 0, "RIFF");
        put_u32(b, 4, checked_u32(32 + samples_length * ch, "RIFF size"));
        put_tag(b, 8, "WAVE");
        put_tag(b, 12, "fmt ");
        put_u32(b, 16, 16);
        put_u16(b, 20, 1);
        put_u16(b, 22, 1);  // the firmware client hardcodes one channel here
        put_u32(b, 24, params.sample_rate_hz);
        put_u32(b, 28, params.sample_rate_hz * 1);
        put_u16(b, 32, static_cast<std::uint16_t>(ch * 1));
        put_u16(b, 34, params.bits_per_sample);
        put_tag(b, 36, "data");
        put_u32(b, 40, 0);
        return b;
    }

    const std::uint16_t block_align = static_cast<std::uint16_t>(ch * params.bits_per_sample / 8);
    const std::size_t data_bytes = samples_length * (params.bits_per_sample / 8);
    std::vector<std::uint8_t> b(kStandardHeaderSize, 0);
    put_tag(b, 0, "RIFF");
    put_u32(b, 4, checked_u32(36 + data_bytes, "RIFF size"));
    put_tag(b, 8, "WAVE");
    put_tag(b, 12, "fmt ");
    put_u32(b, 16, 16);
    put_u16(b, 20, 1);
    put_u16(b, 22, ch);
    put_u32(b, 24, params.sample_rate_hz);
    put_u32(b, 28, params.sample_rate_hz * block_align);
    put_u16(b, 32, block_align);
    put_u16(b, 34, params.bits_per_sample);
    put_tag(b, 36, "data");
    put_u32(b, 40, checked_u32(data_bytes, "data size"));
    return b;
}

void write_wav(const WavArtifact& artifact, const std::filesystem::path& destination) {
    WavParams params = artifact.params;
    if (bits_of(artifact.samples) != params.bits_per_sample) {
        throw ConfigError("sample storage does not match bits_per_sample");
    }
    const auto header = write_header(params, artifact.sample_count());
    const auto pcm = encode_pcm(artifact.samples);

    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing", destination.string());
    }
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(pcm.data()), static_cast<std::streamsize>(pcm.size()));
    out.flush();
    if (!out) {
        throw IoError("write failed", destination.string());
    }
}

WavArtifact parse_wav(std::span<const std::uint8_t> b) {
    if (b.size() < 12) {
        throw ParseError("riff", "file shorter than the RIFF preamble");
    }
    if (!tag_is(b, 0, "RIFF")) {
        throw ParseError("riff", "missing RIFF tag");
    }
    if (!tag_is(b, 8, "WAVE")) {
        throw ParseError("wave", "missing WAVE tag");
    }

    // Legacy layout: fixed offsets, zero data size, 50-octet header.
    if (b.size() >= kLegacyHeaderSize && tag_is(b, 12, "fmt ") && tag_is(b, 36, "data") &&
        get_u32(b, 40) == 0) {
        WavArtifact art;
        art.params.header_mode = HeaderMode::legacy;
        art.params.num_channels = get_u16(b, 22);
        art.params.sample_rate_hz = get_u32(b, 24);
        art.params.bits_per_sample = get_u16(b, 34);
        if (get_u16(b, 20) != 1) {
            throw ParseError("format", "only PCM (format 1) is supported");
        }
        if (art.params.bits_per_sample != 8 && art.params.bits_per_sample != 16) {
            throw ParseError("bits_per_sample", "expected 8 or 16");
        }
        if (art.params.num_channels == 0) {
            throw ParseError("channels", "zero channels");
        }
        if (art.params.sample_rate_hz == 0) {
            throw ParseError("sample_rate", "zero sample rate");
        }
        auto data = b.subspan(kLegacyHeaderSize);
        if (art.params.bits_per_sample == 16 && data.size() % 2 != 0) {
            data = data.first(data.size() - 1);
        }
        art.samples = decode_pcm(data, art.params.bits_per_sample);
        return art;
    }

    const std::uint32_t riff_size = get_u32(b, 4);
    if (riff_size < 4 || static_cast<std::size_t>(riff_size) + 8 > b.size()) {
        throw ParseError("riff_size", "declared size " + std::to_string(riff_size) +
                                          " exceeds file length " + std::to_string(b.size()));
    }
    const std::size_t end = static_cast<std::size_t>(riff_size) + 8;

    bool have_fmt = false;
    WavArtifact art;
    std::uint16_t block_align = 0;
    std::size_t pos = 12;
    while (pos + 8 <= end) {
        const std::uint32_t chunk_size = get_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (chunk_size > end - body) {
            throw ParseError(tag_is(b, pos, "data") ? "data_size" : "chunk_size",
                             "chunk extends past end of file");
        }
        if (tag_is(b, pos, "fmt ")) {
            if (chunk_size < 16) {
                throw ParseError("fmt_size", "fmt chunk shorter than 16 octets");
            }
            if (get_u16(b, body) != 1) {
                throw ParseError("format", "only PCM (format 1) is supported");
            }
            art.params.num_channels = get_u16(b, body + 2);
            art.params.sample_rate_hz = get_u32(b, body + 4);
            const std::uint32_t byte_rate = get_u32(b, body + 8);
            block_align = get_u16(b, body + 12);
            art.params.bits_per_sample = get_u16(b, body + 14);
            if (art.params.num_channels == 0) {
                throw ParseError("channels", "zero channels");
            }
            if (art.params.sample_rate_hz == 0) {
                throw ParseError("sample_rate", "zero sample rate");
            }
            if (art.params.bits_per_sample != 8 && art.params.bits_per_sample != 16) {
                throw ParseError("bits_per_sample", "expected 8 or 16");
            }
            if (block_align != art.params.num_channels * art.params.bits_per_sample / 8) {
                throw ParseError("block_align", "inconsistent with channels and bit depth");
            }
            if (byte_rate != art.params.sample_rate_hz * block_align) {
                throw ParseError("byte_rate", "inconsistent with sample rate and block align");
            }
            have_fmt = true;
        } else if (tag_is(b, pos, "data")) {
            if (!have_fmt) {
                throw ParseError("fmt", "data chunk precedes fmt chunk");
            }
            if (chunk_size % block_align != 0) {
                throw ParseError("data_size", "not a whole number of sample frames");
            }
            art.samples = decode_pcm(b.subspan(body, chunk_size), art.params.bits_per_sample);
            return art;
        }
        pos = body + chunk_size + (chunk_size & 1u);
    }
    throw ParseError(have_fmt ? "data" : "fmt", "chunk not found");
}

WavArtifact read_wav(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading", source.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_wav(bytes);
}

WavStreamWriter::WavStreamWriter(const std::filesystem::path& destination, WavParams params)
    : path_(destination), params_(params) {
    const auto header = write_header(
        params_, params_.header_mode == HeaderMode::legacy ? kLegacySamplesLength : 0);
    out_.open(destination, std::ios::binary | std::ios::trunc);
    if (!out_) {
        throw IoError("cannot open for writing", destination.string());
    }
    out_.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
}

WavStreamWriter::~WavStreamWriter() {
    try {
        finalize();
    } catch (...) {
    }
}

void WavStreamWriter::append(std::span<const std::uint8_t> pcm) {
    out_.write(reinterpret_cast<const char*>(pcm.data()), static_cast<std::streamsize>(pcm.size()));
    if (!out_) {
        throw IoError("write failed", path_.string());
    }
    data_bytes_ += pcm.size();
}

void WavStreamWriter::finalize() {
    if (finalized_) {
        return;
    }
    finalized_ = true;
    if (params_.header_mode == HeaderMode::standard) {
        const std::size_t bytes_per_sample = params_.bits_per_sample / 8;
        const auto header = write_header(params_, data_bytes_ / bytes_per_sample);
        out_.seekp(0);
        out_.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    }
    out_.close();
    if (out_.fail()) {
        throw IoError("write failed", path_.string());
    }
}

}  // namespace voiptap
