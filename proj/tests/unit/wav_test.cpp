#include "voiptap/wav.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "voiptap/error.hpp"
#include "voiptap/hex.hpp"

using namespace voiptap;

namespace {

std::uint32_t u32_at(const std::vector<std::uint8_t>& b, std::size_t at) {
    return b[at] | (b[at + 1] << 8) | (b[at + 2] << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t u16_at(const std::vector<std::uint8_t>& b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

class WavFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("voiptap_wav_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::filesystem::path dir_;
};

}  // namespace

TEST(WavHeader, LegacyGoldenBytes) {
    WavParams p;
    p.header_mode = HeaderMode::legacy;
    const auto h = write_header(p, 1000);
    ASSERT_EQ(h.size(), 50u);
    // Built field by field from the firmware client's Buffer writes.
    EXPECT_EQ(hex_encode(h),
              "524946460804000057415645666d74201000000001000100803e0000803e0000"
              "010008006461746100000000000000000000");
    EXPECT_EQ(u32_at(h, 4), 1032u);
    EXPECT_EQ(u32_at(h, 24), 16000u);
    EXPECT_EQ(u32_at(h, 40), 0u);
}

TEST(WavHeader, LegacyRiffSizeScalesWithChannels) {
    WavParams p;
    p.header_mode = HeaderMode::legacy;
    p.num_channels = 2;
    const auto h = write_header(p, 1000);
    EXPECT_EQ(u32_at(h, 4), 2032u);
    EXPECT_EQ(u16_at(h, 22), 1);  // hardcoded by the firmware client
    EXPECT_EQ(u16_at(h, 32), 2);
}

TEST(WavHeader, StandardSizes) {
    const auto h = write_header(WavParams{}, 16000);
    ASSERT_EQ(h.size(), 44u);
    EXPECT_EQ(u32_at(h, 4), 36u + 16000u);
    EXPECT_EQ(u32_at(h, 40), 16000u);
    EXPECT_EQ(u32_at(h, 28), 16000u);

    WavParams p16;
    p16.bits_per_sample = 16;
    p16.num_channels = 2;
    const auto h16 = write_header(p16, 10);
    EXPECT_EQ(u32_at(h16, 28), 16000u * 4);
    EXPECT_EQ(u16_at(h16, 32), 4);
    EXPECT_EQ(u32_at(h16, 40), 20u);
}

TEST(WavHeader, UnsupportedBitDepth) {
    WavParams p;
    p.bits_per_sample = 24;
    EXPECT_THROW(write_header(p, 0), ConfigError);
}

TEST_F(WavFiles, EmptyStandardFileIs44Octets) {
    WavArtifact art;
    art.samples = std::vector<std::uint8_t>{};
    write_wav(art, dir_ / "empty.wav");
    EXPECT_EQ(std::filesystem::file_size(dir_ / "empty.wav"), 44u);
    const auto back = read_wav(dir_ / "empty.wav");
    EXPECT_EQ(back.sample_count(), 0u);
}

TEST_F(WavFiles, MidscaleRoundTripStandardAndLegacy) {
    WavArtifact art;
    art.samples = std::vector<std::uint8_t>(16000, 128);
    write_wav(art, dir_ / "std.wav");
    EXPECT_EQ(std::filesystem::file_size(dir_ / "std.wav"), 44u + 16000u);
    const auto back = read_wav(dir_ / "std.wav");
    EXPECT_EQ(back.params, art.params);
    EXPECT_EQ(back.samples, art.samples);

    art.params.header_mode = HeaderMode::legacy;
    write_wav(art, dir_ / "legacy.wav");
    EXPECT_EQ(std::filesystem::file_size(dir_ / "legacy.wav"), 50u + 16000u);
    const auto legacy = read_wav(dir_ / "legacy.wav");
    EXPECT_EQ(legacy.params.header_mode, HeaderMode::legacy);
    EXPECT_EQ(legacy.samples, art.samples);
}

TEST_F(WavFiles, LegacyLengthInferredFromFileSize) {
    for (std::size_t n : {0u, 1u, 999u, 1000u, 4321u}) {
        WavArtifact art;
        art.params.header_mode = HeaderMode::legacy;
        std::vector<std::uint8_t> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<std::uint8_t>(i * 31);
        art.samples = s;
        write_wav(art, dir_ / "l.wav");
        const auto back = read_wav(dir_ / "l.wav");
        EXPECT_EQ(back.sample_count(), n);
        EXPECT_EQ(back.samples, art.samples);
    }
}

TEST_F(WavFiles, SixteenBitRoundTripAndScaling) {
    WavArtifact art;
    art.params.bits_per_sample = 16;
    art.samples = std::vector<std::int16_t>{0, 32767, -32768, 1, -1};
    write_wav(art, dir_ / "s16.wav");
    const auto back = read_wav(dir_ / "s16.wav");
    EXPECT_EQ(back.samples, art.samples);
    const auto x = back.first_channel();
    EXPECT_DOUBLE_EQ(x[1], 32767.0 / 32768.0);
    EXPECT_DOUBLE_EQ(x[2], -1.0);
}

TEST_F(WavFiles, EightBitScalingCentresOn128) {
    WavArtifact art;
    art.samples = std::vector<std::uint8_t>{128, 0, 255};
    const auto x = art.first_channel();
    EXPECT_DOUBLE_EQ(x[0], 0.0);
    EXPECT_DOUBLE_EQ(x[1], -1.0);
    EXPECT_DOUBLE_EQ(x[2], 127.0 / 128.0);
}

TEST_F(WavFiles, StandardRoundTripProperty) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> len(0, 5000);
    std::uniform_int_distribution<int> octet(0, 255);
    for (int trial = 0; trial < 50; ++trial) {
        WavArtifact art;
        art.params.sample_rate_hz = 8000 + 1000 * static_cast<std::uint32_t>(trial % 5);
        std::vector<std::uint8_t> s(static_cast<std::size_t>(len(rng)));
        for (auto& v : s) v = static_cast<std::uint8_t>(octet(rng));
        art.samples = s;
        write_wav(art, dir_ / "p.wav");
        const auto back = read_wav(dir_ / "p.wav");
        ASSERT_EQ(back.params, art.params);
        ASSERT_EQ(back.samples, art.samples);
    }
}

TEST_F(WavFiles, LargeRoundTrip) {
    WavArtifact art;
    std::vector<std::uint8_t> s(1000000);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::uint8_t>(i * 7 + (i >> 9));
    art.samples = s;
    write_wav(art, dir_ / "big.wav");
    EXPECT_EQ(read_wav(dir_ / "big.wav").samples, art.samples);
}

TEST(WavParse, TruncatedFileNamesField) {
    std::vector<std::uint8_t> ten{'R', 'I', 'F', 'F', 0, 0, 0, 0, 'W', 'A'};
    try {
        parse_wav(ten);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.field(), "riff");
    }
}

TEST(WavParse, BadFieldsAreNamed) {
    auto good = write_header(WavParams{}, 4);
    good.insert(good.end(), {1, 2, 3, 4});

    auto expect_field = [](std::vector<std::uint8_t> b, const std::string& field) {
        try {
            parse_wav(b);
            ADD_FAILURE() << "expected ParseError on " << field;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.field(), field);
        }
    };

    auto b = good;
    b[8] = 'X';
    expect_field(b, "wave");

    b = good;
    b[4] = 0xff;  // RIFF size past end of file
    expect_field(b, "riff_size");

    b = good;
    b[34] = 12;
    expect_field(b, "bits_per_sample");

    b = good;
    b[20] = 3;  // IEEE float
    expect_field(b, "format");

    b = good;
    b[40] = 9;  // data size larger than what is stored
    expect_field(b, "data_size");

    b = good;
    b[28] = 0;
    expect_field(b, "byte_rate");

    EXPECT_NO_THROW(parse_wav(good));
}

TEST(WavParse, SkipsUnknownChunks) {
    auto h = write_header(WavParams{}, 2);
    std::vector<std::uint8_t> b(h.begin(), h.begin() + 36);
    const std::uint8_t list[] = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
    b.insert(b.end(), std::begin(list), std::end(list));
    b.insert(b.end(), h.begin() + 36, h.end());
    b.insert(b.end(), {9, 8});
    const std::uint32_t riff = static_cast<std::uint32_t>(b.size() - 8);
    for (int i = 0; i < 4; ++i) b[4 + i] = static_cast<std::uint8_t>(riff >> (8 * i));
    const auto art = parse_wav(b);
    EXPECT_EQ(art.samples, (PcmSamples{std::vector<std::uint8_t>{9, 8}}));
}

TEST_F(WavFiles, StreamWriterFinalizesStandardHeader) {
    {
        WavStreamWriter w(dir_ / "s.wav", WavParams{});
        std::vector<std::uint8_t> a{1, 2, 3};
        w.append(a);
        w.append(a);
        w.finalize();
        EXPECT_EQ(w.bytes_written(), 6u);
    }
    const auto back = read_wav(dir_ / "s.wav");
    EXPECT_EQ(back.samples, (PcmSamples{std::vector<std::uint8_t>{1, 2, 3, 1, 2, 3}}));

    WavParams legacy;
    legacy.header_mode = HeaderMode::legacy;
    {
        WavStreamWriter w(dir_ / "l.wav", legacy);
        std::vector<std::uint8_t> a(70, 200);
        w.append(a);
    }
    std::ifstream in(dir_ / "l.wav", std::ios::binary);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_EQ(bytes.size(), 120u);
    EXPECT_EQ(u32_at(bytes, 4), 1032u);
    EXPECT_EQ(read_wav(dir_ / "l.wav").sample_count(), 70u);
}

TEST(WavRead, MissingFileIsIoError) {
    EXPECT_THROW(read_wav("/nonexistent/x.wav"), IoError);
}
