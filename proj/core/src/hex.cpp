#include "voiptap/hex.hpp"

#include "voiptap/error.hpp"

namespace voiptap {
namespace {

constexpr char kDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string hex_encode(std::span<const std::uint8_t> data) {
    std::string out(data.size() * 2, '\0');
    for (std::size_t i = 0; i < data.size(); ++i) {
        out[2 * i] = kDigits[data[i] >> 4];
        out[2 * i + 1] = kDigits[data[i] & 0x0f];
    }
    return out;
}

std::vector<std::uint8_t> hex_decode(std::string_view text) {
    if (text.size() % 2 != 0) {
        throw DecodeError(text.size(), "odd number of hex digits");
    }
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    HexStreamDecoder dec;
    dec.feed(text, out);
    return out;
}

void HexStreamDecoder::feed(std::string_view chunk, std::vector<std::uint8_t>& out) {
    for (char c : chunk) {
        const int v = nibble(c);
        if (v < 0) {
            throw DecodeError(offset_, std::string("non-hex character '") + c + "'");
        }
        ++offset_;
        if (high_) {
            out.push_back(static_cast<std::uint8_t>((*high_ << 4) | v));
            high_.reset();
        } else {
            high_ = static_cast<std::uint8_t>(v);
        }
    }
}

}  // namespace voiptap
