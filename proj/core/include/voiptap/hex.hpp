#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voiptap {

// Two lowercase hex digits per octet. This is an obfuscation layer for the
// wire, not a cipher.
std::string hex_encode(std::span<const std::uint8_t> data);

// Accepts either case. Throws DecodeError carrying the offending offset on
// odd length or a non-hex character.
std::vector<std::uint8_t> hex_decode(std::string_view text);

// Decodes hex text that arrives in arbitrary chunks (TCP reads can split a
// digit pair). Offsets in errors are relative to the whole stream.
class HexStreamDecoder {
public:
    void feed(std::string_view chunk, std::vector<std::uint8_t>& out);

    // True when a dangling half pair is buffered.
    bool pending() const noexcept { return high_.has_value(); }
    std::size_t consumed() const noexcept { return offset_; }

private:
    std::optional<std::uint8_t> high_;
    std::size_t offset_ = 0;
};

}  // namespace voiptap
