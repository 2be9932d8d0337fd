#pragma once

// HSZ framing shared by every on-disk artifact:
//   8-byte magic | u32 LE header length N | N bytes UTF-8 JSON | payload

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mvt/error.hpp"

namespace mvt::hsz {

using Magic = std::array<char, 8>;

constexpr Magic make_magic(std::string_view text) {
    Magic m{};
    for (std::size_t i = 0; i < text.size() && i < m.size(); ++i) m[i] = text[i];
    return m;
}

inline constexpr Magic cube_magic = make_magic("HSZCUBE");
inline constexpr Magic label_magic = make_magic("HSZLBL");
inline constexpr Magic pca_magic = make_magic("HSZPCA");
inline constexpr Magic model_magic = make_magic("HSZMDL");

struct Frame {
    nlohmann::ordered_json header;
    std::vector<std::byte> payload;
};

void write_frame(const std::filesystem::path& path, const Magic& magic,
                 const nlohmann::ordered_json& header, std::span<const std::byte> payload);

// Throws parse error on a bad magic or malformed header, io error when the
// file cannot be read.
Frame read_frame(const std::filesystem::path& path, const Magic& magic);

template <typename T>
void append_le(std::vector<std::byte>& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<std::byte, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.insert(out.end(), bytes.begin(), bytes.end());
}

template <typename T>
T read_le(const std::byte* in) {
    std::array<std::byte, sizeof(T)> bytes;
    std::memcpy(bytes.data(), in, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

// Sequential little-endian reader over a payload with bounds checking.
class PayloadReader {
  public:
    explicit PayloadReader(std::span<const std::byte> payload) : payload_(payload) {}

    template <typename T>
    T next() {
        require(offset_ + sizeof(T) <= payload_.size(), ErrorKind::length,
                "payload truncated at byte " + std::to_string(offset_));
        T v = read_le<T>(payload_.data() + offset_);
        offset_ += sizeof(T);
        return v;
    }

    std::size_t remaining() const noexcept { return payload_.size() - offset_; }

  private:
    std::span<const std::byte> payload_;
    std::size_t offset_ = 0;
};

// Reads an unsigned integer field from a header, failing with a parse error.
std::size_t header_size(const nlohmann::ordered_json& header, const char* key);

}  // namespace mvt::hsz
