#include "mvt/hsz.hpp"

#include <fstream>
#include <iterator>
#include <string>

namespace mvt::hsz {

namespace {

std::string printable(const Magic& magic) {
    std::string s;
    for (char c : magic) {
        if (c == '\0') {
            s += "\\0";
        } else {
            s += c;
        }
    }
    return s;
}

}  // namespace

void write_frame(const std::filesystem::path& path, const Magic& magic,
                 const nlohmann::ordered_json& header, std::span<const std::byte> payload) {
    const std::string text = header.dump();
    std::vector<std::byte> prefix;
    prefix.reserve(12);
    for (char c : magic) prefix.push_back(static_cast<std::byte>(c));
    append_le<std::uint32_t>(prefix, static_cast<std::uint32_t>(text.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(prefix.data()), static_cast<std::streamsize>(prefix.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    require(static_cast<bool>(out), ErrorKind::io, "failed writing " + path.string());
}

Frame read_frame(const std::filesystem::path& path, const Magic& magic) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    require(bytes.size() >= 12, ErrorKind::parse, path.string() + ": file shorter than HSZ preamble");
    require(std::equal(magic.begin(), magic.end(), bytes.begin()), ErrorKind::parse,
            path.string() + ": expected magic " + printable(magic));
    const auto header_len =
        read_le<std::uint32_t>(reinterpret_cast<const std::byte*>(bytes.data()) + 8);
    require(bytes.size() - 12 >= header_len, ErrorKind::parse,
            path.string() + ": header length " + std::to_string(header_len) + " exceeds file size");

    Frame frame;
    try {
        frame.header = nlohmann::ordered_json::parse(bytes.begin() + 12,
                                                     bytes.begin() + 12 + header_len);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, path.string() + ": malformed header: " + e.what());
    }
    require(frame.header.is_object(), ErrorKind::parse, path.string() + ": header is not an object");
    const auto* body = reinterpret_cast<const std::byte*>(bytes.data()) + 12 + header_len;
    frame.payload.assign(body, reinterpret_cast<const std::byte*>(bytes.data()) + bytes.size());
    return frame;
}

std::size_t header_size(const nlohmann::ordered_json& header, const char* key) {
    auto it = header.find(key);
    require(it != header.end() && it->is_number_unsigned(), ErrorKind::parse,
            std::string("header field '") + key + "' missing or not an unsigned integer");
    return it->get<std::size_t>();
}

}  // namespace mvt::hsz
