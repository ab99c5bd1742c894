#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace zkpc {

using ByteView = std::span<const std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

inline ByteView as_bytes(std::string_view text) {
    return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

inline ByteView as_bytes(const Bytes& data) {
    return {data.data(), data.size()};
}

// All integer serialization in this project is little-endian.

inline std::array<std::uint8_t, 4> le32(std::uint32_t value) {
    return {static_cast<std::uint8_t>(value),
            static_cast<std::uint8_t>(value >> 8),
            static_cast<std::uint8_t>(value >> 16),
            static_cast<std::uint8_t>(value >> 24)};
}

inline std::array<std::uint8_t, 8> le64(std::uint64_t value) {
    std::array<std::uint8_t, 8> out;
    for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(value >> (8 * i));
    return out;
}

inline void put_u16(Bytes& out, std::uint16_t value) {
    out.push_back(static_cast<std::uint8_t>(value));
    out.push_back(static_cast<std::uint8_t>(value >> 8));
}

inline void put_u32(Bytes& out, std::uint32_t value) {
    auto b = le32(value);
    out.insert(out.end(), b.begin(), b.end());
}

inline void put_u64(Bytes& out, std::uint64_t value) {
    auto b = le64(value);
    out.insert(out.end(), b.begin(), b.end());
}

inline std::uint16_t get_u16(ByteView in, std::size_t offset) {
    return static_cast<std::uint16_t>(in[offset] | (in[offset + 1] << 8));
}

inline std::uint32_t get_u32(ByteView in, std::size_t offset) {
    return static_cast<std::uint32_t>(in[offset]) |
           (static_cast<std::uint32_t>(in[offset + 1]) << 8) |
           (static_cast<std::uint32_t>(in[offset + 2]) << 16) |
           (static_cast<std::uint32_t>(in[offset + 3]) << 24);
}

inline std::uint64_t get_u64(ByteView in, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | in[offset + static_cast<std::size_t>(i)];
    return v;
}

}  // namespace zkpc
