#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "zkpc/digest.hpp"

namespace zkpc {

inline constexpr std::uint8_t kImageTag = 0x03;
inline constexpr std::uint16_t kImageFormatVersion = 1;
inline constexpr std::uint32_t kMaxCodeWords = 1u << 20;

/// Immutable guest program. Code lives in its own address space indexed by
/// word (Harvard layout); data memory is separate and set up at boot.
struct GuestImage {
    std::vector<std::uint32_t> code;
    std::uint32_t entry_pc = 0;
    std::uint16_t format_version = kImageFormatVersion;

    bool operator==(const GuestImage&) const = default;
};

/// The compiler's cryptographic identity: a tagged hash over version, entry
/// point, code length, and every code word, little-endian throughout.
Digest compute_image_id(const GuestImage& image);

Bytes serialize_image(const GuestImage& image);
GuestImage deserialize_image(ByteView data);  // throws ParseError

void save_image(const GuestImage& image, const std::filesystem::path& path);
GuestImage load_image(const std::filesystem::path& path);

}  // namespace zkpc
