#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "zkpc/bytes.hpp"

namespace zkpc {

/// 32-byte SHA-256 output. Compared bytewise.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;

    ByteView view() const { return {bytes.data(), bytes.size()}; }
    std::string hex() const;
    static std::optional<Digest> from_hex(std::string_view text);
};

Digest sha256(ByteView data);

/// Incremental SHA-256. Integer helpers append little-endian.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(ByteView data);
    Sha256& update_byte(std::uint8_t value);
    Sha256& update_u32(std::uint32_t value);
    Sha256& update_u64(std::uint64_t value);

    /// Finalizes and resets, so the object can be reused for the next hash.
    Digest finish();

private:
    void* ctx_;
};

}  // namespace zkpc
