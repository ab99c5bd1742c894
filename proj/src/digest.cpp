#include "zkpc/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace zkpc {

namespace {

const EVP_MD* md_sha256() {
    static const EVP_MD* md = EVP_sha256();
    return md;
}

EVP_MD_CTX* ctx_of(void* p) { return static_cast<EVP_MD_CTX*>(p); }

[[noreturn]] void fail() { throw std::runtime_error("sha256: libcrypto failure"); }

}  // namespace

std::string Digest::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::optional<Digest> Digest::from_hex(std::string_view text) {
    if (text.size() != 64) return std::nullopt;
    Digest d;
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = -1, lo = -1;
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        hi = nibble(text[2 * i]);
        lo = nibble(text[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        d.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
}

Digest sha256(ByteView data) {
    thread_local Sha256 hasher;
    hasher.update(data);
    return hasher.finish();
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_of(ctx_), md_sha256(), nullptr) != 1) fail();
}

Sha256::~Sha256() { EVP_MD_CTX_free(ctx_of(ctx_)); }

Sha256& Sha256::update(ByteView data) {
    if (!data.empty() && EVP_DigestUpdate(ctx_of(ctx_), data.data(), data.size()) != 1) fail();
    return *this;
}

Sha256& Sha256::update_byte(std::uint8_t value) {
    return update(ByteView{&value, 1});
}

Sha256& Sha256::update_u32(std::uint32_t value) {
    auto b = le32(value);
    return update(ByteView{b.data(), b.size()});
}

Sha256& Sha256::update_u64(std::uint64_t value) {
    auto b = le64(value);
    return update(ByteView{b.data(), b.size()});
}

Digest Sha256::finish() {
    Digest out;
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_of(ctx_), out.bytes.data(), &len) != 1 || len != 32) fail();
    if (EVP_DigestInit_ex(ctx_of(ctx_), md_sha256(), nullptr) != 1) fail();
    return out;
}

}  // namespace zkpc
