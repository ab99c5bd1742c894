#include "zkpc/image.hpp"

#include <stdexcept>

#include "zkpc/errors.hpp"
#include "zkpc/io.hpp"

namespace zkpc {

namespace {

constexpr char kMagic[4] = {'Z', 'K', 'P', 'I'};

void validate(const GuestImage& image, const char* context) {
    if (image.code.empty() || image.code.size() > kMaxCodeWords) {
        throw ParseError(context, "code length out of range");
    }
    if (image.entry_pc >= image.code.size()) {
        throw ParseError(context, "entry_pc past end of code");
    }
}

}  // namespace

Digest compute_image_id(const GuestImage& image) {
    Sha256 hasher;
    hasher.update_byte(kImageTag);
    hasher.update_byte(static_cast<std::uint8_t>(image.format_version));
    hasher.update_u32(image.entry_pc);
    hasher.update_u32(static_cast<std::uint32_t>(image.code.size()));
    for (std::uint32_t word : image.code) hasher.update_u32(word);
    return hasher.finish();
}

Bytes serialize_image(const GuestImage& image) {
    validate(image, "image");
    Bytes out;
    out.reserve(14 + 4 * image.code.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, image.format_version);
    put_u32(out, image.entry_pc);
    put_u32(out, static_cast<std::uint32_t>(image.code.size()));
    for (std::uint32_t word : image.code) put_u32(out, word);
    return out;
}

GuestImage deserialize_image(ByteView data) {
    if (data.size() < 4 || !std::equal(kMagic, kMagic + 4, data.begin())) {
        throw ParseError("image magic", "expected ZKPI");
    }
    if (data.size() < 14) throw ParseError("image header", "truncated");
    GuestImage image;
    image.format_version = get_u16(data, 4);
    if (image.format_version != kImageFormatVersion) {
        throw ParseError("image version", "unsupported");
    }
    image.entry_pc = get_u32(data, 6);
    std::uint32_t code_len = get_u32(data, 10);
    if (code_len == 0 || code_len > kMaxCodeWords) {
        throw ParseError("image code length", "out of range");
    }
    if (data.size() < 14 + std::size_t{code_len} * 4) {
        throw ParseError("image code", "truncated");
    }
    if (data.size() > 14 + std::size_t{code_len} * 4) {
        throw ParseError("image", "trailing bytes");
    }
    image.code.reserve(code_len);
    for (std::uint32_t i = 0; i < code_len; ++i) {
        image.code.push_back(get_u32(data, 14 + std::size_t{i} * 4));
    }
    validate(image, "image");
    return image;
}

void save_image(const GuestImage& image, const std::filesystem::path& path) {
    write_file(path, as_bytes(serialize_image(image)));
}

GuestImage load_image(const std::filesystem::path& path) {
    Bytes data = read_file(path);
    return deserialize_image(as_bytes(data));
}

}  // namespace zkpc
