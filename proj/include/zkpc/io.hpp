#pragma once

#include <filesystem>

#include "zkpc/bytes.hpp"

namespace zkpc {

/// Whole-file helpers. Both throw std::runtime_error on I/O failure.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView data);

}  // namespace zkpc
