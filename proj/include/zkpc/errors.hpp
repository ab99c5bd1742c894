#pragma once

#include <stdexcept>
#include <string>

namespace zkpc {

/// Structured parse failure for serialized artifacts. `section` names the
/// field being read when the input ran out or failed validation.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string section, const std::string& what)
        : std::runtime_error(section + ": " + what), section_(std::move(section)) {}

    const std::string& section() const { return section_; }

private:
    std::string section_;
};

}  // namespace zkpc
