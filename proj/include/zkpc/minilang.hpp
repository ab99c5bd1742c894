#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "zkpc/image.hpp"

namespace zkpc {

/// Lex, parse, or resolve failure. The line number is 1-based.
class CompileError : public std::runtime_error {
public:
    CompileError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Compiles MiniLang source to a guest image. Deterministic: identical
/// source bytes yield identical images. errors: CompileError, AsmError.
GuestImage compile_minilang(std::string_view source);

struct MiniRunResult {
    Bytes output;
    std::uint32_t exit_code = 0;
    // Set when evaluation faulted (division by zero, bad address, fuel);
    // mirrors the conditions that trap the compiled program.
    std::optional<std::string> error;
};

/// Reference interpreter: direct AST evaluation with the machine's memory
/// and builtin semantics. `fuel` bounds evaluation steps the way a step
/// budget bounds the machine. errors: CompileError for invalid source.
MiniRunResult interpret_minilang(std::string_view source, ByteView input,
                                 std::uint64_t fuel = std::uint64_t{1} << 26);

}  // namespace zkpc
