#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "zkpc/bytes.hpp"

namespace zkpc {

/// Host reference compiler, the oracle the guest compiler is measured
/// against. On success `ok` is true and `text` is the StackAsm program; on
/// the first error `ok` is false and `text` is exactly "error: line L\n".
/// Total: any byte sequence yields one or the other.
struct ExprCompileResult {
    std::string text;
    bool ok = false;
};
ExprCompileResult reference_compile(std::string_view source);

/// Direct AST evaluation of an ExprLang program, independent of the
/// compiler's code path. Used to check that compiled StackAsm preserves
/// semantics.
struct ExprEvalResult {
    Bytes output;
    std::optional<std::string> error;
};
ExprEvalResult evaluate_expr_program(std::string_view source);

/// Executes StackAsm text. Strict about the format: one instruction per
/// line, single spaces, newline-terminated.
struct StackVmResult {
    Bytes output;
    std::optional<std::string> error;
};
StackVmResult stackvm_run(std::string_view asm_text);

/// Deterministic random ExprLang program: `size` body statements followed
/// by up to five prints of live variables. Every generated program compiles
/// cleanly and never divides by zero at runtime. pre: size >= 1
std::string gen_program(std::uint64_t seed, std::uint32_t size);

}  // namespace zkpc
