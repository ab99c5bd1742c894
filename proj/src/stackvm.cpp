#include "zkpc/exprlang.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zkpc {
namespace {

enum class Op { Push, Load, Store, Add, Sub, Mul, Div, Neg, Print, Halt };

struct Ins {
    Op op;
    std::uint32_t operand = 0;
    int line = 0;
};

constexpr std::size_t kSlots = 64;

struct Trap {
    std::string message;
};

[[noreturn]] void trap(int line, const std::string& what) {
    throw Trap{"line " + std::to_string(line) + ": " + what};
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::uint32_t parse_operand(std::string_view s, std::uint64_t limit,
                            int line) {
    if (!all_digits(s) || s.size() > 10) trap(line, "bad operand");
    std::uint64_t v = 0;
    for (char c : s) v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v >= limit) trap(line, "operand out of range");
    return static_cast<std::uint32_t>(v);
}

// The text format is deliberately rigid: exactly one space before an
// operand, no trailing whitespace, newline-terminated. Byte-level drift in
// a compiler shows up here as a trap instead of being silently accepted.
std::vector<Ins> parse(std::string_view text) {
    std::vector<Ins> program;
    std::size_t pos = 0;
    int line = 1;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) trap(line, "unterminated line");
        std::string_view row = text.substr(pos, eol - pos);
        pos = eol + 1;

        std::size_t space = row.find(' ');
        std::string_view mnem =
            (space == std::string_view::npos) ? row : row.substr(0, space);
        std::string_view rest =
            (space == std::string_view::npos) ? "" : row.substr(space + 1);

        Ins ins;
        ins.line = line;
        if (mnem == "PUSH") {
            ins.op = Op::Push;
            ins.operand = parse_operand(rest, 1ULL << 31, line);
        } else if (mnem == "LOAD") {
            ins.op = Op::Load;
            ins.operand = parse_operand(rest, kSlots, line);
        } else if (mnem == "STORE") {
            ins.op = Op::Store;
            ins.operand = parse_operand(rest, kSlots, line);
        } else {
            if (mnem == "ADD") ins.op = Op::Add;
            else if (mnem == "SUB") ins.op = Op::Sub;
            else if (mnem == "MUL") ins.op = Op::Mul;
            else if (mnem == "DIV") ins.op = Op::Div;
            else if (mnem == "NEG") ins.op = Op::Neg;
            else if (mnem == "PRINT") ins.op = Op::Print;
            else if (mnem == "HALT") ins.op = Op::Halt;
            else trap(line, "unknown instruction");
            if (space != std::string_view::npos)
                trap(line, "unexpected operand");
        }
        program.push_back(ins);
        ++line;
    }
    return program;
}

}  // namespace

StackVmResult stackvm_run(std::string_view asm_text) {
    StackVmResult result;
    try {
        std::vector<Ins> program = parse(asm_text);
        std::array<std::uint32_t, kSlots> slots{};
        std::vector<std::uint32_t> stack;
        std::string printed;

        auto pop = [&](int line) {
            if (stack.empty()) trap(line, "stack underflow");
            std::uint32_t v = stack.back();
            stack.pop_back();
            return v;
        };

        bool halted = false;
        for (const Ins& ins : program) {
            switch (ins.op) {
                case Op::Push:
                    stack.push_back(ins.operand);
                    break;
                case Op::Load:
                    stack.push_back(slots[ins.operand]);
                    break;
                case Op::Store:
                    slots[ins.operand] = pop(ins.line);
                    break;
                case Op::Add: {
                    std::uint32_t b = pop(ins.line), a = pop(ins.line);
                    stack.push_back(a + b);
                    break;
                }
                case Op::Sub: {
                    std::uint32_t b = pop(ins.line), a = pop(ins.line);
                    stack.push_back(a - b);
                    break;
                }
                case Op::Mul: {
                    std::uint32_t b = pop(ins.line), a = pop(ins.line);
                    stack.push_back(a * b);
                    break;
                }
                case Op::Div: {
                    std::uint32_t b = pop(ins.line), a = pop(ins.line);
                    if (b == 0) trap(ins.line, "division by zero");
                    stack.push_back(a / b);
                    break;
                }
                case Op::Neg:
                    stack.push_back(0 - pop(ins.line));
                    break;
                case Op::Print: {
                    std::uint32_t v = pop(ins.line);
                    printed += std::to_string(static_cast<std::int32_t>(v));
                    printed += '\n';
                    break;
                }
                case Op::Halt:
                    halted = true;
                    break;
            }
            if (halted) break;
        }
        if (!halted)
            trap(static_cast<int>(program.size()) + 1, "missing HALT");
        for (char c : printed)
            result.output.push_back(static_cast<std::uint8_t>(c));
    } catch (const Trap& t) {
        result.error = t.message;
    }
    return result;
}

}  // namespace zkpc
