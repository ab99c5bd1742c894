#include <unordered_map>

#include "zkpc/machine.hpp"
#include "zkpc/minilang.hpp"

#include "minilang_ast.hpp"

namespace zkpc {

namespace {

using mini::BinOp;
using mini::Builtin;
using mini::Expr;
using mini::Function;
using mini::Program;
using mini::Stmt;
using mini::UnOp;
using mini::VarRef;

struct HaltSignal {
    std::uint32_t code;
};

struct TrapSignal {
    std::string message;
};

// Mirrors the machine: same word wraparound, same trap conditions, same
// builtin addressing. Divergence here is exactly what the differential
// tests exist to catch.
class Interp {
public:
    Interp(const Program& program, ByteView input, std::uint64_t fuel)
        : program_(program), fuel_(fuel), globals_(program.global_count, 0) {
        for (auto [address, value] : init_memory(input)) memory_[address] = value;
    }

    std::uint32_t run_main() {
        return call(program_.functions[program_.main_index], {});
    }

    Bytes output;

private:
    void tick(int line) {
        if (fuel_ == 0) throw TrapSignal{"fuel exhausted (line " +
                                         std::to_string(line) + ")"};
        fuel_ -= 1;
    }

    struct Frame {
        std::vector<std::uint32_t> params;
        std::vector<std::uint32_t> locals;
    };

    std::uint32_t call(const Function& fn, std::vector<std::uint32_t> args) {
        Frame frame;
        frame.params = std::move(args);
        frame.locals.assign(fn.local_count, 0);
        frames_.push_back(std::move(frame));
        std::optional<std::uint32_t> returned = exec_block(fn.body);
        frames_.pop_back();
        return returned.value_or(0);
    }

    std::optional<std::uint32_t> exec_block(const std::vector<mini::StmtPtr>& body) {
        for (const mini::StmtPtr& stmt : body) {
            if (auto returned = exec_stmt(*stmt)) return returned;
        }
        return std::nullopt;
    }

    std::optional<std::uint32_t> exec_stmt(const Stmt& stmt) {
        tick(stmt.line);
        switch (stmt.kind) {
            case Stmt::Kind::VarDecl:
                return std::nullopt;
            case Stmt::Kind::Assign:
                store(stmt.ref, eval(*stmt.value));
                return std::nullopt;
            case Stmt::Kind::If:
                if (eval(*stmt.value) != 0) return exec_block(stmt.body);
                return exec_block(stmt.else_body);
            case Stmt::Kind::While:
                while (eval(*stmt.value) != 0) {
                    tick(stmt.line);
                    if (auto returned = exec_block(stmt.body)) return returned;
                }
                return std::nullopt;
            case Stmt::Kind::Return:
                return eval(*stmt.value);
            case Stmt::Kind::ExprStmt:
                eval(*stmt.value);
                return std::nullopt;
        }
        return std::nullopt;
    }

    std::uint32_t load(const VarRef& ref) const {
        switch (ref.storage) {
            case VarRef::Storage::Global: return globals_[ref.index];
            case VarRef::Storage::Param: return frames_.back().params[ref.index];
            case VarRef::Storage::Local: return frames_.back().locals[ref.index];
        }
        return 0;
    }

    void store(const VarRef& ref, std::uint32_t value) {
        switch (ref.storage) {
            case VarRef::Storage::Global: globals_[ref.index] = value; break;
            case VarRef::Storage::Param: frames_.back().params[ref.index] = value; break;
            case VarRef::Storage::Local: frames_.back().locals[ref.index] = value; break;
        }
    }

    std::uint32_t mem_read(std::uint32_t address, int line) {
        if (address >= (1u << kMemoryDepth)) {
            throw TrapSignal{"memory address out of range (line " +
                             std::to_string(line) + ")"};
        }
        auto it = memory_.find(address);
        return it == memory_.end() ? 0 : it->second;
    }

    void mem_write(std::uint32_t address, std::uint32_t value, int line) {
        if (address >= (1u << kMemoryDepth)) {
            throw TrapSignal{"memory address out of range (line " +
                             std::to_string(line) + ")"};
        }
        memory_[address] = value;
    }

    std::uint32_t eval(const Expr& expr) {
        tick(expr.line);
        switch (expr.kind) {
            case Expr::Kind::Number:
                return expr.number;
            case Expr::Kind::Var:
                return load(expr.ref);
            case Expr::Kind::Unary: {
                std::uint32_t v = eval(*expr.lhs);
                return expr.un_op == UnOp::Neg ? 0 - v : (v == 0 ? 1 : 0);
            }
            case Expr::Kind::Binary:
                return eval_binary(expr);
            case Expr::Kind::Call:
                return eval_call(expr);
        }
        return 0;
    }

    std::uint32_t eval_binary(const Expr& expr) {
        if (expr.bin_op == BinOp::LogAnd) {
            if (eval(*expr.lhs) == 0) return 0;
            return eval(*expr.rhs) != 0 ? 1 : 0;
        }
        if (expr.bin_op == BinOp::LogOr) {
            if (eval(*expr.lhs) != 0) return 1;
            return eval(*expr.rhs) != 0 ? 1 : 0;
        }
        std::uint32_t a = eval(*expr.lhs);
        std::uint32_t b = eval(*expr.rhs);
        auto sa = static_cast<std::int32_t>(a);
        auto sb = static_cast<std::int32_t>(b);
        switch (expr.bin_op) {
            case BinOp::Add: return a + b;
            case BinOp::Sub: return a - b;
            case BinOp::Mul: return a * b;
            case BinOp::Div:
                if (b == 0) {
                    throw TrapSignal{"division by zero (line " +
                                     std::to_string(expr.line) + ")"};
                }
                return a / b;
            case BinOp::Rem:
                if (b == 0) {
                    throw TrapSignal{"division by zero (line " +
                                     std::to_string(expr.line) + ")"};
                }
                return a % b;
            case BinOp::BitAnd: return a & b;
            case BinOp::BitOr: return a | b;
            case BinOp::BitXor: return a ^ b;
            case BinOp::Shl: return a << (b & 31);
            case BinOp::Shr: return a >> (b & 31);
            case BinOp::Eq: return a == b ? 1 : 0;
            case BinOp::Ne: return a != b ? 1 : 0;
            case BinOp::Lt: return sa < sb ? 1 : 0;
            case BinOp::Le: return sa <= sb ? 1 : 0;
            case BinOp::Gt: return sa > sb ? 1 : 0;
            case BinOp::Ge: return sa >= sb ? 1 : 0;
            case BinOp::LogAnd:
            case BinOp::LogOr: break;
        }
        return 0;
    }

    std::uint32_t eval_call(const Expr& expr) {
        if (expr.builtin == Builtin::None) {
            // Right-to-left, matching the compiled argument pushes.
            std::vector<std::uint32_t> args(expr.args.size());
            for (std::size_t i = expr.args.size(); i-- > 0;) {
                args[i] = eval(*expr.args[i]);
            }
            return call(program_.functions[expr.callee], std::move(args));
        }
        switch (expr.builtin) {
            case Builtin::MLoad:
                return mem_read(eval(*expr.args[0]), expr.line);
            case Builtin::MStore: {
                std::uint32_t address = eval(*expr.args[0]);
                std::uint32_t value = eval(*expr.args[1]);
                mem_write(address, value, expr.line);
                return value;
            }
            case Builtin::Write: {
                std::uint32_t value = eval(*expr.args[0]);
                output.push_back(static_cast<std::uint8_t>(value & 0xFF));
                return value;
            }
            case Builtin::Halt:
                throw HaltSignal{eval(*expr.args[0])};
            case Builtin::InputLen:
                return mem_read(0, expr.line);
            case Builtin::InputByte:
                return mem_read(eval(*expr.args[0]) + 0x0100, expr.line);
            case Builtin::None:
                break;
        }
        return 0;
    }

    const Program& program_;
    std::uint64_t fuel_;
    std::unordered_map<std::uint32_t, std::uint32_t> memory_;
    std::vector<std::uint32_t> globals_;
    std::vector<Frame> frames_;
};

}  // namespace

MiniRunResult interpret_minilang(std::string_view source, ByteView input,
                                 std::uint64_t fuel) {
    mini::Program program = mini::parse_and_resolve(source);
    MiniRunResult result;
    Interp interp(program, input, fuel);
    try {
        result.exit_code = interp.run_main();
    } catch (const HaltSignal& halt) {
        result.exit_code = halt.code;
    } catch (const TrapSignal& trap) {
        result.error = trap.message;
    }
    result.output = std::move(interp.output);
    return result;
}

}  // namespace zkpc
