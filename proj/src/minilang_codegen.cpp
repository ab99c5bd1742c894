#include "zkpc/guest_asm.hpp"
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

// Register roles. r1 carries every expression result; r2/r3 are scratch;
// r4 points at the globals block; r5 is the hardware link; r6/r7 frame and
// stack.
constexpr std::uint8_t kRv = 1;
constexpr std::uint8_t kScratch = 2;
constexpr std::uint8_t kGlobalBase = 4;
constexpr std::uint8_t kFp = 6;
constexpr std::uint8_t kSp = 7;

constexpr std::uint32_t kGlobalsAddress = 0x8100;

Instruction r_ins(Opcode op, std::uint8_t rd, std::uint8_t rs1, std::uint8_t rs2) {
    return Instruction{op, rd, rs1, rs2, 0};
}
Instruction i_ins(Opcode op, std::uint8_t rd, std::uint8_t rs1, std::int32_t imm) {
    return Instruction{op, rd, rs1, 0, imm};
}
Instruction store_ins(std::uint8_t base, std::uint8_t value, std::int32_t imm) {
    return Instruction{Opcode::Sw, 0, base, value, imm};
}

class CodeGen {
public:
    explicit CodeGen(const Program& program) : program_(program) {}

    GuestImage run() {
        // Startup: carve out the stack and globals base, call main, exit
        // with its return value.
        unit_.label("__start");
        unit_.emit(i_ins(Opcode::Lui, kSp, 0, 1));  // stack top, grows down
        materialize_into(kGlobalBase, kGlobalsAddress);
        unit_.emit_jump("fn_main");
        unit_.emit(Instruction{Opcode::Halt, 0, kRv, 0, 0});
        unit_.entry_label = "__start";

        for (const Function& fn : program_.functions) gen_function(fn);
        return assemble(unit_);
    }

private:
    std::string fresh_label() { return "L" + std::to_string(next_label_++); }

    void push(std::uint8_t reg) {
        unit_.emit(i_ins(Opcode::Addi, kSp, kSp, -1));
        unit_.emit(store_ins(kSp, reg, 0));
    }
    void pop(std::uint8_t reg) {
        unit_.emit(i_ins(Opcode::Lw, reg, kSp, 0));
        unit_.emit(i_ins(Opcode::Addi, kSp, kSp, 1));
    }

    void materialize_into(std::uint8_t reg, std::uint32_t value) {
        auto signed_imm = [](std::uint32_t half) {
            return static_cast<std::int32_t>(half >= 0x8000 ? half - 0x10000 : half);
        };
        std::int32_t as_signed = static_cast<std::int32_t>(value);
        if (as_signed >= -32768 && as_signed <= 32767) {
            unit_.emit(i_ins(Opcode::Addi, reg, 0, as_signed));
            return;
        }
        std::uint32_t high = ((value + 0x8000) >> 16) & 0xFFFF;
        std::uint32_t low = value & 0xFFFF;
        unit_.emit(i_ins(Opcode::Lui, reg, 0, signed_imm(high)));
        if (low != 0) unit_.emit(i_ins(Opcode::Addi, reg, reg, signed_imm(low)));
    }

    // Variable addressing: params sit above the saved fp/link pair, locals
    // below the frame pointer, globals off the dedicated base.
    std::pair<std::uint8_t, std::int32_t> slot(const VarRef& ref) const {
        switch (ref.storage) {
            case VarRef::Storage::Param:
                return {kFp, static_cast<std::int32_t>(2 + ref.index)};
            case VarRef::Storage::Local:
                return {kFp, -static_cast<std::int32_t>(1 + ref.index)};
            case VarRef::Storage::Global:
                return {kGlobalBase, static_cast<std::int32_t>(ref.index)};
        }
        return {kFp, 0};
    }

    void load_var(const VarRef& ref) {
        auto [base, off] = slot(ref);
        unit_.emit(i_ins(Opcode::Lw, kRv, base, off));
    }
    void store_var(const VarRef& ref) {
        auto [base, off] = slot(ref);
        unit_.emit(store_ins(base, kRv, off));
    }

    void gen_function(const Function& fn) {
        return_label_ = "fn_" + fn.name + "__ret";
        unit_.label("fn_" + fn.name);
        push(5);  // link
        push(kFp);
        unit_.emit(i_ins(Opcode::Addi, kFp, kSp, 0));
        for (std::uint32_t i = 0; i < fn.local_count; ++i) push(0);

        for (const mini::StmtPtr& stmt : fn.body) gen_stmt(*stmt);

        // Falling off the end returns 0.
        unit_.emit(i_ins(Opcode::Addi, kRv, 0, 0));
        unit_.label(return_label_);
        unit_.emit(i_ins(Opcode::Addi, kSp, kFp, 0));
        unit_.emit(i_ins(Opcode::Lw, kFp, kSp, 0));
        unit_.emit(i_ins(Opcode::Lw, 5, kSp, 1));
        // The callee owns the whole frame, arguments included.
        unit_.emit(i_ins(Opcode::Addi, kSp, kSp,
                         static_cast<std::int32_t>(2 + fn.param_count)));
        unit_.emit(i_ins(Opcode::Jalr, 0, 5, 0));
    }

    void gen_stmt(const Stmt& stmt) {
        switch (stmt.kind) {
            case Stmt::Kind::VarDecl:
                break;  // slot zeroed in the prologue
            case Stmt::Kind::Assign:
                gen_expr(*stmt.value);
                store_var(stmt.ref);
                break;
            case Stmt::Kind::If: {
                std::string skip = fresh_label();
                gen_expr(*stmt.value);
                unit_.emit_branch(Opcode::Beq, kRv, 0, skip);
                for (const mini::StmtPtr& s : stmt.body) gen_stmt(*s);
                if (stmt.else_body.empty()) {
                    unit_.label(skip);
                } else {
                    std::string done = fresh_label();
                    unit_.emit_jump(done);
                    unit_.label(skip);
                    for (const mini::StmtPtr& s : stmt.else_body) gen_stmt(*s);
                    unit_.label(done);
                }
                break;
            }
            case Stmt::Kind::While: {
                std::string head = fresh_label();
                std::string done = fresh_label();
                unit_.label(head);
                gen_expr(*stmt.value);
                unit_.emit_branch(Opcode::Beq, kRv, 0, done);
                for (const mini::StmtPtr& s : stmt.body) gen_stmt(*s);
                unit_.emit_jump(head);
                unit_.label(done);
                break;
            }
            case Stmt::Kind::Return:
                gen_expr(*stmt.value);
                unit_.emit_jump(return_label_);
                break;
            case Stmt::Kind::ExprStmt:
                gen_expr(*stmt.value);
                break;
        }
    }

    // Turns r1 in {0, 1} into its complement.
    void flip01() {
        unit_.emit(i_ins(Opcode::Addi, kScratch, 0, 1));
        unit_.emit(r_ins(Opcode::Sub, kRv, kScratch, kRv));
    }

    void gen_expr(const Expr& expr) {
        switch (expr.kind) {
            case Expr::Kind::Number:
                materialize_into(kRv, expr.number);
                break;
            case Expr::Kind::Var:
                load_var(expr.ref);
                break;
            case Expr::Kind::Unary:
                gen_expr(*expr.lhs);
                if (expr.un_op == UnOp::Neg) {
                    unit_.emit(r_ins(Opcode::Sub, kRv, 0, kRv));
                } else {
                    unit_.emit(i_ins(Opcode::Addi, kScratch, 0, 1));
                    unit_.emit(r_ins(Opcode::Sltu, kRv, kRv, kScratch));
                }
                break;
            case Expr::Kind::Binary:
                gen_binary(expr);
                break;
            case Expr::Kind::Call:
                gen_call(expr);
                break;
        }
    }

    void gen_binary(const Expr& expr) {
        if (expr.bin_op == BinOp::LogAnd || expr.bin_op == BinOp::LogOr) {
            bool is_and = expr.bin_op == BinOp::LogAnd;
            std::string shortcut = fresh_label();
            std::string done = fresh_label();
            gen_expr(*expr.lhs);
            unit_.emit_branch(is_and ? Opcode::Beq : Opcode::Bne, kRv, 0, shortcut);
            gen_expr(*expr.rhs);
            unit_.emit(r_ins(Opcode::Sltu, kRv, 0, kRv));
            unit_.emit_jump(done);
            unit_.label(shortcut);
            unit_.emit(i_ins(Opcode::Addi, kRv, 0, is_and ? 0 : 1));
            unit_.label(done);
            return;
        }

        gen_expr(*expr.lhs);
        push(kRv);
        gen_expr(*expr.rhs);
        pop(kScratch);  // lhs in r2, rhs in r1
        switch (expr.bin_op) {
            case BinOp::Add: unit_.emit(r_ins(Opcode::Add, kRv, kScratch, kRv)); break;
            case BinOp::Sub: unit_.emit(r_ins(Opcode::Sub, kRv, kScratch, kRv)); break;
            case BinOp::Mul: unit_.emit(r_ins(Opcode::Mul, kRv, kScratch, kRv)); break;
            case BinOp::Div: unit_.emit(r_ins(Opcode::Divu, kRv, kScratch, kRv)); break;
            case BinOp::Rem: unit_.emit(r_ins(Opcode::Remu, kRv, kScratch, kRv)); break;
            case BinOp::BitAnd: unit_.emit(r_ins(Opcode::And, kRv, kScratch, kRv)); break;
            case BinOp::BitOr: unit_.emit(r_ins(Opcode::Or, kRv, kScratch, kRv)); break;
            case BinOp::BitXor: unit_.emit(r_ins(Opcode::Xor, kRv, kScratch, kRv)); break;
            case BinOp::Shl: unit_.emit(r_ins(Opcode::Sll, kRv, kScratch, kRv)); break;
            case BinOp::Shr: unit_.emit(r_ins(Opcode::Srl, kRv, kScratch, kRv)); break;
            case BinOp::Lt: unit_.emit(r_ins(Opcode::Slt, kRv, kScratch, kRv)); break;
            case BinOp::Gt: unit_.emit(r_ins(Opcode::Slt, kRv, kRv, kScratch)); break;
            case BinOp::Le:
                unit_.emit(r_ins(Opcode::Slt, kRv, kRv, kScratch));
                flip01();
                break;
            case BinOp::Ge:
                unit_.emit(r_ins(Opcode::Slt, kRv, kScratch, kRv));
                flip01();
                break;
            case BinOp::Ne:
                unit_.emit(r_ins(Opcode::Xor, kRv, kScratch, kRv));
                unit_.emit(r_ins(Opcode::Sltu, kRv, 0, kRv));
                break;
            case BinOp::Eq:
                unit_.emit(r_ins(Opcode::Xor, kRv, kScratch, kRv));
                unit_.emit(r_ins(Opcode::Sltu, kRv, 0, kRv));
                flip01();
                break;
            case BinOp::LogAnd:
            case BinOp::LogOr:
                break;  // handled above
        }
    }

    void gen_call(const Expr& expr) {
        if (expr.builtin == Builtin::None) {
            // Arguments go on the stack right to left, so the leftmost ends
            // up nearest the frame.
            for (std::size_t i = expr.args.size(); i-- > 0;) {
                gen_expr(*expr.args[i]);
                push(kRv);
            }
            unit_.emit_jump("fn_" + program_.functions[expr.callee].name);
            return;
        }
        switch (expr.builtin) {
            case Builtin::MLoad:
                gen_expr(*expr.args[0]);
                unit_.emit(i_ins(Opcode::Lw, kRv, kRv, 0));
                break;
            case Builtin::MStore:
                gen_expr(*expr.args[0]);
                push(kRv);
                gen_expr(*expr.args[1]);
                pop(kScratch);
                unit_.emit(store_ins(kScratch, kRv, 0));  // value sticks as result
                break;
            case Builtin::Write:
                gen_expr(*expr.args[0]);
                unit_.emit(Instruction{Opcode::Write, 0, kRv, 0, 0});
                break;
            case Builtin::Halt:
                gen_expr(*expr.args[0]);
                unit_.emit(Instruction{Opcode::Halt, 0, kRv, 0, 0});
                break;
            case Builtin::InputLen:
                unit_.emit(i_ins(Opcode::Lw, kRv, 0, 0));
                break;
            case Builtin::InputByte:
                gen_expr(*expr.args[0]);
                unit_.emit(i_ins(Opcode::Addi, kRv, kRv, 0x0100));
                unit_.emit(i_ins(Opcode::Lw, kRv, kRv, 0));
                break;
            case Builtin::None:
                break;
        }
    }

    const Program& program_;
    AsmUnit unit_;
    std::string return_label_;
    int next_label_ = 0;
};

}  // namespace

GuestImage compile_minilang(std::string_view source) {
    return CodeGen(mini::parse_and_resolve(source)).run();
}

}  // namespace zkpc
