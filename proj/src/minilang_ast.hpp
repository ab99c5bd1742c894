// Internal AST shared by the MiniLang code generator and the reference
// interpreter. Not installed; include only from src/.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace zkpc::mini {

enum class BinOp {
    Add, Sub, Mul, Div, Rem,
    BitAnd, BitOr, BitXor, Shl, Shr,
    Eq, Ne, Lt, Le, Gt, Ge,
    LogAnd, LogOr,
};

enum class UnOp { Neg, Not };

enum class Builtin { None, MLoad, MStore, Write, Halt, InputLen, InputByte };

struct VarRef {
    enum class Storage { Global, Param, Local };
    Storage storage = Storage::Local;
    std::uint32_t index = 0;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind { Number, Var, Unary, Binary, Call };
    Kind kind = Kind::Number;
    int line = 0;

    std::uint32_t number = 0;  // Number

    std::string name;  // Var and Call, kept for diagnostics
    VarRef ref;        // Var, filled by resolve

    UnOp un_op = UnOp::Neg;
    BinOp bin_op = BinOp::Add;
    ExprPtr lhs;  // Unary operand lives here too
    ExprPtr rhs;

    std::vector<ExprPtr> args;          // Call
    Builtin builtin = Builtin::None;    // Call: set for builtin callees
    std::uint32_t callee = 0;           // Call: function index otherwise
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    enum class Kind { VarDecl, Assign, If, While, Return, ExprStmt };
    Kind kind = Kind::ExprStmt;
    int line = 0;

    std::string name;  // VarDecl / Assign target
    VarRef ref;        // Assign target, filled by resolve

    ExprPtr value;  // Assign value, Return value, ExprStmt body, If/While condition
    std::vector<StmtPtr> body;       // If then-branch, While body
    std::vector<StmtPtr> else_body;  // If only
};

struct Function {
    std::string name;
    int line = 0;
    std::uint32_t param_count = 0;
    std::uint32_t local_count = 0;  // filled by resolve
    std::vector<std::string> params;
    std::vector<StmtPtr> body;
};

struct Program {
    std::vector<Function> functions;
    std::uint32_t global_count = 0;
    std::uint32_t main_index = 0;
};

/// Full front end: lex, parse, resolve names and arities. Throws
/// zkpc::CompileError with a 1-based line on any failure.
Program parse_and_resolve(std::string_view source);

}  // namespace zkpc::mini
