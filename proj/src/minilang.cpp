#include "zkpc/minilang.hpp"

#include <map>
#include <utility>

#include "minilang_ast.hpp"

namespace zkpc::mini {

namespace {

struct Token {
    enum class Kind { End, Ident, Number, Punct };
    Kind kind = Kind::End;
    std::string text;
    std::uint32_t value = 0;  // Number only
    int line = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        for (;;) {
            skip_blanks();
            Token t = next();
            tokens.push_back(t);
            if (t.kind == Token::Kind::End) return tokens;
        }
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw CompileError(line_, message);
    }

    bool eof() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    char take() {
        char c = src_[pos_++];
        if (c == '\n') line_ += 1;
        return c;
    }

    void skip_blanks() {
        for (;;) {
            if (eof()) return;
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') take();
            } else {
                return;
            }
        }
    }

    static bool ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

    Token next() {
        if (eof()) return {Token::Kind::End, "", 0, line_};
        int at = line_;
        char c = peek();

        if (ident_start(c)) {
            std::string text;
            while (!eof() && ident_char(peek())) text.push_back(take());
            return {Token::Kind::Ident, std::move(text), 0, at};
        }
        if (c >= '0' && c <= '9') {
            std::uint64_t value = 0;
            while (!eof() && peek() >= '0' && peek() <= '9') {
                value = value * 10 + static_cast<std::uint64_t>(take() - '0');
                if (value > 0xFFFFFFFFull) fail("integer literal out of range");
            }
            if (!eof() && ident_start(peek())) fail("malformed number");
            return {Token::Kind::Number, "", static_cast<std::uint32_t>(value), at};
        }
        if (c == '\'') return char_literal(at);

        static const char* two[] = {"||", "&&", "==", "!=", "<=", ">=", "<<", ">>"};
        for (const char* p : two) {
            if (c == p[0] && peek(1) == p[1]) {
                take();
                take();
                return {Token::Kind::Punct, p, 0, at};
            }
        }
        static const std::string singles = "|&=!<>+-*/%(){};,^";
        if (singles.find(c) != std::string::npos) {
            take();
            return {Token::Kind::Punct, std::string(1, c), 0, at};
        }
        fail(std::string("stray character '") + c + "'");
    }

    Token char_literal(int at) {
        take();  // opening quote
        if (eof()) fail("unterminated character literal");
        char c = take();
        std::uint32_t value;
        if (c == '\\') {
            if (eof()) fail("unterminated character literal");
            switch (take()) {
                case 'n': value = '\n'; break;
                case 't': value = '\t'; break;
                case 'r': value = '\r'; break;
                case '0': value = 0; break;
                case '\\': value = '\\'; break;
                case '\'': value = '\''; break;
                default: fail("unknown escape in character literal");
            }
        } else if (c == '\'' || c == '\n') {
            fail("empty character literal");
        } else {
            value = static_cast<std::uint8_t>(c);
        }
        if (eof() || take() != '\'') fail("unterminated character literal");
        return {Token::Kind::Number, "", value, at};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

struct GlobalDecl {
    std::string name;
    int line;
};

struct ParsedProgram {
    std::vector<GlobalDecl> globals;
    std::vector<Function> functions;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    ParsedProgram run() {
        ParsedProgram program;
        while (!at_end()) {
            if (peek_is("func")) {
                program.functions.push_back(function());
            } else if (peek_is("var")) {
                int at = line();
                eat();
                std::string name = ident("global name");
                punct(";");
                program.globals.push_back({std::move(name), at});
            } else {
                fail("expected 'func' or 'var' at top level");
            }
        }
        return program;
    }

private:
    const Token& tok(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at_end() const { return tok().kind == Token::Kind::End; }
    int line() const { return tok().line; }
    [[noreturn]] void fail(const std::string& message) const {
        throw CompileError(line(), message);
    }

    bool peek_is(std::string_view text, std::size_t ahead = 0) const {
        const Token& t = tok(ahead);
        return (t.kind == Token::Kind::Ident || t.kind == Token::Kind::Punct) &&
               t.text == text;
    }
    const Token& eat() { return tokens_[pos_++]; }
    void punct(std::string_view text) {
        if (!peek_is(text)) fail("expected '" + std::string(text) + "'");
        eat();
    }
    std::string ident(const std::string& what) {
        if (tok().kind != Token::Kind::Ident) fail("expected " + what);
        return eat().text;
    }

    Function function() {
        Function fn;
        fn.line = line();
        eat();  // func
        fn.name = ident("function name");
        punct("(");
        if (!peek_is(")")) {
            for (;;) {
                fn.params.push_back(ident("parameter name"));
                if (!peek_is(",")) break;
                eat();
            }
        }
        punct(")");
        fn.param_count = static_cast<std::uint32_t>(fn.params.size());
        fn.body = block();
        return fn;
    }

    std::vector<StmtPtr> block() {
        punct("{");
        std::vector<StmtPtr> body;
        while (!peek_is("}")) {
            if (at_end()) fail("unterminated block");
            body.push_back(statement());
        }
        eat();
        return body;
    }

    StmtPtr statement() {
        auto stmt = std::make_unique<Stmt>();
        stmt->line = line();
        if (peek_is("var")) {
            eat();
            stmt->kind = Stmt::Kind::VarDecl;
            stmt->name = ident("variable name");
            punct(";");
            return stmt;
        }
        if (peek_is("if")) return if_statement();
        if (peek_is("while")) {
            eat();
            stmt->kind = Stmt::Kind::While;
            punct("(");
            stmt->value = expression();
            punct(")");
            stmt->body = block();
            return stmt;
        }
        if (peek_is("return")) {
            eat();
            stmt->kind = Stmt::Kind::Return;
            stmt->value = expression();
            punct(";");
            return stmt;
        }
        if (tok().kind == Token::Kind::Ident && peek_is("=", 1)) {
            stmt->kind = Stmt::Kind::Assign;
            stmt->name = eat().text;
            eat();  // =
            stmt->value = expression();
            punct(";");
            return stmt;
        }
        stmt->kind = Stmt::Kind::ExprStmt;
        stmt->value = expression();
        punct(";");
        return stmt;
    }

    StmtPtr if_statement() {
        auto stmt = std::make_unique<Stmt>();
        stmt->line = line();
        stmt->kind = Stmt::Kind::If;
        eat();  // if
        punct("(");
        stmt->value = expression();
        punct(")");
        stmt->body = block();
        if (peek_is("else")) {
            eat();
            if (peek_is("if")) {
                stmt->else_body.push_back(if_statement());
            } else {
                stmt->else_body = block();
            }
        }
        return stmt;
    }

    ExprPtr expression() { return binary(0); }

    // Precedence table, loosest first; mirrors C.
    struct Level {
        std::string_view op;
        BinOp bin;
    };
    static constexpr int kLevels = 10;
    const std::vector<Level>& level_ops(int level) const {
        static const std::vector<Level> table[kLevels] = {
            {{"||", BinOp::LogOr}},
            {{"&&", BinOp::LogAnd}},
            {{"|", BinOp::BitOr}},
            {{"^", BinOp::BitXor}},
            {{"&", BinOp::BitAnd}},
            {{"==", BinOp::Eq}, {"!=", BinOp::Ne}},
            {{"<", BinOp::Lt}, {"<=", BinOp::Le}, {">", BinOp::Gt}, {">=", BinOp::Ge}},
            {{"<<", BinOp::Shl}, {">>", BinOp::Shr}},
            {{"+", BinOp::Add}, {"-", BinOp::Sub}},
            {{"*", BinOp::Mul}, {"/", BinOp::Div}, {"%", BinOp::Rem}},
        };
        return table[level];
    }

    ExprPtr binary(int level) {
        if (level == kLevels) return unary();
        ExprPtr node = binary(level + 1);
        for (;;) {
            const Level* hit = nullptr;
            for (const Level& candidate : level_ops(level)) {
                if (tok().kind == Token::Kind::Punct && tok().text == candidate.op) {
                    hit = &candidate;
                    break;
                }
            }
            if (!hit) return node;
            auto parent = std::make_unique<Expr>();
            parent->kind = Expr::Kind::Binary;
            parent->line = line();
            parent->bin_op = hit->bin;
            eat();
            parent->lhs = std::move(node);
            parent->rhs = binary(level + 1);
            node = std::move(parent);
        }
    }

    ExprPtr unary() {
        if (peek_is("!") || peek_is("-")) {
            auto node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Unary;
            node->line = line();
            node->un_op = peek_is("!") ? UnOp::Not : UnOp::Neg;
            eat();
            node->lhs = unary();
            return node;
        }
        return primary();
    }

    ExprPtr primary() {
        auto node = std::make_unique<Expr>();
        node->line = line();
        if (tok().kind == Token::Kind::Number) {
            node->kind = Expr::Kind::Number;
            node->number = eat().value;
            return node;
        }
        if (peek_is("(")) {
            eat();
            node = expression();
            punct(")");
            return node;
        }
        if (tok().kind == Token::Kind::Ident) {
            node->name = eat().text;
            if (peek_is("(")) {
                node->kind = Expr::Kind::Call;
                eat();
                if (!peek_is(")")) {
                    for (;;) {
                        node->args.push_back(expression());
                        if (!peek_is(",")) break;
                        eat();
                    }
                }
                punct(")");
            } else {
                node->kind = Expr::Kind::Var;
            }
            return node;
        }
        fail("expected an expression");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Globals live at 0x8100..0x81FF, one word per slot, addressed off the
// globals base register. Past the input region, below the guest's own
// scratch space conventions.
constexpr std::uint32_t kMaxGlobals = 256;

struct BuiltinSig {
    Builtin id;
    std::size_t arity;
};

const std::map<std::string, BuiltinSig>& builtin_table() {
    static const std::map<std::string, BuiltinSig> table = {
        {"mload", {Builtin::MLoad, 1}},      {"mstore", {Builtin::MStore, 2}},
        {"write", {Builtin::Write, 1}},      {"halt", {Builtin::Halt, 1}},
        {"input_len", {Builtin::InputLen, 0}}, {"input_byte", {Builtin::InputByte, 1}},
    };
    return table;
}

class Resolver {
public:
    Program run(ParsedProgram parsed) {
        Program program;
        for (const GlobalDecl& g : parsed.globals) {
            if (builtin_table().count(g.name)) {
                throw CompileError(g.line, "'" + g.name + "' is a builtin name");
            }
            if (!globals_.emplace(g.name, static_cast<std::uint32_t>(globals_.size()))
                     .second) {
                throw CompileError(g.line, "duplicate global '" + g.name + "'");
            }
        }
        if (globals_.size() > kMaxGlobals) {
            throw CompileError(parsed.globals.back().line, "too many globals");
        }
        program.global_count = static_cast<std::uint32_t>(globals_.size());

        for (std::size_t i = 0; i < parsed.functions.size(); ++i) {
            const Function& fn = parsed.functions[i];
            if (builtin_table().count(fn.name)) {
                throw CompileError(fn.line, "'" + fn.name + "' is a builtin name");
            }
            if (!functions_.emplace(fn.name, static_cast<std::uint32_t>(i)).second) {
                throw CompileError(fn.line, "duplicate function '" + fn.name + "'");
            }
            arities_.push_back(fn.param_count);
        }
        auto main_it = functions_.find("main");
        if (main_it == functions_.end()) throw CompileError(1, "no 'main' function");
        program.main_index = main_it->second;
        if (parsed.functions[program.main_index].param_count != 0) {
            throw CompileError(parsed.functions[program.main_index].line,
                               "'main' takes no parameters");
        }

        program.functions = std::move(parsed.functions);
        for (Function& fn : program.functions) resolve_function(fn);
        return program;
    }

private:
    void resolve_function(Function& fn) {
        scope_.clear();
        local_count_ = 0;
        for (std::uint32_t i = 0; i < fn.param_count; ++i) {
            if (!scope_.emplace(fn.params[i], VarRef{VarRef::Storage::Param, i}).second) {
                throw CompileError(fn.line, "duplicate parameter '" + fn.params[i] + "'");
            }
        }
        for (StmtPtr& stmt : fn.body) resolve_stmt(*stmt);
        fn.local_count = local_count_;
    }

    void resolve_stmt(Stmt& stmt) {
        switch (stmt.kind) {
            case Stmt::Kind::VarDecl:
                if (scope_.count(stmt.name)) {
                    throw CompileError(stmt.line, "redeclared '" + stmt.name + "'");
                }
                scope_.emplace(stmt.name, VarRef{VarRef::Storage::Local, local_count_});
                local_count_ += 1;
                break;
            case Stmt::Kind::Assign:
                stmt.ref = lookup(stmt.name, stmt.line);
                resolve_expr(*stmt.value);
                break;
            case Stmt::Kind::If:
                resolve_expr(*stmt.value);
                for (StmtPtr& s : stmt.body) resolve_stmt(*s);
                for (StmtPtr& s : stmt.else_body) resolve_stmt(*s);
                break;
            case Stmt::Kind::While:
                resolve_expr(*stmt.value);
                for (StmtPtr& s : stmt.body) resolve_stmt(*s);
                break;
            case Stmt::Kind::Return:
            case Stmt::Kind::ExprStmt:
                resolve_expr(*stmt.value);
                break;
        }
    }

    void resolve_expr(Expr& expr) {
        switch (expr.kind) {
            case Expr::Kind::Number:
                break;
            case Expr::Kind::Var:
                expr.ref = lookup(expr.name, expr.line);
                break;
            case Expr::Kind::Unary:
                resolve_expr(*expr.lhs);
                break;
            case Expr::Kind::Binary:
                resolve_expr(*expr.lhs);
                resolve_expr(*expr.rhs);
                break;
            case Expr::Kind::Call: {
                auto builtin = builtin_table().find(expr.name);
                if (builtin != builtin_table().end()) {
                    expr.builtin = builtin->second.id;
                    if (expr.args.size() != builtin->second.arity) {
                        throw CompileError(expr.line,
                                           "'" + expr.name + "' expects " +
                                               std::to_string(builtin->second.arity) +
                                               " argument(s)");
                    }
                } else {
                    auto fn = functions_.find(expr.name);
                    if (fn == functions_.end()) {
                        throw CompileError(expr.line,
                                           "unknown function '" + expr.name + "'");
                    }
                    expr.callee = fn->second;
                    std::uint32_t want = arities_[fn->second];
                    if (expr.args.size() != want) {
                        throw CompileError(expr.line, "'" + expr.name + "' expects " +
                                                          std::to_string(want) +
                                                          " argument(s)");
                    }
                }
                for (ExprPtr& arg : expr.args) resolve_expr(*arg);
                break;
            }
        }
    }

    VarRef lookup(const std::string& name, int line) const {
        auto local = scope_.find(name);
        if (local != scope_.end()) return local->second;
        auto global = globals_.find(name);
        if (global != globals_.end()) {
            return VarRef{VarRef::Storage::Global, global->second};
        }
        throw CompileError(line, "undeclared variable '" + name + "'");
    }

    std::map<std::string, std::uint32_t> globals_;
    std::map<std::string, std::uint32_t> functions_;
    std::vector<std::uint32_t> arities_;
    std::map<std::string, VarRef> scope_;
    std::uint32_t local_count_ = 0;
};

}  // namespace

Program parse_and_resolve(std::string_view source) {
    return Resolver().run(Parser(Lexer(source).run()).run());
}

}  // namespace zkpc::mini
