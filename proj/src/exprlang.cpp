#include "zkpc/exprlang.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace zkpc {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return c >= 'a' && c <= 'z'; }
bool is_ident_char(char c) {
    return is_ident_start(c) || is_digit(c) || c == '_';
}

// The guest compiler is a line-for-line transliteration of this class.
// Anything observable here (error lines, emission order, the exact place a
// check happens) is load-bearing for byte equality between the two; change
// both together or neither.
class RefCompiler {
  public:
    explicit RefCompiler(std::string_view src) : src_(src) {}

    ExprCompileResult run() {
        try {
            program();
        } catch (const Fail& f) {
            return {"error: line " + std::to_string(f.line) + "\n", false};
        }
        out_ += "HALT\n";
        return {std::move(out_), true};
    }

  private:
    struct Fail {
        int line;
    };

    [[noreturn]] void fail(int line) const { throw Fail{line}; }

    void skip_ws() {
        while (pos_ < src_.size() && is_ws(src_[pos_])) {
            if (src_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    void expect(char c) {
        skip_ws();
        if (peek() != c) fail(line_);
        ++pos_;
    }

    // pre: is_ident_start(peek())
    std::string read_ident() {
        std::string word;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            word.push_back(src_[pos_]);
            ++pos_;
            if (word.size() > 16) fail(line_);
        }
        return word;
    }

    // pre: is_digit(peek())
    std::uint32_t lex_number() {
        std::uint32_t value = 0;
        while (pos_ < src_.size() && is_digit(src_[pos_])) {
            std::uint32_t d = static_cast<std::uint32_t>(src_[pos_] - '0');
            if (value > 214748364 || (value == 214748364 && d > 7))
                fail(line_);
            value = value * 10 + d;
            ++pos_;
        }
        return value;
    }

    int slot_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    void program() {
        for (;;) {
            skip_ws();
            if (pos_ >= src_.size()) break;
            statement();
        }
        if (statement_count_ == 0 || !last_was_print_) fail(line_);
    }

    void statement() {
        if (!is_ident_start(peek())) fail(line_);
        int word_line = line_;
        std::string word = read_ident();
        if (word == "let") {
            skip_ws();
            if (!is_ident_start(peek())) fail(line_);
            int name_line = line_;
            std::string name = read_ident();
            if (name == "let" || name == "print") fail(name_line);
            if (slot_of(name) >= 0) fail(name_line);
            expect('=');
            expression();
            expect(';');
            if (names_.size() >= 64) fail(name_line);
            names_.push_back(name);
            emit_slot("STORE", static_cast<int>(names_.size()) - 1);
            last_was_print_ = false;
        } else if (word == "print") {
            expression();
            expect(';');
            out_ += "PRINT\n";
            last_was_print_ = true;
        } else {
            int slot = slot_of(word);
            if (slot < 0) fail(word_line);
            expect('=');
            expression();
            expect(';');
            emit_slot("STORE", slot);
            last_was_print_ = false;
        }
        ++statement_count_;
    }

    void expression() {
        term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            term();
            out_ += (c == '+') ? "ADD\n" : "SUB\n";
        }
    }

    void term() {
        unary();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos_;
            unary();
            out_ += (c == '*') ? "MUL\n" : "DIV\n";
        }
    }

    // The nesting cap keeps the guest transliteration's recursion inside its
    // fixed stack region; it is part of the language, not an implementation
    // accident, so the evaluator enforces it too.
    void unary() {
        ++depth_;
        if (depth_ > 64) fail(line_);
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            unary();
            out_ += "NEG\n";
        } else {
            primary();
        }
        --depth_;
    }

    void primary() {
        skip_ws();
        char c = peek();
        if (is_digit(c)) {
            std::uint32_t n = lex_number();
            out_ += "PUSH " + std::to_string(n) + "\n";
        } else if (is_ident_start(c)) {
            int use_line = line_;
            std::string name = read_ident();
            int slot = slot_of(name);
            if (slot < 0) fail(use_line);
            emit_slot("LOAD", slot);
        } else if (c == '(') {
            ++pos_;
            expression();
            expect(')');
        } else {
            fail(line_);
        }
    }

    void emit_slot(const char* op, int slot) {
        out_ += op;
        out_ += ' ';
        out_ += std::to_string(slot);
        out_ += '\n';
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::string out_;
    std::vector<std::string> names_;
    int statement_count_ = 0;
    int depth_ = 0;
    bool last_was_print_ = false;
};

// Fused parse-and-evaluate interpreter. ExprLang is straight-line, so a
// single forward pass computes every value; no AST or StackAsm involved.
class Evaluator {
  public:
    explicit Evaluator(std::string_view src) : src_(src) {}

    ExprEvalResult run() {
        ExprEvalResult result;
        try {
            for (;;) {
                skip_ws();
                if (pos_ >= src_.size()) break;
                statement();
            }
            if (statement_count_ == 0 || !last_was_print_)
                throw std::runtime_error("line " + std::to_string(line_) +
                                         ": program must end with print");
        } catch (const std::runtime_error& e) {
            result.error = e.what();
        }
        for (char c : out_)
            result.output.push_back(static_cast<std::uint8_t>(c));
        return result;
    }

  private:
    [[noreturn]] void oops(const std::string& msg) const {
        throw std::runtime_error("line " + std::to_string(line_) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < src_.size() && is_ws(src_[pos_])) {
            if (src_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    void expect(char c) {
        skip_ws();
        if (peek() != c) oops(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string read_ident() {
        std::string word;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) {
            word.push_back(src_[pos_]);
            ++pos_;
            if (word.size() > 16) oops("identifier too long");
        }
        return word;
    }

    std::uint32_t lex_number() {
        std::uint32_t value = 0;
        while (pos_ < src_.size() && is_digit(src_[pos_])) {
            std::uint32_t d = static_cast<std::uint32_t>(src_[pos_] - '0');
            if (value > 214748364 || (value == 214748364 && d > 7))
                oops("literal out of range");
            value = value * 10 + d;
            ++pos_;
        }
        return value;
    }

    void statement() {
        if (!is_ident_start(peek())) oops("expected statement");
        std::string word = read_ident();
        if (word == "let") {
            skip_ws();
            if (!is_ident_start(peek())) oops("expected name");
            std::string name = read_ident();
            if (name == "let" || name == "print") oops("reserved word");
            if (env_.count(name)) oops("redefinition of " + name);
            expect('=');
            std::uint32_t v = expression();
            expect(';');
            env_[name] = v;
            last_was_print_ = false;
        } else if (word == "print") {
            std::uint32_t v = expression();
            expect(';');
            out_ += std::to_string(static_cast<std::int32_t>(v));
            out_ += '\n';
            last_was_print_ = true;
        } else {
            auto it = env_.find(word);
            if (it == env_.end()) oops("undefined variable " + word);
            expect('=');
            std::uint32_t v = expression();
            expect(';');
            it->second = v;
            last_was_print_ = false;
        }
        ++statement_count_;
    }

    std::uint32_t expression() {
        std::uint32_t v = term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            ++pos_;
            std::uint32_t r = term();
            v = (c == '+') ? v + r : v - r;
        }
        return v;
    }

    std::uint32_t term() {
        std::uint32_t v = unary();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '*' && c != '/') break;
            ++pos_;
            std::uint32_t r = unary();
            if (c == '*') {
                v = v * r;
            } else {
                if (r == 0) oops("division by zero");
                v = v / r;
            }
        }
        return v;
    }

    std::uint32_t unary() {
        ++depth_;
        if (depth_ > 64) oops("expression too deep");
        skip_ws();
        std::uint32_t v;
        if (peek() == '-') {
            ++pos_;
            v = 0 - unary();
        } else {
            v = primary();
        }
        --depth_;
        return v;
    }

    std::uint32_t primary() {
        skip_ws();
        char c = peek();
        if (is_digit(c)) return lex_number();
        if (is_ident_start(c)) {
            std::string name = read_ident();
            auto it = env_.find(name);
            if (it == env_.end()) oops("undefined variable " + name);
            return it->second;
        }
        if (c == '(') {
            ++pos_;
            std::uint32_t v = expression();
            expect(')');
            return v;
        }
        oops("expected expression");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    std::string out_;
    std::map<std::string, std::uint32_t> env_;
    int statement_count_ = 0;
    int depth_ = 0;
    bool last_was_print_ = false;
};

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t pick(std::uint64_t n) { return next() % n; }
};

class Generator {
  public:
    Generator(std::uint64_t seed, std::uint32_t size)
        : rng_{seed}, size_(size) {}

    std::string run() {
        for (std::uint32_t i = 0; i < size_; ++i) statement();
        std::uint64_t prints = rng_.pick(5) + 1;
        if (prints > vars_) prints = vars_;
        for (std::uint64_t i = 0; i < prints; ++i)
            out_ += "print v" + std::to_string(i) + ";\n";
        return std::move(out_);
    }

  private:
    std::string var_name(std::uint64_t index) const {
        return "v" + std::to_string(index);
    }

    void statement() {
        std::uint64_t roll = rng_.pick(10);
        if (vars_ == 0 || roll < 4) {
            std::string name = var_name(vars_);
            out_ += "let " + name + " = " + expression(depth()) + ";\n";
            ++vars_;
        } else if (roll < 8) {
            std::string name = var_name(rng_.pick(vars_));
            out_ += name + " = " + expression(depth()) + ";\n";
        } else {
            out_ += "print " + expression(depth()) + ";\n";
        }
    }

    std::uint64_t depth() { return 1 + rng_.pick(6); }

    std::string expression(std::uint64_t depth) {
        if (depth == 0) return leaf();
        std::uint64_t roll = rng_.pick(20);
        if (roll < 9) return binary(depth);
        if (roll < 11) return "-" + expression(depth - 1);
        return leaf();
    }

    std::string binary(std::uint64_t depth) {
        static const char* const ops[4] = {" + ", " - ", " * ", " / "};
        std::uint64_t op = rng_.pick(4);
        std::string lhs = expression(depth - 1);
        // Runtime division by zero would make the whole program trap, so
        // divisors are always nonzero literals.
        std::string rhs = (op == 3)
                              ? std::to_string(1 + rng_.pick(999))
                              : expression(depth - 1);
        return "(" + lhs + ops[op] + rhs + ")";
    }

    std::string leaf() {
        if (vars_ > 0 && rng_.pick(2) == 0) return var_name(rng_.pick(vars_));
        if (rng_.pick(8) == 0)
            return std::to_string(rng_.pick(2147483648ULL));
        return std::to_string(rng_.pick(1000));
    }

    SplitMix64 rng_;
    std::uint32_t size_;
    std::uint64_t vars_ = 0;
    std::string out_;
};

}  // namespace

ExprCompileResult reference_compile(std::string_view source) {
    return RefCompiler(source).run();
}

ExprEvalResult evaluate_expr_program(std::string_view source) {
    return Evaluator(source).run();
}

std::string gen_program(std::uint64_t seed, std::uint32_t size) {
    if (size == 0) throw std::invalid_argument("gen_program: size must be >= 1");
    return Generator(seed, size).run();
}

}  // namespace zkpc
