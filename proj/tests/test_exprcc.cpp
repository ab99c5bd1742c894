#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "zkpc/exprlang.hpp"
#include "zkpc/image.hpp"
#include "zkpc/machine.hpp"
#include "zkpc/minilang.hpp"
#include "zkpc/prover.hpp"
#include "zkpc/verifier.hpp"

using namespace zkpc;

namespace {

const std::string& guest_source() {
    static const std::string src = [] {
        std::ifstream in(ZKPC_REPO_DIR "/guest/exprcc.mini", std::ios::binary);
        REQUIRE(in.good());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }();
    return src;
}

const GuestImage& guest_image() {
    static const GuestImage image = compile_minilang(guest_source());
    return image;
}

Bytes to_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

std::string to_text(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

struct GuestCompile {
    std::string text;
    std::uint32_t exit_code = 0;
};

GuestCompile machine_compile(const std::string& src) {
    ExecutionResult r = run(guest_image(), to_bytes(src));
    REQUIRE(!r.trap.has_value());
    return {to_text(r.output), r.exit_code};
}

GuestCompile interp_compile(const std::string& src) {
    MiniRunResult r = interpret_minilang(guest_source(), to_bytes(src));
    REQUIRE(!r.error.has_value());
    return {to_text(r.output), r.exit_code};
}

// The load-bearing property of the whole artifact: the compiler running
// inside the provable machine is byte-for-byte the reference compiler.
ExprCompileResult agree(const std::string& src, bool also_interp = false) {
    ExprCompileResult ref = reference_compile(src);
    GuestCompile m = machine_compile(src);
    CHECK(m.text == ref.text);
    CHECK(m.exit_code == (ref.ok ? 0u : 1u));
    if (also_interp) {
        GuestCompile i = interp_compile(src);
        CHECK(i.text == ref.text);
        CHECK(i.exit_code == (ref.ok ? 0u : 1u));
    }
    return ref;
}

}  // namespace

TEST_CASE("guest compiler image is deterministic and pinned") {
    Digest id = compute_image_id(guest_image());
    Digest again = compute_image_id(compile_minilang(guest_source()));
    CHECK(id == again);

    std::ifstream in(ZKPC_REPO_DIR "/tests/vectors/exprcc_image_id.txt");
    REQUIRE(in.good());
    std::string expected;
    in >> expected;
    CHECK(id.hex() == expected);
}

TEST_CASE("guest compiler matches reference on golden programs") {
    ExprCompileResult a = agree("print 1+2*3;", true);
    CHECK(a.ok);
    CHECK(a.text == "PUSH 1\nPUSH 2\nPUSH 3\nMUL\nADD\nPRINT\nHALT\n");

    ExprCompileResult b = agree("let x = 4;\nprint x;", true);
    CHECK(b.ok);
    CHECK(b.text == "PUSH 4\nSTORE 0\nLOAD 0\nPRINT\nHALT\n");

    ExprCompileResult c = agree("print (1+;", true);
    CHECK(!c.ok);
    CHECK(c.text == "error: line 1\n");
}

TEST_CASE("guest compiler matches reference on feature programs") {
    const std::string programs[] = {
        "let x=10; x = x*x; print x;",
        "print 0-1;",
        "print 10-3-4;",
        "print (2+3)*4;",
        "print 100/10/5;",
        "print --5;",
        "print 2*-3;",
        "print 2147483647+1;",
        "print (0-10)/2;",
        "print 007;",
        "print 1 + 2 ;",
        "let a = 6; let b = 7; print a*b; print a; print b;",
        "let a = 5;\na = a + 1;\na = a * a;\nprint a;",
        "let abcdefghijklmnop = 9; print abcdefghijklmnop;",
        "print 1;\r\nprint 2;\r\n",
        "print 1/0;",  // compiles; division only happens at run time
    };
    for (const std::string& src : programs) {
        CAPTURE(src);
        CHECK(agree(src, true).ok);
    }
}

TEST_CASE("guest compiler matches reference on error programs") {
    const std::string programs[] = {
        "",
        "let x = 1;",
        "let x = 1;\n",
        "print 1;\nprint (;\n",
        "print x;",
        "let x = 1;\nlet x = 2;\nprint x;",
        "y = 1;\nprint 1;",
        "let let = 1;\nprint 1;",
        "let print = 1;\nprint 1;",
        "print 2147483648;",
        "let x = x;\nprint 1;",
        "print 1",
        "print 12ab;",
        "print X;",
        "Let x = 1;\nprint 1;",
        "print 1;;\nprint 2;",
        "\n\nprint (;\nprint 1;\n",
        "print 1;x",
        "print abcdefghijklmnopq;",
        "print ();",
        "print -;",
        "let = 1;\nprint 1;",
        "print 9999999999;",
    };
    for (const std::string& src : programs) {
        CAPTURE(src);
        CHECK(!agree(src, true).ok);
    }
}

TEST_CASE("guest compiler matches reference at the caps") {
    std::string lets;
    for (int i = 0; i < 64; ++i)
        lets += "let v" + std::to_string(i) + " = " + std::to_string(i) + ";\n";
    CHECK(agree(lets + "print v63;\n").ok);
    CHECK(!agree(lets + "let v64 = 1;\nprint v0;\n").ok);

    auto nested = [](int parens) {
        std::string src = "print ";
        for (int i = 0; i < parens; ++i) src += '(';
        src += '5';
        for (int i = 0; i < parens; ++i) src += ')';
        return src + ";";
    };
    CHECK(agree(nested(63)).ok);
    CHECK(!agree(nested(64)).ok);
}

TEST_CASE("guest compiler matches reference on the generated corpus") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        std::uint32_t size = 1 + static_cast<std::uint32_t>(seed % 16);
        std::string src = gen_program(seed, size);
        CAPTURE(seed);
        ExprCompileResult ref = agree(src, seed % 10 == 0);
        CHECK(ref.ok);

        StackVmResult vm = stackvm_run(ref.text);
        REQUIRE(!vm.error.has_value());
        ExprEvalResult ev = evaluate_expr_program(src);
        REQUIRE(!ev.error.has_value());
        CHECK(to_text(vm.output) == to_text(ev.output));
    }
}

TEST_CASE("guest compiler matches reference under fuzz") {
    std::mt19937 rng(20260822);
    const std::string alphabet =
        "  \n\tletprinxyz0123456789()+-*/;=_letprint;;==  \nabqv";

    for (int i = 0; i < 200; ++i) {
        std::string src;
        std::size_t len = rng() % 120;
        for (std::size_t j = 0; j < len; ++j)
            src += alphabet[rng() % alphabet.size()];
        CAPTURE(i);
        CAPTURE(src);
        agree(src, i % 10 == 0);
    }

    for (int i = 0; i < 60; ++i) {
        std::string src;
        std::size_t len = rng() % 40;
        for (std::size_t j = 0; j < len; ++j)
            src += static_cast<char>(rng() % 256);
        CAPTURE(i);
        agree(src);
    }
}

TEST_CASE("guest compiler matches reference under mutation fuzz") {
    std::mt19937 rng(404);
    for (int i = 0; i < 100; ++i) {
        std::string src = gen_program(1000 + i, 1 + i % 6);
        std::size_t kind = rng() % 3;
        if (src.empty()) continue;
        std::size_t at = rng() % src.size();
        if (kind == 0) src[at] = static_cast<char>(rng() % 128);
        else if (kind == 1) src.erase(at, 1);
        else src.insert(at, 1, static_cast<char>(rng() % 128));
        CAPTURE(i);
        CAPTURE(src);
        agree(src);
    }
}

TEST_CASE("guest compilation runs end to end through the receipt pipeline") {
    std::string src = gen_program(7, 6);
    Bytes input = to_bytes(src);
    Digest id = compute_image_id(guest_image());

    Receipt receipt = prove(guest_image(), input, 8);
    CHECK(receipt.claim.exit_code == 0);
    CHECK(to_text(receipt.claim.output_bytes) == reference_compile(src).text);

    VerifyReport sampled = verify(receipt, id, input, guest_image());
    CHECK(sampled.accepted);
    VerifyReport full = verify_full(receipt, id, input, guest_image());
    CHECK(full.accepted);

    // A malformed source exits 1 inside the guest; no receipt is issued.
    Bytes bad = to_bytes(std::string("print (1+;"));
    CHECK_THROWS_AS(prove(guest_image(), bad, 8), ReceiptRefused);
}
