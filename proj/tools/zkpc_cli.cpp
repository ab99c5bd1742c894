// zkpc: operator surface for the verifiable-compilation pipeline.
//
// Exit codes, stable across subcommands:
//   0 success / verification accepted
//   1 verification rejected
//   2 usage error
//   3 guest trap (including a guest that exits nonzero)
//   4 I/O or file-format error

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zkpc/attacks.hpp"
#include "zkpc/errors.hpp"
#include "zkpc/exprlang.hpp"
#include "zkpc/image.hpp"
#include "zkpc/io.hpp"
#include "zkpc/machine.hpp"
#include "zkpc/minilang.hpp"
#include "zkpc/prover.hpp"
#include "zkpc/verifier.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;
constexpr int kTrap = 3;
constexpr int kIo = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string text_of(const zkpc::Bytes& bytes) {
    return std::string(bytes.begin(), bytes.end());
}

int cmd_handshake(const std::string& image_path) {
    zkpc::GuestImage image = zkpc::load_image(image_path);
    std::cout << zkpc::compute_image_id(image).hex() << "\n";
    return kOk;
}

int cmd_build_guest(const std::string& source_path,
                    const std::string& out_path) {
    zkpc::Bytes source = zkpc::read_file(source_path);
    zkpc::GuestImage image;
    try {
        image = zkpc::compile_minilang(text_of(source));
    } catch (const zkpc::CompileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    if (!out_path.empty()) zkpc::save_image(image, out_path);
    std::cout << zkpc::compute_image_id(image).hex() << "\n";
    if (!out_path.empty())
        std::cerr << "wrote " << out_path << " (" << image.code.size()
                  << " code words)\n";
    return kOk;
}

int cmd_gen(std::uint64_t seed, std::uint32_t size) {
    std::cout << zkpc::gen_program(seed, size);
    return kOk;
}

int cmd_run(const std::string& asm_path) {
    zkpc::Bytes text = zkpc::read_file(asm_path);
    zkpc::StackVmResult result = zkpc::stackvm_run(text_of(text));
    std::cout << text_of(result.output);
    if (result.error) {
        std::cerr << "trap: " << *result.error << "\n";
        return kTrap;
    }
    return kOk;
}

int cmd_prove(const std::string& image_path, const std::string& source_path,
              const std::string& out_path, std::uint32_t samples,
              std::uint64_t max_steps) {
    zkpc::GuestImage image = zkpc::load_image(image_path);
    zkpc::Bytes source = zkpc::read_file(source_path);

    zkpc::Receipt receipt;
    try {
        receipt = zkpc::prove(image, source, samples, max_steps);
    } catch (const zkpc::ReceiptRefused& e) {
        std::cerr << "guest refused: " << e.what() << "\n";
        return kTrap;
    } catch (const zkpc::GuestTrap& e) {
        std::cerr << "guest trap: " << e.what() << "\n";
        return kTrap;
    }

    zkpc::save_receipt(receipt, out_path);
    std::filesystem::path asm_path(out_path);
    asm_path.replace_extension(".s");
    zkpc::write_file(asm_path, receipt.claim.output_bytes);

    std::cout << "trace_len=" << receipt.claim.trace_len
              << " receipt_bytes=" << zkpc::serialize_receipt(receipt).size()
              << " output=" << asm_path.string() << "\n";
    return kOk;
}

int cmd_verify(const std::string& receipt_path, const std::string& source_path,
               const std::string& image_path, const std::string& image_id_hex,
               bool full, const std::string& expect_output_path) {
    zkpc::GuestImage image = zkpc::load_image(image_path);
    zkpc::Bytes source = zkpc::read_file(source_path);

    zkpc::Digest expected_id = zkpc::compute_image_id(image);
    if (!image_id_hex.empty()) {
        auto parsed = zkpc::Digest::from_hex(image_id_hex);
        if (!parsed) {
            std::cerr << "bad --image-id: want 64 hex chars\n";
            return kUsage;
        }
        expected_id = *parsed;
    }

    zkpc::Receipt receipt;
    try {
        receipt = zkpc::load_receipt(receipt_path);
    } catch (const zkpc::ParseError& e) {
        std::cout << "rejected class=MalformedReceipt detail=" << e.what()
                  << "\n";
        return kReject;
    }

    zkpc::VerifyReport report =
        full ? zkpc::verify_full(receipt, expected_id, source, image)
             : zkpc::verify(receipt, expected_id, source, image);
    if (!report.accepted) {
        std::cout << "rejected class="
                  << zkpc::failure_class_name(report.failure_class)
                  << " detail=" << report.detail << "\n";
        return kReject;
    }

    if (!expect_output_path.empty()) {
        zkpc::Bytes expected = zkpc::read_file(expect_output_path);
        if (expected != receipt.claim.output_bytes) {
            std::cout << "rejected class=none detail=receipt verified but "
                         "claimed output differs from "
                      << expect_output_path << "\n";
            return kReject;
        }
    }

    std::cout << "accepted output_bytes=" << receipt.claim.output_bytes.size()
              << " trace_len=" << receipt.claim.trace_len << "\n";
    return kOk;
}

int cmd_attack(const std::string& image_path, const std::string& dir,
               std::uint64_t seed, std::uint32_t samples,
               const std::string& only) {
    zkpc::GuestImage image = zkpc::load_image(image_path);
    std::string source_a = zkpc::gen_program(seed, 4);
    std::string source_b = zkpc::gen_program(seed + 1, 4);

    std::vector<zkpc::ScenarioResult> results = zkpc::run_attack_suite(
        dir, image, zkpc::Bytes(source_a.begin(), source_a.end()),
        zkpc::Bytes(source_b.begin(), source_b.end()), samples);

    bool matched_any = false;
    bool all_as_expected = true;
    for (const zkpc::ScenarioResult& r : results) {
        if (!only.empty() && r.scenario != only) continue;
        matched_any = true;
        bool as_expected = r.report.accepted != r.expected_reject;
        all_as_expected = all_as_expected && as_expected;
        std::cout << "scenario=" << r.scenario
                  << " expected=" << (r.expected_reject ? "REJECT" : "ACCEPT")
                  << " got=" << (r.report.accepted ? "ACCEPT" : "REJECT")
                  << " class="
                  << zkpc::failure_class_name(r.report.failure_class) << "\n";
    }
    if (!matched_any) {
        std::cerr << "unknown scenario: " << only << "\n";
        return kUsage;
    }
    return all_as_expected ? kOk : kReject;
}

int cmd_bench(const std::string& image_path, const std::string& out_path,
              std::uint32_t count, std::uint64_t seed_base,
              std::uint32_t size_base, std::uint32_t size_step,
              std::uint32_t samples) {
    zkpc::GuestImage image = zkpc::load_image(image_path);
    zkpc::Digest image_id = zkpc::compute_image_id(image);

    std::ofstream csv(out_path);
    if (!csv.good()) {
        std::cerr << "cannot open " << out_path << "\n";
        return kIo;
    }
    csv << "program_id,source_size_bytes,standard_compile_seconds,"
           "prove_seconds,verify_seconds,receipt_size_bytes,trace_len\n";
    csv.precision(6);
    csv << std::fixed;

    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint64_t seed = seed_base + i;
        std::uint32_t size = size_base + i * size_step;
        std::string source = zkpc::gen_program(seed, size);
        zkpc::Bytes input(source.begin(), source.end());

        auto t0 = Clock::now();
        zkpc::ExprCompileResult reference = zkpc::reference_compile(source);
        double compile_s = seconds_since(t0);
        if (!reference.ok) {
            std::cerr << "seed " << seed << ": generated program failed to "
                      << "compile\n";
            return kTrap;
        }

        zkpc::Receipt receipt;
        auto t1 = Clock::now();
        try {
            receipt = zkpc::prove(image, input, samples);
        } catch (const std::exception& e) {
            std::cerr << "seed " << seed << ": prove failed: " << e.what()
                      << "\n";
            return kTrap;
        }
        double prove_s = seconds_since(t1);

        auto t2 = Clock::now();
        zkpc::VerifyReport report =
            zkpc::verify(receipt, image_id, input, image);
        double verify_s = seconds_since(t2);
        if (!report.accepted) {
            std::cerr << "seed " << seed << ": verification rejected ("
                      << zkpc::failure_class_name(report.failure_class)
                      << ")\n";
            return kReject;
        }

        csv << seed << "," << source.size() << "," << compile_s << ","
            << prove_s << "," << verify_s << ","
            << zkpc::serialize_receipt(receipt).size() << ","
            << receipt.claim.trace_len << "\n";
    }
    std::cerr << "wrote " << count << " records to " << out_path << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verifiable compilation: prove and check compiler runs"};
    app.require_subcommand(1);

    std::string image_path, source_path, out_path, receipt_path;
    std::string image_id_hex, expect_output_path, asm_path, scenario;
    std::string dir = "attack_workdir";
    std::uint64_t seed = 0;
    std::uint64_t max_steps = zkpc::kDefaultMaxSteps;
    std::uint32_t size = 8;
    std::uint32_t samples = zkpc::kDefaultSampleCount;
    std::uint32_t count = 10;
    std::uint32_t size_base = 2;
    std::uint32_t size_step = 2;
    bool full = false;

    CLI::App* handshake =
        app.add_subcommand("handshake", "print a compiler image's ImageID");
    handshake->add_option("--image", image_path, "ZKPI image file")
        ->required();

    CLI::App* build = app.add_subcommand(
        "build-guest", "compile a MiniLang guest to a ZKPI image");
    build->add_option("--source", source_path, "MiniLang source")->required();
    build->add_option("--out", out_path, "image file to write");

    CLI::App* gen =
        app.add_subcommand("gen", "emit a deterministic random program");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--size", size, "body statement count");

    CLI::App* runvm = app.add_subcommand("run", "execute a StackAsm file");
    runvm->add_option("--asm", asm_path, "StackAsm file")->required();

    CLI::App* prove = app.add_subcommand(
        "prove", "run the guest compiler under trace and emit a receipt");
    prove->add_option("--image", image_path, "ZKPI image file")->required();
    prove->add_option("--source", source_path, "program to compile")
        ->required();
    prove->add_option("--out", out_path, "receipt file to write")->required();
    prove->add_option("--samples", samples, "opened steps (k)");
    prove->add_option("--max-steps", max_steps, "execution budget");

    CLI::App* verify =
        app.add_subcommand("verify", "check a receipt against source + image");
    verify->add_option("--receipt", receipt_path, "ZKPC receipt")->required();
    verify->add_option("--source", source_path, "source presented")
        ->required();
    verify->add_option("--image", image_path, "ZKPI image from handshake")
        ->required();
    verify->add_option("--image-id", image_id_hex,
                       "trusted ImageID (default: computed from --image)");
    verify->add_flag("--full", full, "re-execute instead of sampling");
    verify->add_option("--expect-output", expect_output_path,
                       "also require claimed output to equal this file");

    CLI::App* attack =
        app.add_subcommand("attack", "run the adversarial scenario suite");
    attack->add_option("--image", image_path, "ZKPI image file")->required();
    attack->add_option("--dir", dir, "workspace directory");
    attack->add_option("--seed", seed, "program generator seed");
    attack->add_option("--samples", samples, "opened steps (k)");
    attack->add_option("--scenario", scenario, "run only this scenario");

    CLI::App* bench = app.add_subcommand(
        "bench", "time compile/prove/verify over generated programs");
    bench->add_option("--image", image_path, "ZKPI image file")->required();
    bench->add_option("--out", out_path, "CSV file to write")->required();
    bench->add_option("--count", count, "number of programs");
    bench->add_option("--seed-base", seed, "first seed");
    bench->add_option("--size-base", size_base, "statements in program 0");
    bench->add_option("--size-step", size_step, "statement increment");
    bench->add_option("--samples", samples, "opened steps (k)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }

    try {
        if (app.got_subcommand(handshake)) return cmd_handshake(image_path);
        if (app.got_subcommand(build))
            return cmd_build_guest(source_path, out_path);
        if (app.got_subcommand(gen)) return cmd_gen(seed, size);
        if (app.got_subcommand(runvm)) return cmd_run(asm_path);
        if (app.got_subcommand(prove))
            return cmd_prove(image_path, source_path, out_path, samples,
                             max_steps);
        if (app.got_subcommand(verify))
            return cmd_verify(receipt_path, source_path, image_path,
                              image_id_hex, full, expect_output_path);
        if (app.got_subcommand(attack))
            return cmd_attack(image_path, dir, seed, samples, scenario);
        if (app.got_subcommand(bench))
            return cmd_bench(image_path, out_path, count, seed, size_base,
                             size_step, samples);
    } catch (const zkpc::ParseError& e) {
        std::cerr << "bad file: " << e.what() << "\n";
        return kIo;
    } catch (const zkpc::GuestTrap& e) {
        std::cerr << "guest trap: " << e.what() << "\n";
        return kTrap;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}
