#include "zkpc/attacks.hpp"

#include "zkpc/io.hpp"
#include "zkpc/prover.hpp"

namespace zkpc {
namespace {

bool is_name_char(std::uint8_t c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

VerifyReport verify_files(const std::filesystem::path& image_path,
                          const std::filesystem::path& source_path,
                          const std::filesystem::path& receipt_path) {
    GuestImage image = load_image(image_path);
    Bytes source = read_file(source_path);
    Receipt receipt = load_receipt(receipt_path);
    return verify(receipt, compute_image_id(image), source, image);
}

}  // namespace

AttackBaseline write_baseline(const std::filesystem::path& dir,
                              const GuestImage& image, ByteView source,
                              std::uint32_t sample_count) {
    std::filesystem::create_directories(dir);
    AttackBaseline b;
    b.dir = dir;
    b.image_path = dir / "image.bin";
    b.source_path = dir / "source.expr";
    b.receipt_path = dir / "receipt.bin";
    b.image_id = compute_image_id(image);

    Receipt receipt = prove(image, source, sample_count);
    save_image(image, b.image_path);
    write_file(b.source_path, source);
    save_receipt(receipt, b.receipt_path);
    return b;
}

VerifyReport attack_control(const AttackBaseline& b) {
    return verify_files(b.image_path, b.source_path, b.receipt_path);
}

VerifyReport attack_compiler(const AttackBaseline& b, std::size_t word_index,
                             std::uint32_t mask) {
    GuestImage substitute = load_image(b.image_path);
    substitute.code.at(word_index % substitute.code.size()) ^= mask;
    std::filesystem::path mut = b.dir / "image.substitute.bin";
    save_image(substitute, mut);

    // The verifier's handshake was with the substitute: it holds the
    // substitute image and its ImageID, and receives the honest receipt.
    GuestImage held = load_image(mut);
    Receipt receipt = load_receipt(b.receipt_path);
    Bytes source = read_file(b.source_path);
    return verify(receipt, compute_image_id(held), source, held);
}

VerifyReport attack_source(const AttackBaseline& b, ByteView mutated_source) {
    std::filesystem::path mut = b.dir / "source.tampered.expr";
    write_file(mut, mutated_source);
    return verify_files(b.image_path, mut, b.receipt_path);
}

VerifyReport attack_output(const AttackBaseline& b, ByteView mutated_output) {
    Receipt receipt = load_receipt(b.receipt_path);
    receipt.claim.output_bytes.assign(mutated_output.begin(),
                                      mutated_output.end());
    std::filesystem::path mut = b.dir / "receipt.output.bin";
    save_receipt(receipt, mut);
    return verify_files(b.image_path, b.source_path, mut);
}

VerifyReport attack_replay(const AttackBaseline& a, const AttackBaseline& b) {
    return verify_files(a.image_path, b.source_path, a.receipt_path);
}

VerifyReport attack_output_swap(const AttackBaseline& a,
                                const AttackBaseline& b) {
    Receipt theirs = load_receipt(b.receipt_path);
    return attack_output(a, theirs.claim.output_bytes);
}

Bytes rename_first_variable(ByteView source) {
    Bytes out(source.begin(), source.end());
    // Find the name bound by the first "let" and flip its first letter
    // everywhere it appears as a whole token.
    std::size_t i = 0;
    std::size_t name_at = std::string::npos;
    std::size_t name_len = 0;
    while (i + 3 < out.size()) {
        bool boundary = i == 0 || !is_name_char(out[i - 1]);
        if (boundary && out[i] == 'l' && out[i + 1] == 'e' &&
            out[i + 2] == 't' && !is_name_char(out[i + 3])) {
            std::size_t j = i + 3;
            while (j < out.size() && (out[j] == ' ' || out[j] == '\t')) ++j;
            if (j < out.size() && out[j] >= 'a' && out[j] <= 'z') {
                name_at = j;
                while (j < out.size() && is_name_char(out[j])) ++j;
                name_len = j - name_at;
                break;
            }
        }
        ++i;
    }
    if (name_at == std::string::npos) {
        // No let statement: any byte-level change still makes the point.
        if (!out.empty()) out[0] ^= 0x01;
        return out;
    }

    Bytes name(out.begin() + name_at, out.begin() + name_at + name_len);
    std::uint8_t replacement = (name[0] == 'w') ? 'v' : 'w';
    for (std::size_t k = 0; k + name_len <= out.size(); ++k) {
        bool start_ok = k == 0 || !is_name_char(out[k - 1]);
        bool end_ok =
            k + name_len == out.size() || !is_name_char(out[k + name_len]);
        if (start_ok && end_ok &&
            std::equal(name.begin(), name.end(), out.begin() + k))
            out[k] = replacement;
    }
    return out;
}

std::vector<ScenarioResult> run_attack_suite(const std::filesystem::path& dir,
                                             const GuestImage& image,
                                             ByteView source_a,
                                             ByteView source_b,
                                             std::uint32_t sample_count) {
    AttackBaseline a =
        write_baseline(dir / "a", image, source_a, sample_count);
    AttackBaseline b =
        write_baseline(dir / "b", image, source_b, sample_count);

    Receipt honest = load_receipt(a.receipt_path);
    Bytes flipped = honest.claim.output_bytes;
    if (flipped.empty())
        flipped.push_back('X');
    else
        flipped[flipped.size() / 2] ^= 0x01;

    std::vector<ScenarioResult> results;
    results.push_back({"control-honest", false, attack_control(a)});
    results.push_back(
        {"compiler-substitution", true, attack_compiler(a, 0, 1)});
    results.push_back(
        {"source-tampering", true,
         attack_source(a, rename_first_variable(read_file(a.source_path)))});
    results.push_back({"output-manipulation", true, attack_output(a, flipped)});
    results.push_back({"replay", true, attack_replay(a, b)});
    return results;
}

}  // namespace zkpc
