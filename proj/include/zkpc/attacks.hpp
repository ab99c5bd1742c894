#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zkpc/image.hpp"
#include "zkpc/receipt.hpp"
#include "zkpc/verifier.hpp"

namespace zkpc {

/// Honest artifacts of one proven compilation, written to disk. Every attack
/// mutates exactly one file (or presents a mismatched pairing) and verifies
/// from what is on disk, so the receipt parser is part of each scenario.
struct AttackBaseline {
    std::filesystem::path dir;
    std::filesystem::path image_path;
    std::filesystem::path source_path;
    std::filesystem::path receipt_path;
    Digest image_id;
};

/// Proves source under image and writes image, source, and receipt into dir.
/// errors: whatever prove() raises on a source the guest rejects.
AttackBaseline write_baseline(const std::filesystem::path& dir,
                              const GuestImage& image, ByteView source,
                              std::uint32_t sample_count);

/// Verifies the on-disk artifacts unchanged: the acceptance control.
VerifyReport attack_control(const AttackBaseline& b);

/// Compiler substitution: XORs mask into one code word of the image file and
/// verifies the original receipt against the substitute's ImageID. mask = 0
/// is the identity control.
VerifyReport attack_compiler(const AttackBaseline& b, std::size_t word_index,
                             std::uint32_t mask);

/// Source tampering: presents mutated_source at verification in place of the
/// source the receipt was produced from.
VerifyReport attack_source(const AttackBaseline& b, ByteView mutated_source);

/// Output manipulation: splices mutated_output into claim.output_bytes of
/// the serialized receipt.
VerifyReport attack_output(const AttackBaseline& b, ByteView mutated_output);

/// Replay: a's receipt verified against b's source.
VerifyReport attack_replay(const AttackBaseline& a, const AttackBaseline& b);

/// Replay variant: a's receipt with b's claimed output spliced in, verified
/// against a's own source.
VerifyReport attack_output_swap(const AttackBaseline& a,
                                const AttackBaseline& b);

/// Renames every token occurrence of the first let-bound variable (first
/// letter v <-> w). The mutant is still a well-formed program; only its
/// bytes differ.
Bytes rename_first_variable(ByteView source);

struct ScenarioResult {
    std::string scenario;
    bool expected_reject = false;
    VerifyReport report;
};

/// The canonical demo set: honest control first, then one representative
/// attack per threat. source_b feeds the replay pairing.
std::vector<ScenarioResult> run_attack_suite(const std::filesystem::path& dir,
                                             const GuestImage& image,
                                             ByteView source_a,
                                             ByteView source_b,
                                             std::uint32_t sample_count);

}  // namespace zkpc
