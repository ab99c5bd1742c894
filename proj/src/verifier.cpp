#include "zkpc/verifier.hpp"

#include <optional>

namespace zkpc {

namespace {

VerifyReport reject(FailureClass cls, std::string detail) {
    return {false, cls, std::move(detail)};
}

enum class Problem { None, Path, Transition };

struct OpeningCheck {
    Problem problem = Problem::None;
    std::string detail;
};

OpeningCheck check_opening(const StepOpening& o, const GuestImage& image,
                           const Digest& trace_root) {
    std::string at = "step " + std::to_string(o.step_index) + ": ";
    auto path_fail = [&](const char* what) { return OpeningCheck{Problem::Path, at + what}; };
    auto bad = [&](std::string what) {
        return OpeningCheck{Problem::Transition, at + std::move(what)};
    };

    if (o.memory && o.memory->siblings.size() != kMemoryDepth) {
        return path_fail("memory witness has the wrong depth");
    }
    auto before_bytes = o.row_before.serialize();
    if (!verify_path(trace_root, o.step_index,
                     ByteView{before_bytes.data(), before_bytes.size()},
                     MerklePath{o.step_index, o.path_before})) {
        return path_fail("row path does not reach the trace root");
    }
    auto after_bytes = o.row_after.serialize();
    if (!verify_path(trace_root, o.step_index + 1,
                     ByteView{after_bytes.data(), after_bytes.size()},
                     MerklePath{o.step_index + 1, o.path_after})) {
        return path_fail("successor row path does not reach the trace root");
    }
    if (o.memory) {
        auto leaf = le32(o.memory->old_value);
        if (!verify_path(o.row_before.mem_root, o.memory->address,
                         ByteView{leaf.data(), leaf.size()},
                         MerklePath{o.memory->address, o.memory->siblings})) {
            return path_fail("memory witness does not reach the row's memory root");
        }
    }

    if (o.row_before.halted != 0) return bad("halted row has a successor");
    // Honest rows always carry zero in register 0; the machine discards writes.
    if (o.row_before.regs[0] != 0 || o.row_after.regs[0] != 0) {
        return bad("register 0 is nonzero");
    }

    StepCore core;
    core.pc = o.row_before.pc;
    core.regs = o.row_before.regs;
    core.out_acc = o.row_before.out_acc;
    core.exit_code = o.row_before.exit_code;
    StepResult r = step_core(core, image, [&o](std::uint32_t) {
        return o.memory ? o.memory->old_value : 0u;
    });
    if (r.trap) return bad(std::string("successor would trap: ") + trap_name(*r.trap));

    const MemOp& op = r.memop;
    if (op.kind == MemOp::Kind::None) {
        if (o.memory) return bad("memory witness for a non-memory instruction");
        if (o.row_after.mem_root != o.row_before.mem_root) {
            return bad("memory root changed without a store");
        }
    } else {
        if (!o.memory) return bad("missing memory witness");
        if (o.memory->kind != op.kind) return bad("memory witness kind mismatch");
        if (o.memory->address != op.address) return bad("memory witness address mismatch");
        if (op.kind == MemOp::Kind::Load) {
            if (o.row_after.mem_root != o.row_before.mem_root) {
                return bad("memory root changed on a load");
            }
        } else {
            auto leaf = le32(op.new_value);
            Digest updated = fold_path(hash_leaf(ByteView{leaf.data(), leaf.size()}),
                                       op.address, o.memory->siblings);
            if (updated != o.row_after.mem_root) return bad("memory root update mismatch");
        }
    }

    if (core.pc != o.row_after.pc) return bad("pc mismatch");
    if (core.regs != o.row_after.regs) return bad("register state mismatch");
    if (core.out_acc != o.row_after.out_acc) return bad("output accumulator mismatch");
    if ((core.halted ? 1 : 0) != o.row_after.halted) return bad("halted flag mismatch");
    if (core.exit_code != o.row_after.exit_code) return bad("exit code mismatch");
    return {};
}

std::optional<std::string> structural_issue(const StepOpening& o, const ReceiptClaim& claim,
                                            const std::string& label) {
    if (o.step_index + 1 >= claim.trace_len) return label + ": step index out of range";
    if (o.memory && o.memory->siblings.size() != kMemoryDepth) {
        return label + ": memory witness depth";
    }
    return std::nullopt;
}

}  // namespace

const char* failure_class_name(FailureClass c) {
    switch (c) {
        case FailureClass::None: return "none";
        case FailureClass::SourceDigestMismatch: return "SourceDigestMismatch";
        case FailureClass::ImageBindingFailure: return "ImageBindingFailure";
        case FailureClass::BoundaryViolation: return "BoundaryViolation";
        case FailureClass::TranscriptMismatch: return "TranscriptMismatch";
        case FailureClass::PathFailure: return "PathFailure";
        case FailureClass::TransitionViolation: return "TransitionViolation";
        case FailureClass::OutputChainMismatch: return "OutputChainMismatch";
        case FailureClass::MalformedReceipt: return "MalformedReceipt";
    }
    return "none";
}

bool check_transition(const StepOpening& opening, const GuestImage& image,
                      const Digest& trace_root) {
    return check_opening(opening, image, trace_root).problem == Problem::None;
}

VerifyReport verify(const Receipt& receipt, const Digest& expected_image_id,
                    ByteView source, const GuestImage& image) {
    const ReceiptClaim& claim = receipt.claim;

    // Structural sanity. File parsing already enforces this; receipts built
    // in memory get the same treatment.
    if (claim.trace_len < 2) {
        return reject(FailureClass::MalformedReceipt, "trace length below 2");
    }
    if (receipt.sample_count == 0) {
        return reject(FailureClass::MalformedReceipt, "zero sample count");
    }
    if (receipt.sampled.size() != receipt.sample_count) {
        return reject(FailureClass::MalformedReceipt,
                      "opening count does not match sample count");
    }
    for (std::size_t j = 0; j < receipt.sampled.size(); ++j) {
        if (auto issue = structural_issue(receipt.sampled[j], claim,
                                          "opening " + std::to_string(j))) {
            return reject(FailureClass::MalformedReceipt, *issue);
        }
    }
    if (auto issue = structural_issue(receipt.final_opening, claim, "final opening")) {
        return reject(FailureClass::MalformedReceipt, *issue);
    }

    // (1) source binding
    if (sha256(source) != claim.input_digest) {
        return reject(FailureClass::SourceDigestMismatch,
                      "source digest does not match the claim");
    }
    // (2) image binding
    if (claim.image_id != expected_image_id) {
        return reject(FailureClass::ImageBindingFailure,
                      "claim image id does not match the agreed identity");
    }
    // (3) transcript
    std::vector<std::uint64_t> samples = derive_samples(claim, receipt.sample_count);
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (receipt.sampled[j].step_index != samples[j]) {
            return reject(FailureClass::TranscriptMismatch,
                          "opening " + std::to_string(j) +
                              " diverges from the derived sample index");
        }
    }
    // (4) boundary
    if (receipt.final_opening.step_index != claim.trace_len - 2) {
        return reject(FailureClass::BoundaryViolation,
                      "final opening is not at index trace_len - 2");
    }
    TraceRow expected_first;
    expected_first.pc = image.entry_pc;
    expected_first.out_acc = chain_init();
    try {
        expected_first.mem_root =
            SparseMemoryTree::from_words(init_memory(source), kMemoryDepth).root();
    } catch (const std::invalid_argument&) {
        return reject(FailureClass::BoundaryViolation, "source exceeds input capacity");
    }
    auto check_first = [&](const StepOpening& o) {
        return o.step_index != 0 || o.row_before == expected_first;
    };
    for (const StepOpening& o : receipt.sampled) {
        if (!check_first(o)) {
            return reject(FailureClass::BoundaryViolation,
                          "row 0 does not match the rebuilt initial state");
        }
    }
    if (!check_first(receipt.final_opening)) {
        return reject(FailureClass::BoundaryViolation,
                      "row 0 does not match the rebuilt initial state");
    }
    const TraceRow& last = receipt.final_opening.row_after;
    if (last.halted != 1) {
        return reject(FailureClass::BoundaryViolation, "final row is not halted");
    }
    if (claim.exit_code != 0 || last.exit_code != claim.exit_code) {
        return reject(FailureClass::BoundaryViolation, "exit code is not a clean zero");
    }
    if (last.out_acc != chain_over(as_bytes(claim.output_bytes))) {
        return reject(FailureClass::OutputChainMismatch,
                      "final output accumulator does not match the claimed output");
    }
    // (5) per-opening checks, class precedence over discovery order
    std::optional<std::string> path_issue;
    std::optional<std::string> transition_issue;
    auto consider = [&](const StepOpening& o) {
        OpeningCheck c = check_opening(o, image, claim.trace_root);
        if (c.problem == Problem::Path && !path_issue) path_issue = c.detail;
        if (c.problem == Problem::Transition && !transition_issue) transition_issue = c.detail;
    };
    for (const StepOpening& o : receipt.sampled) consider(o);
    consider(receipt.final_opening);
    if (path_issue) return reject(FailureClass::PathFailure, *path_issue);
    if (transition_issue) return reject(FailureClass::TransitionViolation, *transition_issue);
    return {true, FailureClass::None, "ok"};
}

VerifyReport verify_full(const Receipt& receipt, const Digest& expected_image_id,
                         ByteView source, const GuestImage& image,
                         std::uint64_t max_steps) {
    const ReceiptClaim& claim = receipt.claim;
    if (claim.trace_len < 2) {
        return reject(FailureClass::MalformedReceipt, "trace length below 2");
    }
    if (sha256(source) != claim.input_digest) {
        return reject(FailureClass::SourceDigestMismatch,
                      "source digest does not match the claim");
    }
    if (claim.image_id != expected_image_id) {
        return reject(FailureClass::ImageBindingFailure,
                      "claim image id does not match the agreed identity");
    }

    CommittedTrace trace;
    try {
        trace = execute_traced(image, source, std::min(claim.trace_len - 1, max_steps));
    } catch (const GuestTrap& t) {
        if (t.reason() == TrapReason::StepBudgetExhausted) {
            return reject(FailureClass::TransitionViolation,
                          "re-execution does not halt within the allowed steps");
        }
        return reject(FailureClass::TransitionViolation,
                      std::string("re-execution trapped: ") + trap_name(t.reason()));
    } catch (const ReceiptRefused&) {
        return reject(FailureClass::BoundaryViolation,
                      "re-execution exits nonzero, claim says zero");
    } catch (const std::invalid_argument&) {
        return reject(FailureClass::BoundaryViolation, "source exceeds input capacity");
    }

    if (trace.length() != claim.trace_len || trace.root() != claim.trace_root) {
        return reject(FailureClass::TransitionViolation,
                      "recomputed trace does not match the committed root");
    }
    if (trace.output != claim.output_bytes) {
        return reject(FailureClass::OutputChainMismatch,
                      "recomputed output differs from the claim");
    }
    if (claim.exit_code != 0) {
        return reject(FailureClass::BoundaryViolation, "claimed exit code nonzero");
    }
    return {true, FailureClass::None, "ok"};
}

}  // namespace zkpc
