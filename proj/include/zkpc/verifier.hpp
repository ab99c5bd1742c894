#pragma once

#include <string>

#include "zkpc/receipt.hpp"

namespace zkpc {

enum class FailureClass {
    None,
    SourceDigestMismatch,
    ImageBindingFailure,
    BoundaryViolation,
    TranscriptMismatch,
    PathFailure,
    TransitionViolation,
    OutputChainMismatch,
    MalformedReceipt,
};
const char* failure_class_name(FailureClass c);

struct VerifyReport {
    bool accepted = false;
    FailureClass failure_class = FailureClass::None;
    std::string detail;
};

/// Phase 3, sampling mode. Checks run in a fixed order: source digest, image
/// binding, transcript, boundary rows, then every opening. Within the opening
/// stage the reported class is decided by constraint class (paths before
/// transitions), not by which opening happens to trip first, so reports are
/// schedule-independent. The verifier holds the full image (exchanged at
/// handshake); it is needed for instruction fetch at sampled steps.
VerifyReport verify(const Receipt& receipt, const Digest& expected_image_id,
                    ByteView source, const GuestImage& image);

/// Oracle mode: deterministically re-executes the guest, rebuilds the
/// committed trace, and compares trace root, output bytes, and exit code
/// against the claim. `max_steps` caps re-execution independently of the
/// claimed length so a hostile claim cannot stall the verifier.
VerifyReport verify_full(const Receipt& receipt, const Digest& expected_image_id,
                         ByteView source, const GuestImage& image,
                         std::uint64_t max_steps = kDefaultMaxSteps);

/// True iff both row paths verify against trace_root and row_after is the
/// single-step successor of row_before, memory-root and out_acc updates
/// included.
bool check_transition(const StepOpening& opening, const GuestImage& image,
                      const Digest& trace_root);

}  // namespace zkpc
