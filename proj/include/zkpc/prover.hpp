#pragma once

#include "zkpc/receipt.hpp"

namespace zkpc {

/// Assembles the receipt for an already-committed trace. Fiat-Shamir order:
/// the claim (and with it trace_root) is fixed before any sample is derived.
Receipt make_receipt(const GuestImage& image, ByteView input, const CommittedTrace& trace,
                     std::uint32_t sample_count);

/// Phase 2: run the guest under tracing, commit, derive challenges, open.
/// errors: GuestTrap / ReceiptRefused from the run; std::invalid_argument
/// for sample_count = 0.
Receipt prove(const GuestImage& image, ByteView input,
              std::uint32_t sample_count = kDefaultSampleCount,
              std::uint64_t max_steps = kDefaultMaxSteps);

}  // namespace zkpc
