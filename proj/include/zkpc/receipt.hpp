#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "zkpc/trace.hpp"
#include "zkpc/transcript.hpp"

namespace zkpc {

inline constexpr std::uint16_t kReceiptFormatVersion = 1;
inline constexpr std::uint32_t kDefaultSampleCount = 64;

/// Everything the prover asserts about one run: compiler identity, source
/// digest, the full output, and the trace commitment.
struct ReceiptClaim {
    Digest image_id;
    Digest input_digest;
    Bytes output_bytes;
    std::uint32_t exit_code = 0;  // always 0 in receipts this artifact emits
    std::uint64_t trace_len = 0;  // row count, >= 2
    Digest trace_root;

    bool operator==(const ReceiptClaim&) const = default;
};

Digest claim_seed(const ReceiptClaim& claim, std::uint32_t sample_count);
std::vector<std::uint64_t> derive_samples(const ReceiptClaim& claim,
                                          std::uint32_t sample_count);

/// Authentication of the one memory access inside a step: the old leaf under
/// row_before.mem_root; for stores, the same siblings also pin the new root.
struct MemoryWitness {
    MemOp::Kind kind = MemOp::Kind::Load;  // never None when present
    std::uint32_t address = 0;
    std::uint32_t old_value = 0;
    std::vector<Digest> siblings;  // kMemoryDepth entries

    bool operator==(const MemoryWitness&) const = default;
};

struct StepOpening {
    std::uint64_t step_index = 0;
    TraceRow row_before;                // row step_index, the state stepped FROM
    std::vector<Digest> path_before;
    TraceRow row_after;                 // row step_index + 1
    std::vector<Digest> path_after;
    std::optional<MemoryWitness> memory;  // present iff the instruction is LW/SW

    bool operator==(const StepOpening&) const = default;
};

struct Receipt {
    ReceiptClaim claim;
    std::uint32_t sample_count = 0;
    std::vector<StepOpening> sampled;  // in derivation order, one per sample
    StepOpening final_opening;         // mandatory, step_index = trace_len - 2

    bool operator==(const Receipt&) const = default;
};

/// Wire format (little-endian): magic "ZKPC", version u16, claim fields,
/// sample count, output, then sample_count + 1 opening records, the final
/// opening last.
Bytes serialize_receipt(const Receipt& receipt);

/// Validates magic, version, and every length field before use; throws
/// ParseError naming the section that failed.
Receipt deserialize_receipt(ByteView data);

void save_receipt(const Receipt& receipt, const std::filesystem::path& path);
Receipt load_receipt(const std::filesystem::path& path);

}  // namespace zkpc
