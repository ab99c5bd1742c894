#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "zkpc/machine.hpp"
#include "zkpc/merkle.hpp"

namespace zkpc {

/// Machine state snapshot BEFORE step i. A trace of T steps has T+1 rows.
struct TraceRow {
    std::uint32_t pc = 0;
    RegisterFile regs{};
    Digest mem_root;
    Digest out_acc;
    std::uint8_t halted = 0;
    std::uint32_t exit_code = 0;

    static constexpr std::size_t kWireSize = 105;

    std::array<std::uint8_t, kWireSize> serialize() const;
    static TraceRow parse(ByteView bytes);  // throws ParseError

    bool operator==(const TraceRow&) const = default;
};

/// Thrown when a run cannot back a receipt because the guest exited nonzero.
class ReceiptRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommittedTrace {
    std::vector<TraceRow> rows;   // T+1
    std::vector<MemOp> memops;    // memops[i] belongs to step i
    Bytes output;
    MerkleTree tree;              // over serialized rows

    const Digest& root() const { return tree.root(); }
    std::uint64_t length() const { return rows.size(); }
};

/// Runs the guest to a clean halt, maintaining the sparse memory root
/// incrementally, and commits every row.
/// errors: GuestTrap on any trap (budget included); ReceiptRefused on
/// nonzero exit.
CommittedTrace execute_traced(const GuestImage& image, ByteView input,
                              std::uint64_t max_steps = kDefaultMaxSteps);

/// Replays the memop stream over a fresh memory tree to regenerate update
/// witnesses for the requested steps. Steps whose memop is kind=none are
/// absent from the result. Determinism of the replay makes the witnesses
/// identical to what the traced run saw.
std::map<std::uint64_t, SparseMemoryTree::UpdateWitness> memory_witnesses(
    ByteView input, const std::vector<MemOp>& memops,
    const std::vector<std::uint64_t>& steps);

}  // namespace zkpc
