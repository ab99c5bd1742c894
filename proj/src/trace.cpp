#include "zkpc/trace.hpp"

#include <algorithm>
#include <set>

#include "zkpc/errors.hpp"
#include "zkpc/transcript.hpp"

namespace zkpc {

std::array<std::uint8_t, TraceRow::kWireSize> TraceRow::serialize() const {
    std::array<std::uint8_t, kWireSize> out;
    std::size_t at = 0;
    auto put32 = [&](std::uint32_t v) {
        auto b = le32(v);
        std::copy(b.begin(), b.end(), out.begin() + at);
        at += 4;
    };
    put32(pc);
    for (std::uint32_t r : regs) put32(r);
    std::copy(mem_root.bytes.begin(), mem_root.bytes.end(), out.begin() + at);
    at += 32;
    std::copy(out_acc.bytes.begin(), out_acc.bytes.end(), out.begin() + at);
    at += 32;
    out[at++] = halted;
    put32(exit_code);
    return out;
}

TraceRow TraceRow::parse(ByteView bytes) {
    if (bytes.size() != kWireSize) throw ParseError("trace row", "expected 105 bytes");
    TraceRow row;
    row.pc = get_u32(bytes, 0);
    for (int i = 0; i < 8; ++i) row.regs[i] = get_u32(bytes, 4 + 4 * std::size_t(i));
    std::copy_n(bytes.begin() + 36, 32, row.mem_root.bytes.begin());
    std::copy_n(bytes.begin() + 68, 32, row.out_acc.bytes.begin());
    row.halted = bytes[100];
    if (row.halted > 1) throw ParseError("trace row", "halted flag not 0 or 1");
    row.exit_code = get_u32(bytes, 101);
    return row;
}

namespace {

TraceRow snapshot(const StepCore& core, const Digest& mem_root) {
    TraceRow row;
    row.pc = core.pc;
    row.regs = core.regs;
    row.mem_root = mem_root;
    row.out_acc = core.out_acc;
    row.halted = core.halted ? 1 : 0;
    row.exit_code = core.exit_code;
    return row;
}

}  // namespace

CommittedTrace execute_traced(const GuestImage& image, ByteView input,
                              std::uint64_t max_steps) {
    SparseMemoryTree memory = SparseMemoryTree::from_words(init_memory(input), kMemoryDepth);
    StepCore core;
    core.pc = image.entry_pc;
    core.out_acc = chain_init();

    CommittedTrace trace;
    trace.rows.push_back(snapshot(core, memory.root()));
    while (!core.halted) {
        if (trace.memops.size() >= max_steps) throw GuestTrap(TrapReason::StepBudgetExhausted);
        StepResult r = step_core(core, image,
                                 [&memory](std::uint32_t address) { return memory.load(address); });
        if (r.trap) throw GuestTrap(*r.trap);
        if (r.memop.kind == MemOp::Kind::Store) {
            memory.store(r.memop.address, r.memop.new_value);
        }
        if (r.output_byte) trace.output.push_back(*r.output_byte);
        trace.memops.push_back(r.memop);
        trace.rows.push_back(snapshot(core, memory.root()));
    }
    if (core.exit_code != 0) {
        throw ReceiptRefused("guest exited with code " + std::to_string(core.exit_code) +
                             "; no receipt for failed runs");
    }

    std::array<std::uint8_t, TraceRow::kWireSize> buffer;
    trace.tree = MerkleTree::build_from(trace.rows.size(), [&](std::size_t i) {
        buffer = trace.rows[i].serialize();
        return ByteView{buffer.data(), buffer.size()};
    });
    return trace;
}

std::map<std::uint64_t, SparseMemoryTree::UpdateWitness> memory_witnesses(
    ByteView input, const std::vector<MemOp>& memops,
    const std::vector<std::uint64_t>& steps) {
    std::set<std::uint64_t> wanted(steps.begin(), steps.end());
    std::map<std::uint64_t, SparseMemoryTree::UpdateWitness> result;
    SparseMemoryTree memory = SparseMemoryTree::from_words(init_memory(input), kMemoryDepth);
    for (std::uint64_t s = 0; s < memops.size(); ++s) {
        const MemOp& op = memops[s];
        if (op.kind == MemOp::Kind::None) continue;
        bool want = wanted.count(s) > 0;
        if (op.kind == MemOp::Kind::Load) {
            if (want) {
                SparseMemoryTree::UpdateWitness w;
                w.address = op.address;
                w.old_value = memory.load(op.address);
                w.path = memory.open(op.address);
                result.emplace(s, std::move(w));
            }
        } else {
            auto w = memory.store(op.address, op.new_value);
            if (want) result.emplace(s, std::move(w));
        }
    }
    return result;
}

}  // namespace zkpc
