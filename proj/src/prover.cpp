#include "zkpc/prover.hpp"

#include <stdexcept>

namespace zkpc {

namespace {

StepOpening open_step(const CommittedTrace& trace,
                      const std::map<std::uint64_t, SparseMemoryTree::UpdateWitness>& witnesses,
                      std::uint64_t step) {
    StepOpening opening;
    opening.step_index = step;
    opening.row_before = trace.rows[step];
    opening.path_before = trace.tree.open(step).siblings;
    opening.row_after = trace.rows[step + 1];
    opening.path_after = trace.tree.open(step + 1).siblings;
    const MemOp& op = trace.memops[step];
    if (op.kind != MemOp::Kind::None) {
        const auto& w = witnesses.at(step);
        MemoryWitness mem;
        mem.kind = op.kind;
        mem.address = w.address;
        mem.old_value = w.old_value;
        mem.siblings = w.path.siblings;
        opening.memory = std::move(mem);
    }
    return opening;
}

}  // namespace

Receipt make_receipt(const GuestImage& image, ByteView input, const CommittedTrace& trace,
                     std::uint32_t sample_count) {
    if (sample_count == 0) throw std::invalid_argument("prove: sample_count must be >= 1");

    Receipt receipt;
    receipt.claim.image_id = compute_image_id(image);
    receipt.claim.input_digest = sha256(input);
    receipt.claim.output_bytes = trace.output;
    receipt.claim.exit_code = 0;
    receipt.claim.trace_len = trace.length();
    receipt.claim.trace_root = trace.root();
    receipt.sample_count = sample_count;

    // Samples exist only downstream of the fixed claim.
    std::vector<std::uint64_t> samples = derive_samples(receipt.claim, sample_count);
    std::uint64_t final_index = receipt.claim.trace_len - 2;

    std::vector<std::uint64_t> wanted = samples;
    wanted.push_back(final_index);
    auto witnesses = memory_witnesses(input, trace.memops, wanted);

    receipt.sampled.reserve(samples.size());
    for (std::uint64_t s : samples) receipt.sampled.push_back(open_step(trace, witnesses, s));
    receipt.final_opening = open_step(trace, witnesses, final_index);
    return receipt;
}

Receipt prove(const GuestImage& image, ByteView input, std::uint32_t sample_count,
              std::uint64_t max_steps) {
    if (sample_count == 0) throw std::invalid_argument("prove: sample_count must be >= 1");
    CommittedTrace trace = execute_traced(image, input, max_steps);
    return make_receipt(image, input, trace, sample_count);
}

}  // namespace zkpc
