#include "zkpc/transcript.hpp"

#include <stdexcept>

namespace zkpc {

Digest chain_init() {
    static const Digest init = sha256(as_bytes("ZKPC.out.init"));
    return init;
}

Digest chain_extend(const Digest& acc, std::uint8_t byte) {
    thread_local Sha256 hasher;
    hasher.update_byte(kChainTag);
    hasher.update(acc.view());
    hasher.update_byte(byte);
    return hasher.finish();
}

Digest chain_over(ByteView bytes) {
    Digest acc = chain_init();
    for (std::uint8_t b : bytes) acc = chain_extend(acc, b);
    return acc;
}

Digest sample_seed(const Digest& image_id, const Digest& input_digest,
                   const Digest& output_chain, const Digest& trace_root,
                   std::uint64_t trace_len, std::uint32_t sample_count) {
    Sha256 hasher;
    hasher.update_byte(kTranscriptTag);
    hasher.update(image_id.view());
    hasher.update(input_digest.view());
    hasher.update(output_chain.view());
    hasher.update(trace_root.view());
    hasher.update_u64(trace_len);
    hasher.update_u32(sample_count);
    return hasher.finish();
}

std::vector<std::uint64_t> derive_samples(const Digest& seed, std::uint64_t trace_len,
                                          std::uint32_t sample_count) {
    if (trace_len < 2) throw std::invalid_argument("derive_samples: trace too short");
    if (sample_count == 0) throw std::invalid_argument("derive_samples: zero samples");
    std::vector<std::uint64_t> indices;
    indices.reserve(sample_count);
    Sha256 hasher;
    for (std::uint32_t j = 0; j < sample_count; ++j) {
        hasher.update(seed.view());
        hasher.update_u32(j);
        Digest block = hasher.finish();
        std::uint64_t raw = get_u64(block.view(), 0);
        indices.push_back(raw % (trace_len - 1));
    }
    return indices;
}

}  // namespace zkpc
