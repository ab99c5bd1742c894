#pragma once

#include <cstdint>
#include <vector>

#include "zkpc/digest.hpp"

namespace zkpc {

inline constexpr std::uint8_t kChainTag = 0x02;
inline constexpr std::uint8_t kTranscriptTag = 0x04;

/// Output commitment: a byte-at-a-time hash chain. The init value is a fixed
/// tagged constant so an empty output is still a binding commitment.
Digest chain_init();
Digest chain_extend(const Digest& acc, std::uint8_t byte);
Digest chain_over(ByteView bytes);

/// Deterministic challenge seed binding every claim field the prover has
/// already fixed. Samples may only be derived after all inputs are final.
Digest sample_seed(const Digest& image_id, const Digest& input_digest,
                   const Digest& output_chain, const Digest& trace_root,
                   std::uint64_t trace_len, std::uint32_t sample_count);

/// `sample_count` step indices in [0, trace_len-1), duplicates allowed,
/// in derivation order. pre: trace_len >= 2, sample_count >= 1.
std::vector<std::uint64_t> derive_samples(const Digest& seed, std::uint64_t trace_len,
                                          std::uint32_t sample_count);

}  // namespace zkpc
