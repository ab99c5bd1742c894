#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "zkpc/digest.hpp"

namespace zkpc {

// Domain-separation prefixes. Keeping leaf and node hashing disjoint makes
// second-preimage splices between levels impossible.
inline constexpr std::uint8_t kLeafTag = 0x00;
inline constexpr std::uint8_t kNodeTag = 0x01;

Digest hash_leaf(ByteView data);
Digest hash_node(const Digest& left, const Digest& right);

/// Sibling digests from leaf level to the root, plus the leaf position.
struct MerklePath {
    std::uint64_t leaf_index = 0;
    std::vector<Digest> siblings;

    bool operator==(const MerklePath&) const = default;
};

/// Recomputes the root implied by `leaf_bytes` at `path.leaf_index`.
bool verify_path(const Digest& root, std::uint64_t leaf_index, ByteView leaf_bytes,
                 const MerklePath& path);
Digest fold_path(const Digest& leaf_digest, std::uint64_t leaf_index,
                 const std::vector<Digest>& siblings);

/// Padding digest for level `d`: level 0 is hash_leaf of the empty string,
/// each level above hashes two copies of the one below.
const Digest& padding_digest(std::size_t level);

/// Dense Merkle tree over a fixed leaf sequence, padded to the next power of
/// two with padding_digest(0). Padded subtrees are never materialized.
class MerkleTree {
public:
    MerkleTree() = default;

    static MerkleTree build(const std::vector<Bytes>& leaves);
    /// Builds from `count` leaves fetched on demand; avoids copying large rows.
    static MerkleTree build_from(std::size_t count,
                                 const std::function<ByteView(std::size_t)>& leaf_at);

    const Digest& root() const;
    std::size_t leaf_count() const { return leaf_count_; }
    std::size_t depth() const { return depth_; }

    /// pre: index < 2^depth. Indices past leaf_count open padding leaves.
    MerklePath open(std::uint64_t index) const;

private:
    // levels_[0] holds the real leaf digests; each level halves, always
    // rounding up, so padded siblings stay virtual.
    std::vector<std::vector<Digest>> levels_;
    std::size_t leaf_count_ = 0;
    std::size_t depth_ = 0;
};

/// Fixed-depth Merkle tree over 2^depth little-endian 32-bit words, all
/// initially zero. Only touched nodes are stored; untouched subtrees use
/// precomputed all-zero digests.
class SparseMemoryTree {
public:
    explicit SparseMemoryTree(std::size_t depth = 16);

    static SparseMemoryTree from_words(const std::map<std::uint32_t, std::uint32_t>& words,
                                       std::size_t depth = 16);

    /// Root of the all-zero tree at the given depth.
    static const Digest& zero_root(std::size_t depth);

    Digest root() const;
    std::size_t depth() const { return depth_; }

    /// pre: address < 2^depth
    std::uint32_t load(std::uint32_t address) const;
    MerklePath open(std::uint32_t address) const;

    struct UpdateWitness {
        std::uint32_t address = 0;
        std::uint32_t old_value = 0;
        MerklePath path;  // siblings are identical before and after the update
    };

    /// Writes `value` at `address` and returns the authentication data for
    /// the old leaf. pre: address < 2^depth
    UpdateWitness store(std::uint32_t address, std::uint32_t value);

private:
    const Digest& node(std::size_t level, std::uint64_t index) const;

    std::size_t depth_;
    std::unordered_map<std::uint32_t, std::uint32_t> words_;
    // nodes_[level] maps node index to digest; level 0 is the leaf level.
    std::vector<std::unordered_map<std::uint64_t, Digest>> nodes_;
};

}  // namespace zkpc
