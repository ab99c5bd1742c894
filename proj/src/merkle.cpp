#include "zkpc/merkle.hpp"

#include <stdexcept>

namespace zkpc {

Digest hash_leaf(ByteView data) {
    thread_local Sha256 hasher;
    hasher.update_byte(kLeafTag);
    hasher.update(data);
    return hasher.finish();
}

Digest hash_node(const Digest& left, const Digest& right) {
    thread_local Sha256 hasher;
    hasher.update_byte(kNodeTag);
    hasher.update(left.view());
    hasher.update(right.view());
    return hasher.finish();
}

Digest fold_path(const Digest& leaf_digest, std::uint64_t leaf_index,
                 const std::vector<Digest>& siblings) {
    Digest h = leaf_digest;
    for (std::size_t level = 0; level < siblings.size(); ++level) {
        if ((leaf_index >> level) & 1) {
            h = hash_node(siblings[level], h);
        } else {
            h = hash_node(h, siblings[level]);
        }
    }
    return h;
}

bool verify_path(const Digest& root, std::uint64_t leaf_index, ByteView leaf_bytes,
                 const MerklePath& path) {
    if (path.leaf_index != leaf_index) return false;
    if (path.siblings.size() < 64 && leaf_index >= (std::uint64_t{1} << path.siblings.size())) {
        return false;
    }
    return fold_path(hash_leaf(leaf_bytes), leaf_index, path.siblings) == root;
}

const Digest& padding_digest(std::size_t level) {
    static const std::vector<Digest> cache = [] {
        std::vector<Digest> v;
        v.reserve(64);
        v.push_back(hash_leaf({}));
        while (v.size() < 64) v.push_back(hash_node(v.back(), v.back()));
        return v;
    }();
    return cache.at(level);
}

MerkleTree MerkleTree::build(const std::vector<Bytes>& leaves) {
    return build_from(leaves.size(),
                      [&leaves](std::size_t i) { return as_bytes(leaves[i]); });
}

MerkleTree MerkleTree::build_from(std::size_t count,
                                  const std::function<ByteView(std::size_t)>& leaf_at) {
    if (count == 0) throw std::invalid_argument("merkle: empty leaf sequence");
    MerkleTree tree;
    tree.leaf_count_ = count;
    while ((std::size_t{1} << tree.depth_) < count) ++tree.depth_;

    std::vector<Digest> level(count);
    for (std::size_t i = 0; i < count; ++i) level[i] = hash_leaf(leaf_at(i));
    tree.levels_.push_back(std::move(level));

    for (std::size_t d = 0; d < tree.depth_; ++d) {
        const auto& below = tree.levels_[d];
        std::vector<Digest> above((below.size() + 1) / 2);
        for (std::size_t j = 0; j < above.size(); ++j) {
            const Digest& left = below[2 * j];
            const Digest& right =
                (2 * j + 1 < below.size()) ? below[2 * j + 1] : padding_digest(d);
            above[j] = hash_node(left, right);
        }
        tree.levels_.push_back(std::move(above));
    }
    return tree;
}

const Digest& MerkleTree::root() const {
    if (levels_.empty()) throw std::logic_error("merkle: tree not built");
    return levels_.back()[0];
}

MerklePath MerkleTree::open(std::uint64_t index) const {
    if (levels_.empty()) throw std::logic_error("merkle: tree not built");
    if (index >= (std::uint64_t{1} << depth_)) {
        throw std::out_of_range("merkle: leaf index past padded width");
    }
    MerklePath path;
    path.leaf_index = index;
    path.siblings.reserve(depth_);
    for (std::size_t d = 0; d < depth_; ++d) {
        std::uint64_t sibling = (index >> d) ^ 1;
        const auto& level = levels_[d];
        path.siblings.push_back(sibling < level.size() ? level[sibling] : padding_digest(d));
    }
    return path;
}

namespace {

// Digests of all-zero subtrees, indexed by level. Independent of tree depth.
const std::vector<Digest>& zero_digests() {
    static const std::vector<Digest> cache = [] {
        std::vector<Digest> v;
        v.reserve(33);
        auto zero = le32(0);
        v.push_back(hash_leaf(ByteView{zero.data(), zero.size()}));
        while (v.size() < 33) v.push_back(hash_node(v.back(), v.back()));
        return v;
    }();
    return cache;
}

}  // namespace

SparseMemoryTree::SparseMemoryTree(std::size_t depth) : depth_(depth), nodes_(depth + 1) {
    if (depth == 0 || depth > 32) throw std::invalid_argument("sparse tree: bad depth");
}

SparseMemoryTree SparseMemoryTree::from_words(
    const std::map<std::uint32_t, std::uint32_t>& words, std::size_t depth) {
    SparseMemoryTree tree(depth);
    for (auto [address, value] : words) tree.store(address, value);
    return tree;
}

const Digest& SparseMemoryTree::zero_root(std::size_t depth) {
    return zero_digests().at(depth);
}

const Digest& SparseMemoryTree::node(std::size_t level, std::uint64_t index) const {
    const auto& stored = nodes_[level];
    auto it = stored.find(index);
    if (it != stored.end()) return it->second;
    return zero_digests()[level];
}

Digest SparseMemoryTree::root() const { return node(depth_, 0); }

std::uint32_t SparseMemoryTree::load(std::uint32_t address) const {
    if (address >= (std::uint64_t{1} << depth_)) {
        throw std::out_of_range("sparse tree: address past width");
    }
    auto it = words_.find(address);
    return it == words_.end() ? 0 : it->second;
}

MerklePath SparseMemoryTree::open(std::uint32_t address) const {
    if (address >= (std::uint64_t{1} << depth_)) {
        throw std::out_of_range("sparse tree: address past width");
    }
    MerklePath path;
    path.leaf_index = address;
    path.siblings.reserve(depth_);
    for (std::size_t d = 0; d < depth_; ++d) {
        path.siblings.push_back(node(d, (address >> d) ^ 1));
    }
    return path;
}

SparseMemoryTree::UpdateWitness SparseMemoryTree::store(std::uint32_t address,
                                                        std::uint32_t value) {
    UpdateWitness witness;
    witness.address = address;
    witness.old_value = load(address);
    witness.path = open(address);

    words_[address] = value;
    Digest h = hash_leaf(ByteView{le32(value).data(), 4});
    nodes_[0][address] = h;
    std::uint64_t index = address;
    for (std::size_t d = 0; d < depth_; ++d) {
        const Digest& sib = witness.path.siblings[d];
        h = (index & 1) ? hash_node(sib, h) : hash_node(h, sib);
        index >>= 1;
        nodes_[d + 1][index] = h;
    }
    return witness;
}

}  // namespace zkpc
