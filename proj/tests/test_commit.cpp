#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "zkpc/merkle.hpp"
#include "zkpc/transcript.hpp"

using namespace zkpc;

namespace {

Digest filled(std::uint8_t b) {
    Digest d;
    d.bytes.fill(b);
    return d;
}

Bytes byte_range(int n) {
    Bytes out;
    for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(i));
    return out;
}

}  // namespace

TEST_CASE("digest hex round-trip") {
    Digest d = sha256(as_bytes("abc"));
    CHECK(d.hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    auto back = Digest::from_hex(d.hex());
    REQUIRE(back.has_value());
    CHECK(*back == d);
    CHECK(!Digest::from_hex("abc").has_value());
    CHECK(!Digest::from_hex(std::string(64, 'g')).has_value());
}

TEST_CASE("leaf and node hashing match reference vectors") {
    CHECK(hash_leaf({}).hex() ==
          "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
    CHECK(hash_leaf(as_bytes("abc")).hex() ==
          "609f6e36d2405585188d5cfd761f407c7cc46a7d3f314c88270469dde315fcd1");
    // The leaf tag keeps leaf hashing disjoint from plain SHA-256.
    CHECK(hash_leaf(as_bytes("abc")) != sha256(as_bytes("abc")));

    Digest a = filled(0xAA), b = filled(0xBB);
    CHECK(hash_node(a, b).hex() ==
          "2f65cc0c7abfdb0c535cb7f942d65ae1fb04c9a3ad3ea5a62057aa8ac934a93a");
    CHECK(hash_node(b, a).hex() ==
          "07000873de6f4c3f9974389888a3d905ba904d711335a49631373c3558a970db");
    CHECK(hash_node(a, b) != hash_node(b, a));
    CHECK(padding_digest(0) == hash_leaf({}));
    CHECK(padding_digest(3) ==
          hash_node(padding_digest(2), padding_digest(2)));
}

TEST_CASE("single-leaf tree") {
    MerkleTree t = MerkleTree::build({Bytes{'x'}});
    CHECK(t.depth() == 0);
    CHECK(t.root() == hash_leaf(as_bytes("x")));
    MerklePath p = t.open(0);
    CHECK(p.siblings.empty());
    CHECK(verify_path(t.root(), 0, as_bytes("x"), p));
    CHECK_THROWS_AS(t.open(1), std::out_of_range);
}

TEST_CASE("three-leaf tree pads with the empty-leaf digest") {
    std::vector<Bytes> leaves = {Bytes{'a'}, Bytes{'b'}, Bytes{'c'}};
    MerkleTree t = MerkleTree::build(leaves);
    CHECK(t.depth() == 2);
    Digest l0 = hash_leaf(as_bytes("a"));
    Digest l1 = hash_leaf(as_bytes("b"));
    Digest l2 = hash_leaf(as_bytes("c"));
    Digest expect = hash_node(hash_node(l0, l1), hash_node(l2, padding_digest(0)));
    CHECK(t.root() == expect);

    // Index 3 is a padding position; it opens to the empty leaf.
    MerklePath pad = t.open(3);
    CHECK(verify_path(t.root(), 3, {}, pad));
    CHECK_THROWS_AS(t.open(4), std::out_of_range);

    // Explicit empty trailing leaves commit to the same root as padding.
    MerkleTree padded = MerkleTree::build({Bytes{'a'}, Bytes{'b'}, Bytes{'c'}, Bytes{}});
    CHECK(padded.root() == t.root());
}

TEST_CASE("path verification catches every tampered component") {
    std::vector<Bytes> leaves;
    for (int i = 0; i < 11; ++i) leaves.push_back(byte_range(i + 1));
    MerkleTree t = MerkleTree::build(leaves);
    CHECK(t.leaf_count() == 11);
    CHECK(t.depth() == 4);

    for (std::uint64_t i = 0; i < 11; ++i) {
        CHECK(verify_path(t.root(), i, as_bytes(leaves[i]), t.open(i)));
    }

    MerklePath p = t.open(5);
    CHECK(!verify_path(t.root(), 5, as_bytes(leaves[6]), p));   // wrong leaf bytes
    CHECK(!verify_path(t.root(), 6, as_bytes(leaves[5]), p));   // index mismatch
    MerklePath wrong_pos = p;
    wrong_pos.leaf_index = 6;
    CHECK(!verify_path(t.root(), 6, as_bytes(leaves[5]), wrong_pos));  // moved leaf
    MerklePath bad_sib = p;
    bad_sib.siblings[2].bytes[0] ^= 1;
    CHECK(!verify_path(t.root(), 5, as_bytes(leaves[5]), bad_sib));
    MerklePath truncated = p;
    truncated.siblings.pop_back();
    CHECK(!verify_path(t.root(), 5, as_bytes(leaves[5]), truncated));
    Digest other_root = t.root();
    other_root.bytes[31] ^= 1;
    CHECK(!verify_path(other_root, 5, as_bytes(leaves[5]), p));
}

TEST_CASE("build_from matches build") {
    std::vector<Bytes> leaves;
    for (int i = 0; i < 37; ++i) leaves.push_back(byte_range(i % 9));
    MerkleTree a = MerkleTree::build(leaves);
    MerkleTree b = MerkleTree::build_from(
        leaves.size(), [&](std::size_t i) { return as_bytes(leaves[i]); });
    CHECK(a.root() == b.root());
    CHECK_THROWS_AS(MerkleTree::build({}), std::invalid_argument);
}

TEST_CASE("sparse memory tree zero roots") {
    CHECK(SparseMemoryTree::zero_root(8).hex() ==
          "c5f43a8da79a7ad32bcb1d11dea3bbf47b742c151c21fc4d78e133516d9cfe8f");
    CHECK(SparseMemoryTree::zero_root(16).hex() ==
          "5350bf0c06787f1977cb398befdd025d9facb63ffa7a6fde9d9ba316e8c9ef8c");
    SparseMemoryTree t(16);
    CHECK(t.root() == SparseMemoryTree::zero_root(16));
    CHECK(t.load(0xFFFF) == 0);
}

TEST_CASE("sparse store is position sensitive") {
    SparseMemoryTree a(16);
    a.store(0, 1);
    CHECK(a.root().hex() ==
          "5dfcfecfa2318beda8229a2ef21e06811e2e8dde170f81dc6e31ba6ba9f9abe3");
    SparseMemoryTree b(16);
    b.store(1, 1);
    CHECK(b.root().hex() ==
          "bd8cda920defea20bd7a8265ca268d9c49a06f30b5206d6d89c09147063cd0ab");
    CHECK(a.root() != b.root());

    // Storing an explicit zero leaves the root at the all-zero value.
    SparseMemoryTree c(16);
    c.store(7, 0);
    CHECK(c.root() == SparseMemoryTree::zero_root(16));
}

TEST_CASE("sparse update witnesses authenticate old and new leaf") {
    SparseMemoryTree t(16);
    t.store(100, 42);
    Digest before = t.root();
    auto w = t.store(100, 43);
    CHECK(w.address == 100);
    CHECK(w.old_value == 42);
    CHECK(w.path.siblings.size() == 16);
    auto old_leaf = le32(w.old_value);
    CHECK(verify_path(before, 100, ByteView{old_leaf.data(), 4}, w.path));
    auto new_leaf = le32(43);
    CHECK(fold_path(hash_leaf(ByteView{new_leaf.data(), 4}), 100, w.path.siblings) ==
          t.root());
    CHECK(t.load(100) == 43);
    CHECK_THROWS_AS(SparseMemoryTree(8).load(256), std::out_of_range);
    CHECK_THROWS_AS(SparseMemoryTree(8).store(256, 1), std::out_of_range);
}

TEST_CASE("sparse root equals dense root over materialized words") {
    std::mt19937_64 rng(7);
    SparseMemoryTree sparse(8);
    std::map<std::uint32_t, std::uint32_t> shadow;
    for (int i = 0; i < 1000; ++i) {
        auto addr = static_cast<std::uint32_t>(rng() % 256);
        auto value = static_cast<std::uint32_t>(rng());
        sparse.store(addr, value);
        shadow[addr] = value;
        REQUIRE(sparse.load(addr) == value);
    }
    for (auto [addr, value] : shadow) CHECK(sparse.load(addr) == value);

    // Insertion order must not matter.
    CHECK(SparseMemoryTree::from_words(shadow, 8).root() == sparse.root());

    // A dense tree over all 256 words (zeros included) commits identically.
    std::vector<Bytes> leaves(256);
    for (std::uint32_t a = 0; a < 256; ++a) {
        auto word = le32(shadow.count(a) ? shadow[a] : 0);
        leaves[a] = Bytes(word.begin(), word.end());
    }
    CHECK(MerkleTree::build(leaves).root() == sparse.root());
}

TEST_CASE("output chain matches reference vectors") {
    CHECK(chain_init().hex() ==
          "b845bf585c03e9adbe15eaa99bf913946f86a558d17baf33c7b1b32cf1e88ab1");
    CHECK(chain_over({}) == chain_init());
    CHECK(chain_over(as_bytes(byte_range(100))).hex() ==
          "992806cb9b4b3516c0a9aed74020c913d6349262fe2a60f10d05beddd3854b95");
    CHECK(chain_over(as_bytes("ab")).hex() ==
          "3ea671ae7291fd1fc8418aee0b355a135a971e7e5b04dbe04adca61748498c69");
    CHECK(chain_extend(chain_extend(chain_init(), 'a'), 'b') == chain_over(as_bytes("ab")));
    CHECK(chain_over(as_bytes("ab")) != chain_over(as_bytes("ba")));
    CHECK(chain_over(as_bytes("a")) != chain_over(as_bytes("ab")));
}

TEST_CASE("chain values are injective over messages up to three bytes") {
    // 1 + 256 + 65536 + 16777216 chains in total; 64-bit digest prefixes are
    // compared first and any prefix collision is rechecked at full width.
    std::vector<std::uint64_t> prefixes;
    prefixes.reserve(16843009);
    auto prefix_of = [](const Digest& d) { return get_u64(d.view(), 0); };
    Digest init = chain_init();
    prefixes.push_back(prefix_of(init));
    for (int b0 = 0; b0 < 256; ++b0) {
        Digest acc1 = chain_extend(init, static_cast<std::uint8_t>(b0));
        prefixes.push_back(prefix_of(acc1));
        for (int b1 = 0; b1 < 256; ++b1) {
            Digest acc2 = chain_extend(acc1, static_cast<std::uint8_t>(b1));
            prefixes.push_back(prefix_of(acc2));
            for (int b2 = 0; b2 < 256; ++b2) {
                prefixes.push_back(
                    prefix_of(chain_extend(acc2, static_cast<std::uint8_t>(b2))));
            }
        }
    }
    REQUIRE(prefixes.size() == 16843009);
    std::sort(prefixes.begin(), prefixes.end());
    std::vector<std::uint64_t> dup_prefixes;
    for (std::size_t i = 1; i < prefixes.size(); ++i) {
        if (prefixes[i] == prefixes[i - 1]) dup_prefixes.push_back(prefixes[i]);
    }
    if (!dup_prefixes.empty()) {
        // Re-enumerate and compare full digests for the colliding prefixes.
        std::sort(dup_prefixes.begin(), dup_prefixes.end());
        dup_prefixes.erase(std::unique(dup_prefixes.begin(), dup_prefixes.end()),
                           dup_prefixes.end());
        std::vector<Digest> suspects;
        auto consider = [&](const Digest& d) {
            if (std::binary_search(dup_prefixes.begin(), dup_prefixes.end(),
                                   get_u64(d.view(), 0))) {
                suspects.push_back(d);
            }
        };
        consider(init);
        for (int b0 = 0; b0 < 256; ++b0) {
            Digest acc1 = chain_extend(init, static_cast<std::uint8_t>(b0));
            consider(acc1);
            for (int b1 = 0; b1 < 256; ++b1) {
                Digest acc2 = chain_extend(acc1, static_cast<std::uint8_t>(b1));
                consider(acc2);
                for (int b2 = 0; b2 < 256; ++b2) {
                    consider(chain_extend(acc2, static_cast<std::uint8_t>(b2)));
                }
            }
        }
        std::sort(suspects.begin(), suspects.end());
        bool full_collision = false;
        for (std::size_t i = 1; i < suspects.size(); ++i) {
            if (suspects[i] == suspects[i - 1]) full_collision = true;
        }
        CHECK(!full_collision);
    } else {
        CHECK(dup_prefixes.empty());
    }
}

TEST_CASE("sample derivation matches reference vector") {
    Digest seed = sample_seed(filled(0x11), filled(0x22), chain_over(as_bytes("hello")),
                              filled(0x33), 10, 4);
    CHECK(seed.hex() == "dfe5d077e31121b6a879a9a0944da79ed688937684e460ecaecad7c11bf24783");
    auto idx = derive_samples(seed, 10, 4);
    CHECK(idx == std::vector<std::uint64_t>{2, 3, 7, 8});
}

TEST_CASE("sample derivation is deterministic and seed-sensitive") {
    Digest a = sample_seed(filled(1), filled(2), filled(3), filled(4), 100, 8);
    CHECK(a == sample_seed(filled(1), filled(2), filled(3), filled(4), 100, 8));
    CHECK(a != sample_seed(filled(9), filled(2), filled(3), filled(4), 100, 8));
    CHECK(a != sample_seed(filled(1), filled(9), filled(3), filled(4), 100, 8));
    CHECK(a != sample_seed(filled(1), filled(2), filled(9), filled(4), 100, 8));
    CHECK(a != sample_seed(filled(1), filled(2), filled(3), filled(9), 100, 8));
    CHECK(a != sample_seed(filled(1), filled(2), filled(3), filled(4), 101, 8));
    CHECK(a != sample_seed(filled(1), filled(2), filled(3), filled(4), 100, 9));

    auto idx = derive_samples(a, 1000, 64);
    CHECK(idx.size() == 64);
    for (auto i : idx) CHECK(i < 999);
    CHECK(derive_samples(a, 1000, 64) == idx);
    CHECK(derive_samples(a, 2, 16) == std::vector<std::uint64_t>(16, 0));
    CHECK_THROWS_AS(derive_samples(a, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(derive_samples(a, 10, 0), std::invalid_argument);
}
