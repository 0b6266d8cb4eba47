#pragma once

#include <cstdint>
#include <vector>

#include "dsdin/hash.hpp"

namespace dsdin {

struct MerkleProof {
  std::uint64_t leaf_index = 0;
  std::vector<Hash256> siblings;

  bool operator==(const MerkleProof&) const = default;
};

Hash256 merkle_leaf_hash(ByteView leaf);
Hash256 merkle_node_hash(const Hash256& left, const Hash256& right);

// Binary tree over H(leaf). Odd levels duplicate their last node; a single
// leaf tree has root H(H(leaf)). Throws BadFormat on an empty input.
Hash256 merkle_root(const std::vector<Bytes>& leaves);
Hash256 merkle_root_from_hashes(std::vector<Hash256> level);

// Serial reference for merkle_root_from_hashes; the main path hashes each
// level with OpenMP once it is wide enough.
Hash256 merkle_root_serial(std::vector<Hash256> level);

/// Root of a possibly empty leaf list; an empty tree commits to all-zero.
Hash256 merkle_root_or_zero(const std::vector<Bytes>& leaves);

MerkleProof merkle_prove(const std::vector<Bytes>& leaves, std::uint64_t index);
MerkleProof merkle_prove_hashes(const std::vector<Hash256>& leaf_hashes, std::uint64_t index);

/// Expected proof length for a tree of `leaf_count` leaves.
std::size_t merkle_depth(std::uint64_t leaf_count) noexcept;

bool merkle_verify(const Hash256& root, ByteView leaf, const MerkleProof& proof, std::uint64_t leaf_count);

}  // namespace dsdin
