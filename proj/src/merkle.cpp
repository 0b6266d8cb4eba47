#include "dsdin/merkle.hpp"

#include "dsdin/error.hpp"

namespace dsdin {

namespace {

constexpr std::size_t kParallelLevelWidth = 2048;

std::vector<Hash256> leaf_hashes(const std::vector<Bytes>& leaves) {
  std::vector<Hash256> out(leaves.size());
  const auto n = static_cast<std::int64_t>(leaves.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::int64_t>(kParallelLevelWidth))
  for (std::int64_t i = 0; i < n; ++i) out[i] = merkle_leaf_hash(leaves[i]);
  return out;
}

}  // namespace

Hash256 merkle_leaf_hash(ByteView leaf) { return sha256(leaf); }

Hash256 merkle_node_hash(const Hash256& left, const Hash256& right) {
  return Hasher().update(left).update(right).finish();
}

Hash256 merkle_root_serial(std::vector<Hash256> level) {
  if (level.empty()) throw Error(Errc::BadFormat, "merkle tree needs at least one leaf");
  if (level.size() == 1) return sha256(level[0].view());
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Hash256> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = merkle_node_hash(level[2 * i], level[2 * i + 1]);
    level = std::move(next);
  }
  return level[0];
}

Hash256 merkle_root_from_hashes(std::vector<Hash256> level) {
  if (level.empty()) throw Error(Errc::BadFormat, "merkle tree needs at least one leaf");
  if (level.size() == 1) return sha256(level[0].view());
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<Hash256> next(level.size() / 2);
    const auto n = static_cast<std::int64_t>(next.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::int64_t>(kParallelLevelWidth))
    for (std::int64_t i = 0; i < n; ++i) next[i] = merkle_node_hash(level[2 * i], level[2 * i + 1]);
    level = std::move(next);
  }
  return level[0];
}

Hash256 merkle_root(const std::vector<Bytes>& leaves) {
  if (leaves.empty()) throw Error(Errc::BadFormat, "merkle tree needs at least one leaf");
  return merkle_root_from_hashes(leaf_hashes(leaves));
}

Hash256 merkle_root_or_zero(const std::vector<Bytes>& leaves) {
  return leaves.empty() ? Hash256{} : merkle_root(leaves);
}

std::size_t merkle_depth(std::uint64_t leaf_count) noexcept {
  std::size_t depth = 0;
  for (std::uint64_t width = 1; width < leaf_count; width <<= 1) ++depth;
  return depth;
}

MerkleProof merkle_prove_hashes(const std::vector<Hash256>& leaf_hashes, std::uint64_t index) {
  if (index >= leaf_hashes.size()) throw Error(Errc::BadFormat, "leaf index out of range");
  MerkleProof proof{index, {}};
  std::vector<Hash256> level = leaf_hashes;
  std::uint64_t pos = index;
  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    proof.siblings.push_back(level[pos ^ 1]);
    std::vector<Hash256> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = merkle_node_hash(level[2 * i], level[2 * i + 1]);
    level = std::move(next);
    pos >>= 1;
  }
  return proof;
}

MerkleProof merkle_prove(const std::vector<Bytes>& leaves, std::uint64_t index) {
  if (leaves.empty()) throw Error(Errc::BadFormat, "merkle tree needs at least one leaf");
  return merkle_prove_hashes(leaf_hashes(leaves), index);
}

bool merkle_verify(const Hash256& root, ByteView leaf, const MerkleProof& proof, std::uint64_t leaf_count) {
  if (leaf_count == 0 || proof.leaf_index >= leaf_count) return false;
  if (proof.siblings.size() != merkle_depth(leaf_count)) return false;
  Hash256 acc = merkle_leaf_hash(leaf);
  if (leaf_count == 1) return sha256(acc.view()) == root;
  std::uint64_t pos = proof.leaf_index;
  for (const auto& sib : proof.siblings) {
    acc = (pos & 1) ? merkle_node_hash(sib, acc) : merkle_node_hash(acc, sib);
    pos >>= 1;
  }
  return acc == root;
}

}  // namespace dsdin
