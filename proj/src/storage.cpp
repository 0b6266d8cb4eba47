#include "dsdin/storage.hpp"

#include <algorithm>

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"
#include "dsdin/state.hpp"

namespace dsdin::storage {

Commitment commit_data(ByteView data, std::uint64_t chunk_size, const ChunkTransform& transform) {
  if (data.empty()) throw Error(Errc::BadFormat, "cannot commit to empty data");
  if (chunk_size == 0) throw Error(Errc::BadFormat, "chunk size must be positive");
  Commitment c;
  c.data_len = data.size();
  for (std::uint64_t off = 0; off < data.size(); off += chunk_size) {
    const auto n = std::min<std::uint64_t>(chunk_size, data.size() - off);
    Bytes chunk(data.begin() + off, data.begin() + off + n);
    chunk.resize(chunk_size, 0);
    if (transform) chunk = transform(c.chunks.size(), chunk);
    c.chunks.push_back(std::move(chunk));
  }
  c.data_root = merkle_root(c.chunks);
  return c;
}

std::uint64_t challenge_index(const Hash256& prev_block_hash, const Hash256& contract_id, std::uint64_t chunk_count) {
  if (chunk_count == 0) throw Error(Errc::BadFormat, "chunk count must be positive");
  return hash_mod(Hasher().update(prev_block_hash).update(contract_id).finish(), chunk_count);
}

Amount retrieval_quote(std::uint64_t bytes_served) {
  const std::uint64_t units = bytes_served / kRetrievalUnitBytes + (bytes_served % kRetrievalUnitBytes != 0);
  return kRetrievalUnitPrice * units;
}

void Contract::encode(Writer& w) const {
  w.hash(id).hash(payer).hash(provider).hash(data_root);
  w.u64(chunk_count).u64(chunk_size).u64(data_len).u64(period).u64(created_height);
  w.u64(reward_per_proof.base_units()).u64(escrow_initial.base_units()).u64(escrow.base_units());
  w.u64(paid_out.base_units()).u64(refunded.base_units());
  w.u64(last_paid_height).u64(proofs_paid).boolean(closed);
}

Hash256 create_contract(State& state, const Address& payer, std::uint64_t counter, const CreateTerms& terms) {
  if (terms.chunk_count == 0 || terms.chunk_size == 0 || terms.period == 0)
    throw Error(Errc::BadFormat, "storage terms need positive chunk count, chunk size and period");
  if (terms.data_len > terms.chunk_count * terms.chunk_size)
    throw Error(Errc::BadFormat, "data length exceeds committed chunks");
  const Hash256 id = Hasher().update_str("storage").update(payer).update_u64(counter).finish();
  if (state.storage.contains(id)) throw Error(Errc::BadFormat, "storage contract id already in use");
  state.debit(payer, terms.escrow, Errc::InsufficientFunds);
  Contract c;
  c.id = id;
  c.payer = payer;
  c.provider = terms.provider;
  c.data_root = terms.data_root;
  c.chunk_count = terms.chunk_count;
  c.chunk_size = terms.chunk_size;
  c.data_len = terms.data_len;
  c.period = terms.period;
  c.created_height = state.height;
  c.reward_per_proof = terms.reward_per_proof;
  c.escrow_initial = terms.escrow;
  c.escrow = terms.escrow;
  state.storage.emplace(id, std::move(c));
  return id;
}

Bytes prove_and_pay(State& state, const Hash256& contract_id, ByteView chunk, const MerkleProof& proof,
                    std::uint64_t height) {
  auto it = state.storage.find(contract_id);
  if (it == state.storage.end()) throw Error(Errc::NotFound, "unknown storage contract");
  Contract& c = it->second;
  if (c.closed) throw Error(Errc::NotFound, "storage contract closed");
  if (height % c.period != 0 || height <= c.created_height || c.last_paid_height == height)
    throw Error(Errc::NotChallengeHeight);
  if (proof.leaf_index != challenge_index(state.tip_hash, c.id, c.chunk_count)) throw Error(Errc::WrongIndex);
  if (!merkle_verify(c.data_root, chunk, proof, c.chunk_count)) throw Error(Errc::BadProof);

  const Amount pay = min(c.reward_per_proof, c.escrow);
  c.escrow -= pay;
  c.paid_out += pay;
  c.last_paid_height = height;
  ++c.proofs_paid;
  state.credit(c.provider, pay);

  Writer leaf;
  leaf.str("possession").hash(c.id).u64(height).u64(proof.leaf_index).hash(merkle_leaf_hash(chunk));
  state.block_proofs.push_back(leaf.data());
  return std::move(leaf).take();
}

void close_contract(State& state, const Hash256& contract_id, const Address& caller) {
  auto it = state.storage.find(contract_id);
  if (it == state.storage.end()) throw Error(Errc::NotFound, "unknown storage contract");
  Contract& c = it->second;
  if (c.closed) throw Error(Errc::NotFound, "storage contract closed");
  if (caller != c.payer) throw Error(Errc::NotParty, "only the payer closes a storage contract");
  state.credit(c.payer, c.escrow);
  c.refunded += c.escrow;
  c.escrow = Amount{};
  c.closed = true;
}

Hash256 ComputeTrace::root() const {
  if (step_commitments.empty()) throw Error(Errc::BadFormat, "empty compute trace");
  return merkle_root_from_hashes(step_commitments);
}

SpotCheck spot_check(const ComputeTrace& trace, const std::function<Hash256(std::uint64_t)>& recompute,
                     const Hash256& entropy) {
  if (trace.step_commitments.empty()) throw Error(Errc::BadFormat, "empty compute trace");
  SpotCheck out;
  out.checkpoint = hash_mod(Hasher().update(entropy).update(trace.root()).finish(), trace.step_commitments.size());
  out.accepted = recompute(out.checkpoint) == trace.step_commitments[out.checkpoint];
  return out;
}

}  // namespace dsdin::storage
