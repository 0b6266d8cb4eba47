#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/hash.hpp"
#include "dsdin/merkle.hpp"

namespace dsdin {

class Writer;
struct State;

namespace storage {

constexpr std::uint64_t kDefaultChunkSize = 65'536;
constexpr std::uint64_t kRetrievalUnitBytes = 65'536;
constexpr Amount kRetrievalUnitPrice{100'000};  // 0.1 DSD per 64 KiB

/// Keyed per-chunk transform applied before hashing; identity by default.
using ChunkTransform = std::function<Bytes(std::uint64_t index, const Bytes& chunk)>;

struct Commitment {
  std::vector<Bytes> chunks;  // each exactly chunk_size bytes
  Hash256 data_root;
  std::uint64_t data_len = 0;  // original length; strips the zero padding
};

/// Splits `data` into fixed-size chunks (last one zero padded) and commits
/// to them with a Merkle root. Throws BadFormat on empty data.
Commitment commit_data(ByteView data, std::uint64_t chunk_size, const ChunkTransform& transform = {});

/// integer(H(prev_block_hash || contract_id)) mod chunk_count.
std::uint64_t challenge_index(const Hash256& prev_block_hash, const Hash256& contract_id, std::uint64_t chunk_count);

/// ceil(bytes / 65536) * 0.1 DSD.
Amount retrieval_quote(std::uint64_t bytes_served);

struct Contract {
  Hash256 id;
  Address payer;
  Address provider;
  Hash256 data_root;
  std::uint64_t chunk_count = 0;
  std::uint64_t chunk_size = kDefaultChunkSize;
  std::uint64_t data_len = 0;
  std::uint64_t period = 1;  // challenge every `period` blocks
  std::uint64_t created_height = 0;
  Amount reward_per_proof;
  Amount escrow_initial;
  Amount escrow;
  Amount paid_out;
  Amount refunded;
  std::uint64_t last_paid_height = 0;
  std::uint64_t proofs_paid = 0;
  bool closed = false;

  void encode(Writer& w) const;
};

struct CreateTerms {
  Address provider;
  Hash256 data_root;
  std::uint64_t chunk_count = 0;
  std::uint64_t chunk_size = kDefaultChunkSize;
  std::uint64_t data_len = 0;
  std::uint64_t period = 1;
  Amount reward_per_proof;
  Amount escrow;
};

Hash256 create_contract(State& state, const Address& payer, std::uint64_t counter, const CreateTerms& terms);

/// Pays reward_per_proof (capped by the remaining escrow) to the provider
/// for the first valid proof at a challenge height. Errors:
/// NotChallengeHeight, WrongIndex, BadProof, NotFound. Returns the proof
/// leaf committed into the block's proof tree.
Bytes prove_and_pay(State& state, const Hash256& contract_id, ByteView chunk, const MerkleProof& proof,
                    std::uint64_t height);

/// Payer ends the contract; the remaining escrow is refunded.
void close_contract(State& state, const Hash256& contract_id, const Address& caller);

// --- edge-compute spot checks ----------------------------------------------

struct ComputeTrace {
  std::vector<Hash256> step_commitments;
  Bytes claimed_output;

  Hash256 root() const;
};

struct SpotCheck {
  bool accepted = false;
  std::uint64_t checkpoint = 0;
};

/// checkpoint = integer(H(entropy || trace_root)) mod steps; accepted iff
/// recompute(checkpoint) matches the commitment. Throws BadFormat on an
/// empty trace.
SpotCheck spot_check(const ComputeTrace& trace, const std::function<Hash256(std::uint64_t)>& recompute,
                     const Hash256& entropy);

}  // namespace storage
}  // namespace dsdin
