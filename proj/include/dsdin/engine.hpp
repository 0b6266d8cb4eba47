#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsdin/ledger.hpp"
#include "dsdin/state.hpp"
#include "dsdin/tx.hpp"

namespace dsdin {

struct Block {
  BlockHeader header;
  std::vector<Tx> transactions;

  Bytes encode() const;
  static Block decode(ByteView in);
  std::vector<Bytes> tx_leaves() const;
  Hash256 hash() const { return header.hash(); }
};

/// Light-client check: each adjacent header pair links and carries valid
/// PoW, and `tx_bytes` is included under the final header's tx_root.
bool verify_light(const std::vector<BlockHeader>& headers, ByteView tx_bytes, const MerkleProof& proof,
                  std::uint64_t leaf_count, const PowParams& params);

/// Canonical-format, signature, counter and fee-coverage checks. Throws
/// BadFormat, BadSignature, BadCounter, InsufficientForFee or SpendToContract.
void check_tx(const State& state, const Tx& tx);

/// Applies one transaction at state.height. Throws (leaving the state
/// untouched) when the transaction is not applicable; protocol failures
/// after the fee is charged revert everything but the fee and yield a
/// Reverted receipt.
Receipt apply_tx(State& state, const Tx& tx, const Address& miner);

/// Credits the coinbase, applies the transactions in order and checks the
/// header roots. Strong guarantee: on any error the state is unchanged.
/// Throws BadLink, BadHeight, RootMismatch or any check_tx error.
std::vector<Receipt> apply_block(State& state, const Block& block);

struct BlockTemplate {
  Block block;  // roots filled in, PoW not yet solved
  State post_state;
  std::vector<Receipt> receipts;
  std::vector<Tx> skipped;
};

/// Builds the next block on top of `state`: coinbase, then every candidate
/// that applies (in the given order, retrying deferred ones while progress
/// is made), then fills the header roots.
BlockTemplate assemble_block(const State& state, const Address& miner, const std::vector<Tx>& candidates);

/// Deterministic candidate order: fee density (fee per encoded byte)
/// descending, then transaction hash ascending.
void order_by_fee_density(std::vector<Tx>& txs);

// --- genesis ---------------------------------------------------------------

struct GenesisAccount {
  Address address;
  Amount balance;
};

struct GenesisConfig {
  Params params;
  std::vector<GenesisAccount> accounts;
  Amount pool_endowment;
  Address founder;  // miner field of the genesis header
};

/// State at height 0: listed balances, the funded reward pool.
State genesis_state(const GenesisConfig& config);
/// Genesis block (no transactions) committing to genesis_state, mined.
Block genesis_block(const GenesisConfig& config);

}  // namespace dsdin
