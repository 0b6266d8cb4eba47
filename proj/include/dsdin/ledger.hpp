#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/hash.hpp"
#include "dsdin/merkle.hpp"
#include "dsdin/pow.hpp"

namespace dsdin {

class Writer;
class Reader;

enum class AccountKind : std::uint8_t { External = 0, Contract = 1 };

struct Account {
  Address address;
  Amount balance;
  std::uint64_t counter = 0;
  std::uint64_t freshness = 0;  // height of the last update
  AccountKind kind = AccountKind::External;
  std::optional<Hash256> code_hash;  // contract accounts only

  bool operator==(const Account&) const = default;
  Bytes encode() const;
  static Account decode(ByteView in);
};

struct NameRecord {
  static constexpr std::size_t kMaxNameBytes = 64;

  std::string name;
  Hash256 target;
  Address owner;

  bool operator==(const NameRecord&) const = default;
  Bytes encode() const;
  static NameRecord decode(ByteView in);
};

struct BlockHeader {
  std::uint64_t height = 0;
  Hash256 prev_hash;
  Hash256 tx_root;
  Hash256 account_root;
  Hash256 name_root;
  Hash256 wormhole_root;
  Hash256 oracle_open_root;
  Hash256 oracle_answer_root;
  Hash256 proof_root;
  Hash256 entropy;
  Address miner;
  std::uint64_t pow_nonce = 0;
  std::vector<std::uint32_t> pow_cycle;

  bool operator==(const BlockHeader&) const = default;

  void encode(Writer& w) const;
  Bytes encode() const;
  static BlockHeader decode(Reader& r);
  static BlockHeader decode(ByteView in);

  /// Hash of the full canonical encoding; this is what prev_hash links to.
  Hash256 hash() const;
  /// Digest the proof-of-work commits to: every field except entropy,
  /// pow_nonce and pow_cycle.
  Hash256 pow_hash() const;
  CuckooSolution solution() const { return {pow_nonce, pow_cycle}; }
};

/// entropy = H(prev.entropy || miner || pow_nonce); all-zero before genesis.
Hash256 derive_entropy(const Hash256& prev_entropy, const Address& miner, std::uint64_t pow_nonce);

/// Header link and proof-of-work check. `prev` is the tip at height-1, or
/// nullopt for genesis. Throws BadLink, BadHeight or BadPow.
void validate_header(const BlockHeader& header, const std::optional<BlockHeader>& prev, const PowParams& params);

/// Fills entropy and the PoW fields by solving. Throws PowNotFound.
void mine_header(BlockHeader& header, const std::optional<BlockHeader>& prev, const PowParams& params,
                 std::uint64_t nonce_budget);

struct MaintenanceCharge {
  Account account;
  Amount collected;  // removed from the balance (burned)
  Amount shortfall;  // owed but uncollectable
};

/// Lazy maintenance: rate * (current_height - freshness), floored at a zero
/// balance; freshness moves to current_height. Idempotent at fixed height.
MaintenanceCharge charge_maintenance(const Account& account, std::uint64_t current_height, Amount rate_per_block);

}  // namespace dsdin
