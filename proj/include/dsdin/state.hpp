#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/channel.hpp"
#include "dsdin/crypto.hpp"
#include "dsdin/ledger.hpp"
#include "dsdin/oracle.hpp"
#include "dsdin/pow.hpp"
#include "dsdin/reward.hpp"
#include "dsdin/storage.hpp"
#include "dsdin/vm.hpp"

namespace dsdin {

/// Network configuration constants (not part of the committed state).
struct Params {
  PowParams pow;
  EmissionParams emission;
  Amount maintenance_rate;           // per block, 0 disables maintenance fees
  Amount delete_reward{100'000};     // paid from the reward pool
  std::uint64_t countdown_blocks = 20;
  Amount oracle_deposit_rate{1};     // per block of answer window
  std::uint64_t oracle_challenge_window = 10;
  std::uint64_t oracle_vote_window = 20;
  std::uint64_t blocks_per_epoch = 30;
  Rational reward_alpha{1, 10};
  Rational reward_mu{9, 10};
  Amount reward_q_initial = Amount::dsd(100);
  Amount zone_creation_price = Amount::dsd(10);
  std::uint64_t vm_space_limit = 1024;
  std::uint64_t pow_nonce_budget = 10'000;
  const SignatureScheme* scheme = &default_signature_scheme();
};

struct ContractRecord {
  Address owner;
  vm::Program code;
};

struct StateRoots {
  Hash256 account_root;
  Hash256 name_root;
  Hash256 wormhole_root;
  Hash256 oracle_open_root;
  Hash256 oracle_answer_root;

  bool operator==(const StateRoots&) const = default;
  Hash256 combined() const;
};

struct SupplyReport {
  Amount balances;
  Amount channel_locks;
  Amount oracle_deposits;
  Amount storage_escrow;
  Amount reward_pool;
  Amount burned;
  Amount genesis_total;
  Amount minted;

  Amount held() const {
    return balances + channel_locks + oracle_deposits + storage_escrow + reward_pool + burned;
  }
  bool balanced() const { return held() == genesis_total + minted; }
};

struct State {
  Params params;

  std::uint64_t height = 0;  // height of the last applied block
  Hash256 tip_hash;          // hash of the last applied header
  std::map<Address, Account> accounts;
  std::map<Address, ContractRecord> contracts;
  std::map<std::string, NameRecord> names;
  std::map<Hash256, channel::Channel> channels;
  std::map<Hash256, oracle::Question> oracles;
  std::map<Hash256, storage::Contract> storage;
  std::map<Hash256, reward::Zone> zones;
  reward::PoolState pool;
  Amount burned_total;
  Amount minted_total;
  Amount genesis_total;

  // Possession proofs accepted while applying the current block.
  std::vector<Bytes> block_proofs;

  const Account* find(const Address& a) const;
  Amount balance_of(const Address& a) const;

  /// Account for modification: charges lazy maintenance (burned) and
  /// creates a fresh external account when absent.
  Account& touch(const Address& a);
  void credit(const Address& a, Amount v);
  /// Throws `err` when the balance is insufficient.
  void debit(const Address& a, Amount v, Errc err = Errc::InsufficientFunds);
  void burn(Amount v) { burned_total += v; }

  StateRoots roots() const;
  SupplyReport supply() const;
};

/// Name lookup; throws NotFound.
Hash256 resolve_name(const State& state, const std::string& name);

/// Removes a zero-balance account (after maintenance) and credits the
/// configured deletion reward, drawn from the reward pool, to `sender`.
/// Returns the reward paid. Throws NotFound or NonZeroBalance.
Amount delete_account(State& state, const Address& target, const Address& sender);

}  // namespace dsdin
