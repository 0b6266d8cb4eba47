#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/channel.hpp"
#include "dsdin/crypto.hpp"
#include "dsdin/error.hpp"
#include "dsdin/hash.hpp"
#include "dsdin/merkle.hpp"
#include "dsdin/reward.hpp"
#include "dsdin/storage.hpp"
#include "dsdin/vm.hpp"

namespace dsdin {

namespace tx {

struct Spend {
  Address recipient;
  Amount amount;
};
struct ContractCreate {
  vm::Program code;
  std::uint32_t vm_version = vm::kVmVersion;
  Amount deposit;
  Amount amount;
  std::vector<std::int64_t> call_data;
};
struct ContractCall {
  Address contract;
  Amount amount;
  std::vector<std::int64_t> call_data;
};
struct DataOnly {
  Bytes payload;
};
struct NameClaim {
  std::string name;
  Hash256 target;
};
struct DeleteAccount {
  Address target;
};
struct ChannelOpen {
  Address counterparty;
  Amount deposit_self;
  Amount deposit_counterparty;
  Bytes counterparty_sig;  // over the transaction signing bytes
};
struct ChannelCooperativeClose {
  channel::SignedState final_state;  // signed with Purpose::Close
};
struct ChannelUnilateralClose {
  Hash256 channel_id;
  std::optional<channel::SignedState> candidate;
  std::optional<vm::Program> contract;
};
struct ChannelChallenge {
  Hash256 channel_id;
  channel::SignedState better;
  std::optional<vm::Program> contract;
};
struct ChannelFinalize {
  Hash256 channel_id;
};
struct OracleRegister {
  Hash256 question_hash;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
};
struct OracleAnswer {
  Hash256 question_id;
  bool answer = false;
};
struct OracleCounter {
  Hash256 question_id;
};
struct OracleVote {
  Hash256 question_id;
  bool answer = false;
};
struct OracleResolve {
  Hash256 question_id;
};
struct StorageCreate {
  storage::CreateTerms terms;
};
struct StorageProve {
  Hash256 contract_id;
  Bytes chunk;
  MerkleProof proof;
};
struct StorageClose {
  Hash256 contract_id;
};
struct ZoneTx {
  reward::ZoneAction action;
};
struct EpochSettle {
  reward::EpochInputs inputs;
};

}  // namespace tx

using Payload = std::variant<tx::Spend, tx::ContractCreate, tx::ContractCall, tx::DataOnly, tx::NameClaim,
                             tx::DeleteAccount, tx::ChannelOpen, tx::ChannelCooperativeClose,
                             tx::ChannelUnilateralClose, tx::ChannelChallenge, tx::ChannelFinalize,
                             tx::OracleRegister, tx::OracleAnswer, tx::OracleCounter, tx::OracleVote,
                             tx::OracleResolve, tx::StorageCreate, tx::StorageProve, tx::StorageClose, tx::ZoneTx,
                             tx::EpochSettle>;

/// Every transaction carries gas and gas_price; fee must equal their
/// product. Kinds without contract code consume all of their gas.
struct Tx {
  Address sender;
  std::uint64_t counter = 0;
  std::uint64_t gas = 0;
  std::uint64_t gas_price = 0;
  Amount fee;
  Bytes sig;
  Payload payload;

  Bytes encode() const;
  /// Encoding with every signature field left out.
  Bytes signing_bytes() const;
  Hash256 hash() const;
  static Tx decode(ByteView in);
  const char* kind_name() const;
  /// True for kinds whose unused gas is refunded (they run contract code).
  bool runs_code() const;
};

Tx decode_tx(Reader& r);
void encode_tx(Writer& w, const Tx& t);

/// Fills fee = gas * gas_price and signs with `key`.
Tx make_tx(const KeyPair& key, std::uint64_t counter, std::uint64_t gas, std::uint64_t gas_price, Payload payload);

/// Cost of a data-only transaction: gas_price * payload_len.
Amount data_only_cost(std::uint64_t payload_len, std::uint64_t gas_price);

enum class TxStatus : std::uint8_t { Applied, Reverted };

struct Receipt {
  Hash256 tx_hash;
  TxStatus status = TxStatus::Applied;
  std::optional<Errc> error;
  std::uint64_t gas_used = 0;
  std::uint64_t gas_price = 0;
  Amount fee_paid;      // gas_used * gas_price, to the miner
  Amount refund;        // (gas - gas_used) * gas_price, back to the sender
  Amount miner_credit;
  std::optional<Hash256> created;  // contract / channel / question / storage / zone id

  std::string to_line() const;
};

}  // namespace dsdin
