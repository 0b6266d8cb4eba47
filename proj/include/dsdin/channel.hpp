#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/crypto.hpp"
#include "dsdin/hash.hpp"
#include "dsdin/vm.hpp"

namespace dsdin {

class Writer;
class Reader;
struct State;

namespace channel {

/// Updates and cooperative closes are signed over different encodings, so
/// an old update signature can never serve as a close agreement.
enum class Purpose : std::uint8_t { Update = 1, Close = 2 };

struct SignedState {
  Hash256 channel_id;
  std::uint64_t nonce = 0;
  Amount balance_a;
  Amount balance_b;
  std::optional<Hash256> contract_hash;
  std::vector<std::int64_t> contract_state;
  Bytes sig_a;
  Bytes sig_b;

  bool operator==(const SignedState&) const = default;

  Bytes signing_bytes(Purpose purpose) const;
  void encode(Writer& w) const;
  static SignedState decode(Reader& r);
  Amount total() const { return balance_a + balance_b; }
};

enum class Status : std::uint8_t { Open = 0, Closing = 1, Closed = 2 };

struct Channel {
  Hash256 id;
  Address party_a;
  Address party_b;
  Amount deposit_a;
  Amount deposit_b;
  Status status = Status::Open;
  std::uint64_t deadline_height = 0;
  std::optional<SignedState> candidate;  // present iff closing
  Address closer;                        // party that started a unilateral close
  std::optional<vm::Program> contract;   // program revealed at dispute time
  std::optional<std::pair<Amount, Amount>> final_split;
  std::uint64_t settled_nonce = 0;

  Amount total() const { return deposit_a + deposit_b; }
  Amount locked() const { return status == Status::Closed ? Amount{} : total(); }
  bool is_party(const Address& a) const { return a == party_a || a == party_b; }
  void encode(Writer& w) const;
};

Hash256 channel_id(const Address& a, const Address& b, std::uint64_t counter_a);

/// Unsigned state for the next update; throws NonMonotonicNonce unless
/// nonce == prev.nonce + 1 (prev absent means nonce 0) and
/// BalanceSumMismatch unless the balances sum to the deposits.
SignedState propose_update(const Channel& ch, const SignedState* prev, std::uint64_t nonce, Amount balance_a,
                           Amount balance_b, std::optional<Hash256> contract_hash = std::nullopt,
                           std::vector<std::int64_t> contract_state = {});

/// Adds the signature of `key` for whichever party it controls.
void sign_state(SignedState& s, const Channel& ch, const KeyPair& key, Purpose purpose);

/// Off-chain update signed by both parties; never touches the chain.
SignedState make_update(const Channel& ch, const SignedState* prev, std::uint64_t nonce, Amount balance_a,
                        Amount balance_b, const KeyPair& key_a, const KeyPair& key_b,
                        std::optional<Hash256> contract_hash = std::nullopt,
                        std::vector<std::int64_t> contract_state = {});

/// WrongChannel, BalanceSumMismatch, MissingSignature or BadSignature.
void check_signed(const Channel& ch, const SignedState& s, Purpose purpose, const SignatureScheme& scheme);

/// Runs the settlement contract; falls back to `fallback` when evaluation
/// fails or the output is not a non-negative pair summing to `total`.
std::pair<Amount, Amount> settle(const vm::Program& contract, const std::vector<std::int64_t>& contract_state,
                                 std::pair<Amount, Amount> fallback, Amount total);

// --- on-chain operations ---------------------------------------------------

Hash256 open_channel(State& state, const Address& a, const Address& b, Amount deposit_a, Amount deposit_b,
                     std::uint64_t counter_a, bool counterparty_signed);

void cooperative_close(State& state, const SignedState& final_state);

/// Candidate absent settles at the original deposits.
void unilateral_close(State& state, const Hash256& id, const Address& closer,
                      const std::optional<SignedState>& candidate, const std::optional<vm::Program>& contract,
                      std::uint64_t height);

void challenge(State& state, const Hash256& id, const Address& challenger, const SignedState& better,
               const std::optional<vm::Program>& contract, std::uint64_t height);

void finalize(State& state, const Hash256& id, std::uint64_t height);

}  // namespace channel
}  // namespace dsdin
