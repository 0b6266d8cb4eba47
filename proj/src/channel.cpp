#include "dsdin/channel.hpp"

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"
#include "dsdin/state.hpp"

namespace dsdin::channel {

namespace {

void encode_unsigned(Writer& w, const SignedState& s) {
  w.hash(s.channel_id).u64(s.nonce).u64(s.balance_a.base_units()).u64(s.balance_b.base_units());
  w.boolean(s.contract_hash.has_value());
  if (s.contract_hash) w.hash(*s.contract_hash);
  w.u32(static_cast<std::uint32_t>(s.contract_state.size()));
  for (auto v : s.contract_state) w.i64(v);
}

Channel& find_channel(State& state, const Hash256& id) {
  auto it = state.channels.find(id);
  if (it == state.channels.end()) throw Error(Errc::WrongChannel, "unknown channel");
  return it->second;
}

std::pair<Amount, Amount> settlement_of(const Channel& ch, const SignedState& s) {
  const std::pair<Amount, Amount> balances{s.balance_a, s.balance_b};
  if (!s.contract_hash) return balances;
  if (!ch.contract || ch.contract->hash() != *s.contract_hash) return balances;
  return settle(*ch.contract, s.contract_state, balances, ch.total());
}

void close_with(State& state, Channel& ch, std::pair<Amount, Amount> split, std::uint64_t nonce) {
  state.credit(ch.party_a, split.first);
  state.credit(ch.party_b, split.second);
  ch.status = Status::Closed;
  ch.final_split = split;
  ch.settled_nonce = nonce;
  ch.candidate.reset();
}

void attach_contract(Channel& ch, const SignedState& s, const std::optional<vm::Program>& contract) {
  if (!s.contract_hash) return;
  if (!contract) throw Error(Errc::MissingContract);
  if (contract->hash() != *s.contract_hash) throw Error(Errc::MissingContract, "contract hash mismatch");
  ch.contract = *contract;
}

}  // namespace

Bytes SignedState::signing_bytes(Purpose purpose) const {
  Writer w;
  w.str("dsdin/channel-state").u8(static_cast<std::uint8_t>(purpose));
  encode_unsigned(w, *this);
  return std::move(w).take();
}

void SignedState::encode(Writer& w) const {
  encode_unsigned(w, *this);
  w.bytes(sig_a).bytes(sig_b);
}

SignedState SignedState::decode(Reader& r) {
  SignedState s;
  s.channel_id = r.hash();
  s.nonce = r.u64();
  s.balance_a = Amount(r.u64());
  s.balance_b = Amount(r.u64());
  if (r.boolean()) s.contract_hash = r.hash();
  const auto n = r.count(8);
  s.contract_state.resize(n);
  for (auto& v : s.contract_state) v = r.i64();
  s.sig_a = r.bytes();
  s.sig_b = r.bytes();
  return s;
}

void Channel::encode(Writer& w) const {
  w.hash(id).hash(party_a).hash(party_b).u64(deposit_a.base_units()).u64(deposit_b.base_units());
  w.u8(static_cast<std::uint8_t>(status)).u64(deadline_height).hash(closer);
  w.boolean(candidate.has_value());
  if (candidate) candidate->encode(w);
  w.boolean(contract.has_value());
  if (contract) w.hash(contract->hash());
  w.boolean(final_split.has_value());
  if (final_split) w.u64(final_split->first.base_units()).u64(final_split->second.base_units());
  w.u64(settled_nonce);
}

Hash256 channel_id(const Address& a, const Address& b, std::uint64_t counter_a) {
  return Hasher().update_str("channel").update(a).update(b).update_u64(counter_a).finish();
}

SignedState propose_update(const Channel& ch, const SignedState* prev, std::uint64_t nonce, Amount balance_a,
                           Amount balance_b, std::optional<Hash256> contract_hash,
                           std::vector<std::int64_t> contract_state) {
  const std::uint64_t prev_nonce = prev ? prev->nonce : 0;
  if (nonce != prev_nonce + 1) throw Error(Errc::NonMonotonicNonce);
  if (balance_a + balance_b != ch.total()) throw Error(Errc::BalanceSumMismatch);
  SignedState s;
  s.channel_id = ch.id;
  s.nonce = nonce;
  s.balance_a = balance_a;
  s.balance_b = balance_b;
  s.contract_hash = contract_hash;
  s.contract_state = std::move(contract_state);
  return s;
}

void sign_state(SignedState& s, const Channel& ch, const KeyPair& key, Purpose purpose) {
  if (key.address() == ch.party_a)
    s.sig_a = key.sign(s.signing_bytes(purpose));
  else if (key.address() == ch.party_b)
    s.sig_b = key.sign(s.signing_bytes(purpose));
  else
    throw Error(Errc::NotParty);
}

SignedState make_update(const Channel& ch, const SignedState* prev, std::uint64_t nonce, Amount balance_a,
                        Amount balance_b, const KeyPair& key_a, const KeyPair& key_b,
                        std::optional<Hash256> contract_hash, std::vector<std::int64_t> contract_state) {
  auto s = propose_update(ch, prev, nonce, balance_a, balance_b, contract_hash, std::move(contract_state));
  sign_state(s, ch, key_a, Purpose::Update);
  sign_state(s, ch, key_b, Purpose::Update);
  return s;
}

void check_signed(const Channel& ch, const SignedState& s, Purpose purpose, const SignatureScheme& scheme) {
  if (s.channel_id != ch.id) throw Error(Errc::WrongChannel);
  if (s.total() != ch.total()) throw Error(Errc::BalanceSumMismatch);
  if (s.nonce == 0) throw Error(Errc::NonMonotonicNonce, "signed states start at nonce 1");
  if (s.sig_a.empty() || s.sig_b.empty()) throw Error(Errc::MissingSignature, "state must carry both signatures");
  const Bytes msg = s.signing_bytes(purpose);
  if (!scheme.verify(ch.party_a, msg, s.sig_a) || !scheme.verify(ch.party_b, msg, s.sig_b))
    throw Error(Errc::BadSignature);
}

std::pair<Amount, Amount> settle(const vm::Program& contract, const std::vector<std::int64_t>& contract_state,
                                 std::pair<Amount, Amount> fallback, Amount total) {
  try {
    const auto out = vm::eval_pure(contract, contract_state);
    if (out.size() != 2 || out[0] < 0 || out[1] < 0) return fallback;
    const Amount a(static_cast<std::uint64_t>(out[0]));
    const Amount b(static_cast<std::uint64_t>(out[1]));
    if (a + b != total) return fallback;
    return {a, b};
  } catch (const Error&) {
    return fallback;
  }
}

Hash256 open_channel(State& state, const Address& a, const Address& b, Amount deposit_a, Amount deposit_b,
                     std::uint64_t counter_a, bool counterparty_signed) {
  if (!counterparty_signed) throw Error(Errc::MissingSignature);
  if (a == b) throw Error(Errc::BadFormat, "channel parties must differ");
  const Hash256 id = channel_id(a, b, counter_a);
  if (state.channels.contains(id)) throw Error(Errc::WrongChannel, "channel id already in use");
  state.debit(a, deposit_a, Errc::InsufficientFunds);
  state.debit(b, deposit_b, Errc::InsufficientFunds);
  Channel ch;
  ch.id = id;
  ch.party_a = a;
  ch.party_b = b;
  ch.deposit_a = deposit_a;
  ch.deposit_b = deposit_b;
  state.channels.emplace(id, std::move(ch));
  return id;
}

void cooperative_close(State& state, const SignedState& final_state) {
  Channel& ch = find_channel(state, final_state.channel_id);
  if (ch.status != Status::Open) throw Error(Errc::WrongChannel, "channel is not open");
  check_signed(ch, final_state, Purpose::Close, *state.params.scheme);
  close_with(state, ch, {final_state.balance_a, final_state.balance_b}, final_state.nonce);
}

void unilateral_close(State& state, const Hash256& id, const Address& closer,
                      const std::optional<SignedState>& candidate, const std::optional<vm::Program>& contract,
                      std::uint64_t height) {
  Channel& ch = find_channel(state, id);
  if (!ch.is_party(closer)) throw Error(Errc::NotParty);
  if (ch.status != Status::Open) throw Error(Errc::WrongChannel, "channel is not open");
  SignedState cand;
  if (candidate) {
    check_signed(ch, *candidate, Purpose::Update, *state.params.scheme);
    attach_contract(ch, *candidate, contract);
    cand = *candidate;
  } else {
    cand.channel_id = id;
    cand.balance_a = ch.deposit_a;
    cand.balance_b = ch.deposit_b;
  }
  ch.status = Status::Closing;
  ch.deadline_height = height + state.params.countdown_blocks;
  ch.closer = closer;
  ch.candidate = std::move(cand);
}

void challenge(State& state, const Hash256& id, const Address& challenger, const SignedState& better,
               const std::optional<vm::Program>& contract, std::uint64_t height) {
  Channel& ch = find_channel(state, id);
  if (ch.status != Status::Closing) throw Error(Errc::WrongChannel, "channel is not closing");
  if (!ch.is_party(challenger)) throw Error(Errc::NotParty);
  if (challenger == ch.closer) throw Error(Errc::NotParty, "the closing party cannot challenge its own close");
  if (height >= ch.deadline_height) throw Error(Errc::TooLate);
  if (better.nonce <= ch.candidate->nonce) throw Error(Errc::NotBetter);
  check_signed(ch, better, Purpose::Update, *state.params.scheme);
  attach_contract(ch, better, contract);
  close_with(state, ch, settlement_of(ch, better), better.nonce);
}

void finalize(State& state, const Hash256& id, std::uint64_t height) {
  Channel& ch = find_channel(state, id);
  if (ch.status != Status::Closing) throw Error(Errc::WrongChannel, "channel is not closing");
  if (height < ch.deadline_height) throw Error(Errc::NotYet);
  const SignedState cand = *ch.candidate;
  close_with(state, ch, settlement_of(ch, cand), cand.nonce);
}

}  // namespace dsdin::channel
