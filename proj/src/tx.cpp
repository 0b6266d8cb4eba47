#include "dsdin/tx.hpp"

#include <sstream>

#include "dsdin/codec.hpp"

namespace dsdin {

namespace {

constexpr const char* kKindNames[] = {
    "spend",         "contract_create",  "contract_call",   "data_only",     "name_claim",
    "delete_account", "channel_open",    "channel_close",   "channel_unilateral", "channel_challenge",
    "channel_finalize", "oracle_register", "oracle_answer", "oracle_counter", "oracle_vote",
    "oracle_resolve", "storage_create",  "storage_prove",   "storage_close", "zone",
    "epoch_settle"};
static_assert(std::size(kKindNames) == std::variant_size_v<Payload>);

void put_amount(Writer& w, Amount a) { w.u64(a.base_units()); }
Amount get_amount(Reader& r) { return Amount(r.u64()); }

void put_words(Writer& w, const std::vector<std::int64_t>& v) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (auto x : v) w.i64(x);
}
std::vector<std::int64_t> get_words(Reader& r) {
  std::vector<std::int64_t> v(r.count(8));
  for (auto& x : v) x = r.i64();
  return v;
}

void put_program(Writer& w, const std::optional<vm::Program>& p) {
  w.boolean(p.has_value());
  if (p) w.bytes(p->encode());
}
std::optional<vm::Program> get_program(Reader& r) {
  if (!r.boolean()) return std::nullopt;
  const Bytes b = r.bytes();
  return vm::Program::decode(b);
}

void put_state(Writer& w, const std::optional<channel::SignedState>& s) {
  w.boolean(s.has_value());
  if (s) s->encode(w);
}
std::optional<channel::SignedState> get_state(Reader& r) {
  if (!r.boolean()) return std::nullopt;
  return channel::SignedState::decode(r);
}

void put_payload(Writer& w, const Payload& p, bool with_sigs) {
  w.u8(static_cast<std::uint8_t>(p.index()));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, tx::Spend>) {
          w.hash(x.recipient);
          put_amount(w, x.amount);
        } else if constexpr (std::is_same_v<T, tx::ContractCreate>) {
          w.bytes(x.code.encode()).u32(x.vm_version);
          put_amount(w, x.deposit);
          put_amount(w, x.amount);
          put_words(w, x.call_data);
        } else if constexpr (std::is_same_v<T, tx::ContractCall>) {
          w.hash(x.contract);
          put_amount(w, x.amount);
          put_words(w, x.call_data);
        } else if constexpr (std::is_same_v<T, tx::DataOnly>) {
          w.bytes(x.payload);
        } else if constexpr (std::is_same_v<T, tx::NameClaim>) {
          w.str(x.name).hash(x.target);
        } else if constexpr (std::is_same_v<T, tx::DeleteAccount>) {
          w.hash(x.target);
        } else if constexpr (std::is_same_v<T, tx::ChannelOpen>) {
          w.hash(x.counterparty);
          put_amount(w, x.deposit_self);
          put_amount(w, x.deposit_counterparty);
          if (with_sigs) w.bytes(x.counterparty_sig);
        } else if constexpr (std::is_same_v<T, tx::ChannelCooperativeClose>) {
          x.final_state.encode(w);
        } else if constexpr (std::is_same_v<T, tx::ChannelUnilateralClose>) {
          w.hash(x.channel_id);
          put_state(w, x.candidate);
          put_program(w, x.contract);
        } else if constexpr (std::is_same_v<T, tx::ChannelChallenge>) {
          w.hash(x.channel_id);
          x.better.encode(w);
          put_program(w, x.contract);
        } else if constexpr (std::is_same_v<T, tx::ChannelFinalize>) {
          w.hash(x.channel_id);
        } else if constexpr (std::is_same_v<T, tx::OracleRegister>) {
          w.hash(x.question_hash).u64(x.start).u64(x.end);
        } else if constexpr (std::is_same_v<T, tx::OracleAnswer> || std::is_same_v<T, tx::OracleVote>) {
          w.hash(x.question_id).boolean(x.answer);
        } else if constexpr (std::is_same_v<T, tx::OracleCounter> || std::is_same_v<T, tx::OracleResolve>) {
          w.hash(x.question_id);
        } else if constexpr (std::is_same_v<T, tx::StorageCreate>) {
          const auto& t = x.terms;
          w.hash(t.provider).hash(t.data_root).u64(t.chunk_count).u64(t.chunk_size).u64(t.data_len).u64(t.period);
          put_amount(w, t.reward_per_proof);
          put_amount(w, t.escrow);
        } else if constexpr (std::is_same_v<T, tx::StorageProve>) {
          w.hash(x.contract_id).bytes(x.chunk).u64(x.proof.leaf_index);
          w.u32(static_cast<std::uint32_t>(x.proof.siblings.size()));
          for (const auto& s : x.proof.siblings) w.hash(s);
        } else if constexpr (std::is_same_v<T, tx::StorageClose>) {
          w.hash(x.contract_id);
        } else if constexpr (std::is_same_v<T, tx::ZoneTx>) {
          reward::encode_action(w, x.action);
        } else if constexpr (std::is_same_v<T, tx::EpochSettle>) {
          x.inputs.encode(w);
        }
      },
      p);
}

Payload get_payload(Reader& r) {
  const auto kind = r.u8();
  switch (kind) {
    case 0: {
      tx::Spend x;
      x.recipient = r.hash();
      x.amount = get_amount(r);
      return x;
    }
    case 1: {
      tx::ContractCreate x;
      const Bytes code = r.bytes();
      x.code = vm::Program::decode(code);
      x.vm_version = r.u32();
      x.deposit = get_amount(r);
      x.amount = get_amount(r);
      x.call_data = get_words(r);
      return x;
    }
    case 2: {
      tx::ContractCall x;
      x.contract = r.hash();
      x.amount = get_amount(r);
      x.call_data = get_words(r);
      return x;
    }
    case 3: return tx::DataOnly{r.bytes()};
    case 4: {
      tx::NameClaim x;
      x.name = r.str();
      x.target = r.hash();
      return x;
    }
    case 5: return tx::DeleteAccount{r.hash()};
    case 6: {
      tx::ChannelOpen x;
      x.counterparty = r.hash();
      x.deposit_self = get_amount(r);
      x.deposit_counterparty = get_amount(r);
      x.counterparty_sig = r.bytes();
      return x;
    }
    case 7: return tx::ChannelCooperativeClose{channel::SignedState::decode(r)};
    case 8: {
      tx::ChannelUnilateralClose x;
      x.channel_id = r.hash();
      x.candidate = get_state(r);
      x.contract = get_program(r);
      return x;
    }
    case 9: {
      tx::ChannelChallenge x;
      x.channel_id = r.hash();
      x.better = channel::SignedState::decode(r);
      x.contract = get_program(r);
      return x;
    }
    case 10: return tx::ChannelFinalize{r.hash()};
    case 11: {
      tx::OracleRegister x;
      x.question_hash = r.hash();
      x.start = r.u64();
      x.end = r.u64();
      return x;
    }
    case 12: {
      tx::OracleAnswer x;
      x.question_id = r.hash();
      x.answer = r.boolean();
      return x;
    }
    case 13: return tx::OracleCounter{r.hash()};
    case 14: {
      tx::OracleVote x;
      x.question_id = r.hash();
      x.answer = r.boolean();
      return x;
    }
    case 15: return tx::OracleResolve{r.hash()};
    case 16: {
      tx::StorageCreate x;
      auto& t = x.terms;
      t.provider = r.hash();
      t.data_root = r.hash();
      t.chunk_count = r.u64();
      t.chunk_size = r.u64();
      t.data_len = r.u64();
      t.period = r.u64();
      t.reward_per_proof = get_amount(r);
      t.escrow = get_amount(r);
      return x;
    }
    case 17: {
      tx::StorageProve x;
      x.contract_id = r.hash();
      x.chunk = r.bytes();
      x.proof.leaf_index = r.u64();
      x.proof.siblings.resize(r.count(32));
      for (auto& s : x.proof.siblings) s = r.hash();
      return x;
    }
    case 18: return tx::StorageClose{r.hash()};
    case 19: return tx::ZoneTx{reward::decode_action(r)};
    case 20: return tx::EpochSettle{reward::EpochInputs::decode(r)};
    default: throw Error(Errc::Decode, "unknown transaction kind " + std::to_string(kind));
  }
}

void put_body(Writer& w, const Tx& t, bool with_sigs) {
  w.hash(t.sender).u64(t.counter).u64(t.gas).u64(t.gas_price);
  put_amount(w, t.fee);
  put_payload(w, t.payload, with_sigs);
}

}  // namespace

void encode_tx(Writer& w, const Tx& t) {
  put_body(w, t, true);
  w.bytes(t.sig);
}

Tx decode_tx(Reader& r) {
  Tx t;
  t.sender = r.hash();
  t.counter = r.u64();
  t.gas = r.u64();
  t.gas_price = r.u64();
  t.fee = get_amount(r);
  t.payload = get_payload(r);
  t.sig = r.bytes();
  return t;
}

Bytes Tx::encode() const {
  Writer w;
  encode_tx(w, *this);
  return std::move(w).take();
}

Bytes Tx::signing_bytes() const {
  Writer w;
  w.str("dsdin/tx");
  put_body(w, *this, false);
  return std::move(w).take();
}

Hash256 Tx::hash() const { return sha256(encode()); }

Tx Tx::decode(ByteView in) {
  Reader r(in);
  Tx t = decode_tx(r);
  r.expect_done();
  return t;
}

const char* Tx::kind_name() const { return kKindNames[payload.index()]; }

bool Tx::runs_code() const {
  return std::holds_alternative<tx::ContractCreate>(payload) || std::holds_alternative<tx::ContractCall>(payload);
}

Tx make_tx(const KeyPair& key, std::uint64_t counter, std::uint64_t gas, std::uint64_t gas_price, Payload payload) {
  Tx t;
  t.sender = key.address();
  t.counter = counter;
  t.gas = gas;
  t.gas_price = gas_price;
  t.fee = Amount(gas_price) * gas;
  t.payload = std::move(payload);
  t.sig = key.sign(t.signing_bytes());
  return t;
}

Amount data_only_cost(std::uint64_t payload_len, std::uint64_t gas_price) { return Amount(gas_price) * payload_len; }

std::string Receipt::to_line() const {
  std::ostringstream os;
  os << "receipt tx=" << tx_hash.hex().substr(0, 16) << " status=" << (status == TxStatus::Applied ? "ok" : "reverted");
  if (error) os << " error=" << errc_name(*error);
  os << " gas_used=" << gas_used << " gas_price=" << gas_price << " fee=" << fee_paid.str()
     << " refund=" << refund.str() << " miner=" << miner_credit.str();
  if (created) os << " created=" << created->hex().substr(0, 16);
  return os.str();
}

}  // namespace dsdin
