#include "dsdin/engine.hpp"

#include <algorithm>

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"

namespace dsdin {

// --- blocks ----------------------------------------------------------------

Bytes Block::encode() const {
  Writer w;
  header.encode(w);
  w.u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& t : transactions) encode_tx(w, t);
  return std::move(w).take();
}

Block Block::decode(ByteView in) {
  Reader r(in);
  Block b;
  b.header = BlockHeader::decode(r);
  const auto n = r.count(64);
  b.transactions.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) b.transactions.push_back(decode_tx(r));
  r.expect_done();
  return b;
}

std::vector<Bytes> Block::tx_leaves() const {
  std::vector<Bytes> leaves;
  leaves.reserve(transactions.size());
  for (const auto& t : transactions) leaves.push_back(t.encode());
  return leaves;
}

bool verify_light(const std::vector<BlockHeader>& headers, ByteView tx_bytes, const MerkleProof& proof,
                  std::uint64_t leaf_count, const PowParams& params) {
  if (headers.empty()) return false;
  try {
    const BlockHeader& first = headers.front();
    if (first.height == 0)
      validate_header(first, std::nullopt, params);
    else if (!verify(first.pow_hash(), first.solution(), params))
      return false;
    for (std::size_t i = 1; i < headers.size(); ++i) validate_header(headers[i], headers[i - 1], params);
  } catch (const Error&) {
    return false;
  }
  return merkle_verify(headers.back().tx_root, tx_bytes, proof, leaf_count);
}

// --- transactions ----------------------------------------------------------

namespace {

struct Outcome {
  std::uint64_t gas_used = 0;
  std::optional<Hash256> created;
};

Amount fee_product(std::uint64_t gas, std::uint64_t gas_price) {
  try {
    return Amount(gas) * gas_price;
  } catch (const Error&) {
    throw Error(Errc::BadFormat, "fee overflows");
  }
}

void check_format(const State& state, const Tx& t) {
  if (t.gas_price == 0) throw Error(Errc::BadFormat, "gas price must be positive");
  if (t.fee != fee_product(t.gas, t.gas_price)) throw Error(Errc::BadFormat, "fee must equal gas * gas_price");
  const auto* data = std::get_if<tx::DataOnly>(&t.payload);
  if (data) {
    if (t.gas != data->payload.size()) throw Error(Errc::BadFormat, "data-only gas must equal the payload length");
  } else if (t.gas == 0) {
    throw Error(Errc::BadFormat, "gas must be positive");
  }
  if (const auto* s = std::get_if<tx::Spend>(&t.payload); s && state.contracts.contains(s->recipient))
    throw Error(Errc::SpendToContract);
  if (const auto* n = std::get_if<tx::NameClaim>(&t.payload);
      n && (n->name.empty() || n->name.size() > NameRecord::kMaxNameBytes))
    throw Error(Errc::BadFormat, "name must be 1..64 bytes");
  if (const auto* c = std::get_if<tx::ContractCreate>(&t.payload)) {
    if (c->vm_version != vm::kVmVersion) throw Error(Errc::BadFormat, "unsupported vm version");
    c->code.validate();
  }
  if (const auto* d = std::get_if<tx::DeleteAccount>(&t.payload); d && d->target == t.sender)
    throw Error(Errc::BadFormat, "an account cannot delete itself");
}

Amount from_word(std::int64_t v) {
  if (v < 0) throw Error(Errc::VmFailure, "negative payout");
  return Amount(static_cast<std::uint64_t>(v));
}

std::int64_t to_word(Amount a) {
  const auto v = a.base_units();
  return v > static_cast<std::uint64_t>(INT64_MAX) ? INT64_MAX : static_cast<std::int64_t>(v);
}

// Pays halted-program payouts out of the contract's own balance.
void pay_effects(State& state, const Address& contract, const vm::VmResult& r) {
  Amount total;
  for (const auto& e : r.balance_effects) total += from_word(e.delta);
  state.debit(contract, total, Errc::InsufficientFunds);
  for (const auto& e : r.balance_effects)
    if (e.delta > 0) state.credit(e.address, from_word(e.delta));
}

vm::VmResult run_contract(State& state, const Address& contract, const Address& caller, const Address& owner,
                          const vm::Program& code, const std::vector<std::int64_t>& call_data, std::uint64_t gas) {
  vm::Env env;
  env.balances = {to_word(state.balance_of(contract)), to_word(state.balance_of(caller))};
  env.signatures = {true};
  env.payees = {caller, owner};
  auto r = vm::execute(code, call_data, env, gas, state.params.vm_space_limit);
  if (r.status != vm::Status::Halted)
    throw Error(Errc::VmFailure, std::string("contract ") + vm::status_name(r.status));
  pay_effects(state, contract, r);
  return r;
}

Outcome run_payload(State& state, const Tx& t, const Address& miner) {
  const std::uint64_t h = state.height;
  Outcome out;
  out.gas_used = t.gas;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, tx::Spend>) {
          state.debit(t.sender, p.amount);
          state.credit(p.recipient, p.amount);
        } else if constexpr (std::is_same_v<T, tx::ContractCreate>) {
          const Address addr = Hasher().update(t.sender).update_u64(t.counter).finish();
          if (state.accounts.contains(addr) || state.contracts.contains(addr)) throw Error(Errc::AddressCollision);
          state.debit(t.sender, p.deposit + p.amount, Errc::InsufficientDeposit);
          Account& acct = state.touch(addr);
          acct.kind = AccountKind::Contract;
          acct.code_hash = p.code.hash();
          acct.balance = p.deposit + p.amount;
          state.contracts.emplace(addr, ContractRecord{t.sender, p.code});
          out.gas_used = run_contract(state, addr, t.sender, t.sender, p.code, p.call_data, t.gas).gas_used;
          out.created = addr;
        } else if constexpr (std::is_same_v<T, tx::ContractCall>) {
          auto it = state.contracts.find(p.contract);
          if (it == state.contracts.end()) throw Error(Errc::NotFound, "no contract at address");
          const ContractRecord rec = it->second;
          state.debit(t.sender, p.amount);
          state.credit(p.contract, p.amount);
          out.gas_used = run_contract(state, p.contract, t.sender, rec.owner, rec.code, p.call_data, t.gas).gas_used;
        } else if constexpr (std::is_same_v<T, tx::DataOnly>) {
        } else if constexpr (std::is_same_v<T, tx::NameClaim>) {
          if (state.names.contains(p.name)) throw Error(Errc::NameTaken, p.name);
          state.names.emplace(p.name, NameRecord{p.name, p.target, t.sender});
        } else if constexpr (std::is_same_v<T, tx::DeleteAccount>) {
          delete_account(state, p.target, t.sender);
        } else if constexpr (std::is_same_v<T, tx::ChannelOpen>) {
          if (p.counterparty_sig.empty()) throw Error(Errc::MissingSignature);
          if (!state.params.scheme->verify(p.counterparty, t.signing_bytes(), p.counterparty_sig))
            throw Error(Errc::BadSignature, "counterparty signature");
          out.created = channel::open_channel(state, t.sender, p.counterparty, p.deposit_self, p.deposit_counterparty,
                                              t.counter, true);
        } else if constexpr (std::is_same_v<T, tx::ChannelCooperativeClose>) {
          auto it = state.channels.find(p.final_state.channel_id);
          if (it != state.channels.end() && !it->second.is_party(t.sender)) throw Error(Errc::NotParty);
          channel::cooperative_close(state, p.final_state);
        } else if constexpr (std::is_same_v<T, tx::ChannelUnilateralClose>) {
          channel::unilateral_close(state, p.channel_id, t.sender, p.candidate, p.contract, h);
        } else if constexpr (std::is_same_v<T, tx::ChannelChallenge>) {
          channel::challenge(state, p.channel_id, t.sender, p.better, p.contract, h);
        } else if constexpr (std::is_same_v<T, tx::ChannelFinalize>) {
          channel::finalize(state, p.channel_id, h);
        } else if constexpr (std::is_same_v<T, tx::OracleRegister>) {
          out.created = oracle::register_question(state, t.sender, t.counter, p.question_hash, p.start, p.end, h);
        } else if constexpr (std::is_same_v<T, tx::OracleAnswer>) {
          oracle::answer(state, p.question_id, t.sender, p.answer, h);
        } else if constexpr (std::is_same_v<T, tx::OracleCounter>) {
          oracle::counterclaim(state, p.question_id, t.sender, h);
        } else if constexpr (std::is_same_v<T, tx::OracleVote>) {
          if (t.sender != miner) throw Error(Errc::NotMiner);
          oracle::vote(state, p.question_id, t.sender, p.answer, h);
        } else if constexpr (std::is_same_v<T, tx::OracleResolve>) {
          oracle::resolve(state, p.question_id, h);
        } else if constexpr (std::is_same_v<T, tx::StorageCreate>) {
          out.created = storage::create_contract(state, t.sender, t.counter, p.terms);
        } else if constexpr (std::is_same_v<T, tx::StorageProve>) {
          storage::prove_and_pay(state, p.contract_id, p.chunk, p.proof, h);
        } else if constexpr (std::is_same_v<T, tx::StorageClose>) {
          storage::close_contract(state, p.contract_id, t.sender);
        } else if constexpr (std::is_same_v<T, tx::ZoneTx>) {
          const Hash256 id = reward::zone_lifecycle(state, t.sender, t.counter, p.action);
          if (std::holds_alternative<reward::CreateZone>(p.action)) out.created = id;
        } else if constexpr (std::is_same_v<T, tx::EpochSettle>) {
          reward::settle_epoch(state, p.inputs);
        }
      },
      t.payload);
  return out;
}

}  // namespace

void check_tx(const State& state, const Tx& t) {
  check_format(state, t);
  if (!state.params.scheme->verify(t.sender, t.signing_bytes(), t.sig)) throw Error(Errc::BadSignature);
  const Account* acct = state.find(t.sender);
  const std::uint64_t expected = acct ? acct->counter + 1 : 1;
  if (t.counter != expected) throw Error(Errc::BadCounter);
  Amount available;
  if (acct) available = charge_maintenance(*acct, state.height, state.params.maintenance_rate).account.balance;
  if (available < t.fee) throw Error(Errc::InsufficientForFee);
}

Receipt apply_tx(State& state, const Tx& t, const Address& miner) {
  check_tx(state, t);
  Account& sender = state.touch(t.sender);
  sender.balance -= t.fee;
  sender.counter = t.counter;

  Receipt rc;
  rc.tx_hash = t.hash();
  rc.gas_price = t.gas_price;
  State snapshot = state;
  try {
    const Outcome out = run_payload(state, t, miner);
    rc.gas_used = t.runs_code() ? out.gas_used : t.gas;
    rc.created = out.created;
  } catch (const Error& e) {
    state = std::move(snapshot);
    rc.status = TxStatus::Reverted;
    rc.error = e.code();
    rc.gas_used = t.gas;
  }
  rc.fee_paid = Amount(rc.gas_used) * t.gas_price;
  rc.refund = t.fee - rc.fee_paid;
  rc.miner_credit = rc.fee_paid;
  state.credit(miner, rc.miner_credit);
  if (!rc.refund.is_zero()) state.credit(t.sender, rc.refund);
  return rc;
}

namespace {

void begin_block(State& state, std::uint64_t height, const Address& miner) {
  state.height = height;
  state.block_proofs.clear();
  const Amount reward = coinbase(height, state.params.emission);
  state.credit(miner, reward);
  state.minted_total += reward;
}

void fill_roots(BlockHeader& h, const State& state, const std::vector<Bytes>& tx_leaves) {
  const StateRoots r = state.roots();
  h.tx_root = merkle_root_or_zero(tx_leaves);
  h.account_root = r.account_root;
  h.name_root = r.name_root;
  h.wormhole_root = r.wormhole_root;
  h.oracle_open_root = r.oracle_open_root;
  h.oracle_answer_root = r.oracle_answer_root;
  h.proof_root = merkle_root_or_zero(state.block_proofs);
}

}  // namespace

std::vector<Receipt> apply_block(State& state, const Block& block) {
  const BlockHeader& hd = block.header;
  if (hd.height != state.height + 1) throw Error(Errc::BadHeight);
  if (hd.prev_hash != state.tip_hash) throw Error(Errc::BadLink);

  State work = state;
  begin_block(work, hd.height, hd.miner);
  std::vector<Receipt> receipts;
  receipts.reserve(block.transactions.size());
  for (const auto& t : block.transactions) receipts.push_back(apply_tx(work, t, hd.miner));

  BlockHeader expected = hd;
  fill_roots(expected, work, block.tx_leaves());
  if (expected.tx_root != hd.tx_root) throw Error(Errc::RootMismatch, "tx_root");
  if (expected.account_root != hd.account_root) throw Error(Errc::RootMismatch, "account_root");
  if (expected.name_root != hd.name_root) throw Error(Errc::RootMismatch, "name_root");
  if (expected.wormhole_root != hd.wormhole_root) throw Error(Errc::RootMismatch, "wormhole_root");
  if (expected.oracle_open_root != hd.oracle_open_root) throw Error(Errc::RootMismatch, "oracle_open_root");
  if (expected.oracle_answer_root != hd.oracle_answer_root) throw Error(Errc::RootMismatch, "oracle_answer_root");
  if (expected.proof_root != hd.proof_root) throw Error(Errc::RootMismatch, "proof_root");

  work.block_proofs.clear();
  work.tip_hash = hd.hash();
  state = std::move(work);
  return receipts;
}

BlockTemplate assemble_block(const State& state, const Address& miner, const std::vector<Tx>& candidates) {
  BlockTemplate out;
  out.post_state = state;
  State& work = out.post_state;
  BlockHeader& hd = out.block.header;
  hd.height = state.height + 1;
  hd.prev_hash = state.tip_hash;
  hd.miner = miner;
  begin_block(work, hd.height, miner);

  std::vector<Tx> pending = candidates;
  bool progress = true;
  while (progress && !pending.empty()) {
    progress = false;
    std::vector<Tx> deferred;
    for (auto& t : pending) {
      try {
        out.receipts.push_back(apply_tx(work, t, miner));
        out.block.transactions.push_back(std::move(t));
        progress = true;
      } catch (const Error&) {
        deferred.push_back(std::move(t));
      }
    }
    pending = std::move(deferred);
  }
  out.skipped = std::move(pending);
  fill_roots(hd, work, out.block.tx_leaves());
  work.block_proofs.clear();
  return out;
}

void order_by_fee_density(std::vector<Tx>& txs) {
  struct Key {
    std::uint64_t fee;
    std::uint64_t size;
    Hash256 hash;
  };
  std::vector<std::pair<Key, Tx>> keyed;
  keyed.reserve(txs.size());
  for (auto& t : txs) {
    const Bytes enc = t.encode();
    keyed.push_back({Key{t.fee.base_units(), enc.size(), sha256(enc)}, std::move(t)});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    const auto lhs = static_cast<unsigned __int128>(a.first.fee) * b.first.size;
    const auto rhs = static_cast<unsigned __int128>(b.first.fee) * a.first.size;
    if (lhs != rhs) return lhs > rhs;
    return a.first.hash < b.first.hash;
  });
  txs.clear();
  for (auto& [k, t] : keyed) txs.push_back(std::move(t));
}

// --- genesis ---------------------------------------------------------------

namespace {

State base_state(const GenesisConfig& config) {
  config.params.pow.validate();
  State s;
  s.params = config.params;
  Amount total = config.pool_endowment;
  for (const auto& a : config.accounts) {
    if (s.accounts.contains(a.address)) throw Error(Errc::BadFormat, "duplicate genesis account");
    s.credit(a.address, a.balance);
    total += a.balance;
  }
  s.genesis_total = total;
  s.pool.pool_balance = config.pool_endowment;
  s.pool.q = config.params.reward_q_initial;
  s.pool.q_prev = config.params.reward_q_initial;
  s.pool.alpha_step = config.params.reward_alpha;
  s.pool.mu = config.params.reward_mu;
  return s;
}

}  // namespace

Block genesis_block(const GenesisConfig& config) {
  const State s = base_state(config);
  Block b;
  b.header.miner = config.founder;
  fill_roots(b.header, s, {});
  mine_header(b.header, std::nullopt, config.params.pow, config.params.pow_nonce_budget);
  return b;
}

State genesis_state(const GenesisConfig& config) {
  State s = base_state(config);
  s.tip_hash = genesis_block(config).hash();
  return s;
}

}  // namespace dsdin
