// dsdin: command-line front end over a single-node chain kept in --state-dir,
// plus the multi-node simulator and the optimizer kernels.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dsdin/bp.hpp"
#include "dsdin/codec.hpp"
#include "dsdin/config.hpp"
#include "dsdin/learning.hpp"
#include "dsdin/sim.hpp"
#include "dsdin/templates.hpp"

namespace fs = std::filesystem;
using namespace dsdin;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error(Errc::NotFound, "cannot read " + p.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void dump(const fs::path& p, const Bytes& data) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!f) throw Error(Errc::NotFound, "cannot write " + p.string());
}

Bytes as_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

Address identity(const std::string& token) {
  if (token.size() == 64) return Hash256::from_hex(token);
  return KeyPair::from_name(token).address();
}

std::vector<std::int64_t> words(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(std::stoll(item));
  return out;
}

vm::Program program_from(const std::string& spec) {
  if (fs::exists(spec)) return vm::assemble(slurp(spec));
  return vm::templates::by_name(spec);
}

bool yes_no(const std::string& s) {
  if (s == "yes") return true;
  if (s == "no") return false;
  throw Error(Errc::BadFormat, "expected yes or no, got '" + s + "'");
}

// Chain persisted as length-prefixed blocks; pending transactions alongside.
class Chain {
 public:
  Chain(const NetworkConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {
    const GenesisConfig g = cfg_.genesis();
    genesis_ = genesis_block(g);
    state_ = genesis_state(g);
    headers_.push_back(genesis_.header);
    if (fs::exists(dir_ / "chain.bin")) {
      const std::string raw = slurp(dir_ / "chain.bin");
      Reader r(ByteView(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
      while (!r.done()) {
        Block b = Block::decode(r.bytes());
        validate_header(b.header, headers_.back(), cfg_.params.pow);
        apply_block(state_, b);
        headers_.push_back(b.header);
        blocks_.push_back(std::move(b));
      }
    }
    if (fs::exists(dir_ / "mempool.bin")) {
      const std::string raw = slurp(dir_ / "mempool.bin");
      Reader r(ByteView(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
      while (!r.done()) pending_.push_back(Tx::decode(r.bytes()));
    }
  }

  static void init(const fs::path& dir) {
    fs::create_directories(dir);
    fs::remove(dir / "chain.bin");
    fs::remove(dir / "mempool.bin");
  }

  const State& state() const { return state_; }
  const Block& genesis() const { return genesis_; }
  const BlockHeader& tip() const { return headers_.back(); }

  std::uint64_t next_counter(const Address& a) const {
    const Account* acct = state_.find(a);
    std::uint64_t next = (acct ? acct->counter : 0) + 1;
    for (const auto& t : pending_)
      if (t.sender == a) next = std::max(next, t.counter + 1);
    return next;
  }

  Tx make(const std::string& who, Payload payload, std::uint64_t gas, std::uint64_t price) const {
    const KeyPair k = KeyPair::from_name(who);
    return make_tx(k, next_counter(k.address()), gas, price, std::move(payload));
  }

  // Dry-runs the transaction on top of the pending set and queues it when it
  // would apply cleanly.
  Receipt submit(const Tx& t) {
    const Amount need = t.fee + outlay(t.payload);
    if (state_.balance_of(t.sender) < need)
      throw Error(Errc::InsufficientFunds,
                  "need " + need.str() + " base units, have " + state_.balance_of(t.sender).str());
    std::vector<Tx> all = pending_;
    all.push_back(t);
    const BlockTemplate tmpl = assemble_block(state_, Address{}, all);
    const Hash256 h = t.hash();
    for (const auto& r : tmpl.receipts) {
      if (r.tx_hash != h) continue;
      if (r.status == TxStatus::Reverted) throw Error(*r.error, "transaction would revert");
      pending_.push_back(t);
      save_pending();
      return r;
    }
    check_tx(tmpl.post_state, t);
    throw Error(Errc::BadFormat, "transaction not applicable");
  }

  std::vector<Receipt> mine(const std::string& miner_name) {
    const Address miner = KeyPair::from_name(miner_name).address();
    std::vector<Tx> candidates = pending_;
    order_by_fee_density(candidates);
    BlockTemplate tmpl = assemble_block(state_, miner, candidates);
    mine_header(tmpl.block.header, headers_.back(), cfg_.params.pow, cfg_.params.pow_nonce_budget);
    state_ = std::move(tmpl.post_state);
    state_.tip_hash = tmpl.block.hash();
    headers_.push_back(tmpl.block.header);
    Writer w;
    w.bytes(tmpl.block.encode());
    std::ofstream f(dir_ / "chain.bin", std::ios::binary | std::ios::app);
    const Bytes rec = std::move(w).take();
    f.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
    pending_ = tmpl.skipped;
    save_pending();
    blocks_.push_back(tmpl.block);
    return tmpl.receipts;
  }

 private:
  static Amount outlay(const Payload& p) {
    return std::visit(
        [](const auto& x) -> Amount {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, tx::Spend>) return x.amount;
          if constexpr (std::is_same_v<T, tx::ContractCreate>) return x.deposit + x.amount;
          if constexpr (std::is_same_v<T, tx::ContractCall>) return x.amount;
          if constexpr (std::is_same_v<T, tx::ChannelOpen>) return x.deposit_self;
          if constexpr (std::is_same_v<T, tx::StorageCreate>) return x.terms.escrow;
          return Amount{};
        },
        p);
  }

  void save_pending() const {
    Writer w;
    for (const auto& t : pending_) w.bytes(t.encode());
    dump(dir_ / "mempool.bin", std::move(w).take());
  }

  NetworkConfig cfg_;
  fs::path dir_;
  Block genesis_;
  State state_;
  std::vector<BlockHeader> headers_;
  std::vector<Block> blocks_;
  std::vector<Tx> pending_;
};

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string state_dir = ".dsdin";
  std::uint64_t gas = 0;
  std::uint64_t price = 0;
};

NetworkConfig load_config(const Globals& g) {
  NetworkConfig cfg = g.config.empty() ? NetworkConfig{} : parse_config(slurp(g.config));
  if (g.seed) cfg.seed = *g.seed;
  if (g.price) cfg.gas_price = g.price;
  return cfg;
}

void print_receipt(const Receipt& r) { std::cout << r.to_line() << '\n'; }

fs::path state_file(const fs::path& dir, const Hash256& channel, std::uint64_t nonce) {
  return dir / "states" / (channel.hex().substr(0, 16) + "-" + std::to_string(nonce) + ".state");
}

channel::SignedState load_state(const std::string& path) {
  const Bytes raw = from_hex(std::string_view(slurp(path)).substr(0, slurp(path).find_first_of("\r\n")));
  Reader r(raw);
  auto s = channel::SignedState::decode(r);
  r.expect_done();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsdin protocol node, simulator and optimizer"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "simulation / training seed");
  app.add_option("--state-dir", g.state_dir, "directory holding chain.bin and mempool.bin");
  app.add_option("--gas", g.gas, "gas limit override");
  app.add_option("--gas-price", g.price, "gas price override");

  std::function<void()> action;
  auto with_chain = [&](auto fn) {
    return [&, fn] {
      const NetworkConfig cfg = load_config(g);
      Chain chain(cfg, g.state_dir);
      fn(cfg, chain);
    };
  };
  auto gas_for = [&](const NetworkConfig& cfg, bool code) { return g.gas ? g.gas : code ? cfg.contract_gas : cfg.default_gas; };
  auto submit = [&](Chain& chain, const Tx& t) {
    const Receipt r = chain.submit(t);
    std::cout << "queued " << t.kind_name() << " tx=" << t.hash().hex() << " counter=" << t.counter;
    if (r.created) std::cout << " id=" << r.created->hex();
    std::cout << '\n';
  };

  // keygen
  std::string name;
  auto* keygen = app.add_subcommand("keygen", "derive the deterministic key for a name");
  keygen->add_option("name", name)->required();
  keygen->callback([&] {
    const KeyPair k = KeyPair::from_name(name);
    std::cout << "name=" << name << " address=" << k.address().hex() << " seed=" << k.seed().hex() << '\n';
  });

  // genesis
  auto* gen = app.add_subcommand("genesis", "create a fresh chain in --state-dir");
  gen->callback([&] {
    const NetworkConfig cfg = load_config(g);
    Chain::init(g.state_dir);
    Chain chain(cfg, g.state_dir);
    std::cout << "genesis hash=" << chain.genesis().hash().hex() << " state_root=" << chain.state().roots().combined().hex()
              << '\n';
  });

  // mine
  std::string miner = "n0";
  std::uint64_t count = 1;
  auto* mine = app.add_subcommand("mine", "mine pending transactions into new blocks");
  mine->add_option("--miner", miner);
  mine->add_option("--blocks", count);
  mine->callback(with_chain([&](const NetworkConfig&, Chain& chain) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto receipts = chain.mine(miner);
      std::cout << "block height=" << chain.tip().height << " hash=" << chain.tip().hash().hex()
                << " txs=" << receipts.size() << '\n';
      for (const auto& r : receipts) print_receipt(r);
    }
  }));

  // balance
  auto* balance = app.add_subcommand("balance", "show an account balance");
  balance->add_option("name", name)->required();
  balance->callback(with_chain([&](const NetworkConfig&, Chain& chain) {
    const Address a = identity(name);
    const Account* acct = chain.state().find(a);
    std::cout << name << " balance=" << chain.state().balance_of(a).str() << " counter=" << (acct ? acct->counter : 0)
              << '\n';
  }));

  // send
  std::string from, to, amount_text;
  auto* send = app.add_subcommand("send", "transfer tokens");
  send->add_option("from", from)->required();
  send->add_option("to", to)->required();
  send->add_option("amount", amount_text)->required();
  send->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::Spend{identity(to), parse_amount(amount_text)}, gas_for(cfg, false), cfg.gas_price));
  }));

  // contract
  std::string code, contract_addr, deposit_text = "0", args_text;
  std::string call_amount = "0";
  auto* contract = app.add_subcommand("contract", "create or call contracts");
  contract->require_subcommand(1);
  auto* ccreate = contract->add_subcommand("create", "deploy a template or .asm file");
  ccreate->add_option("owner", from)->required();
  ccreate->add_option("code", code)->required();
  ccreate->add_option("--deposit", deposit_text);
  ccreate->add_option("--amount", call_amount);
  ccreate->add_option("--args", args_text, "comma separated constructor words");
  ccreate->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    tx::ContractCreate p;
    p.code = program_from(code);
    p.deposit = parse_amount(deposit_text);
    p.amount = parse_amount(call_amount);
    p.call_data = words(args_text);
    submit(chain, chain.make(from, p, gas_for(cfg, true), cfg.gas_price));
  }));
  auto* ccall = contract->add_subcommand("call", "call a deployed contract");
  ccall->add_option("caller", from)->required();
  ccall->add_option("contract", contract_addr)->required();
  ccall->add_option("--amount", call_amount);
  ccall->add_option("--args", args_text);
  ccall->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    tx::ContractCall p{Hash256::from_hex(contract_addr), parse_amount(call_amount), words(args_text)};
    submit(chain, chain.make(from, p, gas_for(cfg, true), cfg.gas_price));
  }));

  // name
  std::string label, target;
  auto* namecmd = app.add_subcommand("name", "name service");
  namecmd->require_subcommand(1);
  auto* nclaim = namecmd->add_subcommand("claim", "claim a name for a target");
  nclaim->add_option("owner", from)->required();
  nclaim->add_option("name", label)->required();
  nclaim->add_option("target", target)->required();
  nclaim->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::NameClaim{label, identity(target)}, gas_for(cfg, false), cfg.gas_price));
  }));
  auto* nresolve = namecmd->add_subcommand("resolve", "look up a name");
  nresolve->add_option("name", label)->required();
  nresolve->callback(with_chain([&](const NetworkConfig&, Chain& chain) {
    std::cout << label << " -> " << resolve_name(chain.state(), label).hex() << '\n';
  }));

  // channel
  std::string party_b, deposit_b = "0", channel_hex, state_path, peer, contract_spec, contract_state;
  std::uint64_t nonce = 0;
  std::string bal_a, bal_b;
  auto* chan = app.add_subcommand("channel", "state channels");
  chan->require_subcommand(1);
  auto find_channel = [](const Chain& chain, const std::string& hex) -> const channel::Channel& {
    auto it = chain.state().channels.find(Hash256::from_hex(hex));
    if (it == chain.state().channels.end()) throw Error(Errc::NotFound, "no channel " + hex);
    return it->second;
  };
  auto* copen = chan->add_subcommand("open", "open a channel signed by both parties");
  copen->add_option("a", from)->required();
  copen->add_option("b", party_b)->required();
  copen->add_option("deposit_a", deposit_text)->required();
  copen->add_option("deposit_b", deposit_b)->required();
  copen->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    Tx t = chain.make(from, tx::ChannelOpen{identity(party_b), parse_amount(deposit_text), parse_amount(deposit_b), {}},
                      gas_for(cfg, false), cfg.gas_price);
    std::get<tx::ChannelOpen>(t.payload).counterparty_sig = KeyPair::from_name(party_b).sign(t.signing_bytes());
    submit(chain, t);
  }));
  auto* cupdate = chan->add_subcommand("update", "co-sign an off-chain state and store it");
  cupdate->add_option("channel", channel_hex)->required();
  cupdate->add_option("a", from)->required();
  cupdate->add_option("b", party_b)->required();
  cupdate->add_option("nonce", nonce)->required();
  cupdate->add_option("balance_a", bal_a)->required();
  cupdate->add_option("balance_b", bal_b)->required();
  cupdate->add_option("--contract", contract_spec);
  cupdate->add_option("--state", contract_state, "comma separated contract words");
  cupdate->callback(with_chain([&](const NetworkConfig&, Chain& chain) {
    const channel::Channel& c = find_channel(chain, channel_hex);
    std::optional<Hash256> ch;
    if (!contract_spec.empty()) ch = program_from(contract_spec).hash();
    channel::SignedState s =
        channel::propose_update(c, nullptr, nonce, parse_amount(bal_a), parse_amount(bal_b), ch, words(contract_state));
    channel::sign_state(s, c, KeyPair::from_name(from), channel::Purpose::Update);
    channel::sign_state(s, c, KeyPair::from_name(party_b), channel::Purpose::Update);
    const fs::path out = state_file(g.state_dir, c.id, nonce);
    fs::create_directories(out.parent_path());
    Writer w;
    s.encode(w);
    const std::string hex = to_hex(std::move(w).take()) + "\n";
    dump(out, as_bytes(hex));
    std::cout << "state nonce=" << nonce << " file=" << out.string() << '\n';
  }));
  auto* cclose = chan->add_subcommand("close", "close cooperatively (--cooperative PEER) or unilaterally");
  cclose->add_option("channel", channel_hex)->required();
  cclose->add_option("closer", from)->required();
  cclose->add_option("--state", state_path, "latest co-signed state file");
  cclose->add_option("--cooperative", peer, "peer that countersigns the close");
  cclose->add_option("--contract", contract_spec, "program to reveal for a contract state");
  cclose->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    const channel::Channel& c = find_channel(chain, channel_hex);
    std::optional<channel::SignedState> cand;
    if (!state_path.empty()) cand = load_state(state_path);
    if (!peer.empty()) {
      channel::SignedState s;
      s.channel_id = c.id;
      s.nonce = (cand ? cand->nonce : 0) + 1;
      s.balance_a = cand ? cand->balance_a : c.deposit_a;
      s.balance_b = cand ? cand->balance_b : c.deposit_b;
      channel::sign_state(s, c, KeyPair::from_name(from), channel::Purpose::Close);
      channel::sign_state(s, c, KeyPair::from_name(peer), channel::Purpose::Close);
      submit(chain, chain.make(from, tx::ChannelCooperativeClose{s}, gas_for(cfg, false), cfg.gas_price));
    } else {
      std::optional<vm::Program> prog;
      if (!contract_spec.empty()) prog = program_from(contract_spec);
      submit(chain, chain.make(from, tx::ChannelUnilateralClose{c.id, cand, prog}, gas_for(cfg, false), cfg.gas_price));
    }
  }));
  auto* cchallenge = chan->add_subcommand("challenge", "contest a pending close with a newer state");
  cchallenge->add_option("channel", channel_hex)->required();
  cchallenge->add_option("challenger", from)->required();
  cchallenge->add_option("state", state_path)->required();
  cchallenge->add_option("--contract", contract_spec);
  cchallenge->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    const channel::Channel& c = find_channel(chain, channel_hex);
    std::optional<vm::Program> prog;
    if (!contract_spec.empty()) prog = program_from(contract_spec);
    submit(chain, chain.make(from, tx::ChannelChallenge{c.id, load_state(state_path), prog}, gas_for(cfg, false),
                             cfg.gas_price));
  }));
  auto* cfinal = chan->add_subcommand("finalize", "settle a close after its countdown");
  cfinal->add_option("channel", channel_hex)->required();
  cfinal->add_option("sender", from)->required();
  cfinal->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::ChannelFinalize{find_channel(chain, channel_hex).id}, gas_for(cfg, false),
                             cfg.gas_price));
  }));
  auto* cshow = chan->add_subcommand("show", "print on-chain channel status");
  cshow->add_option("channel", channel_hex)->required();
  cshow->callback(with_chain([&](const NetworkConfig&, Chain& chain) {
    const channel::Channel& c = find_channel(chain, channel_hex);
    static const char* names[] = {"open", "closing", "closed"};
    std::cout << "channel " << c.id.hex() << " status=" << names[static_cast<int>(c.status)]
              << " deadline=" << c.deadline_height << " settled_nonce=" << c.settled_nonce << '\n';
  }));

  // oracle
  std::string question, qid, bit;
  std::string start_text, end_text;
  auto* orc = app.add_subcommand("oracle", "yes/no oracles");
  orc->require_subcommand(1);
  auto height_of = [](const Chain& chain, const std::string& t) -> std::uint64_t {
    if (!t.empty() && t[0] == '+') return chain.state().height + std::stoull(t.substr(1));
    return std::stoull(t);
  };
  auto* oask = orc->add_subcommand("ask", "register a question (heights may be +relative)");
  oask->add_option("asker", from)->required();
  oask->add_option("question", question)->required();
  oask->add_option("start", start_text)->required();
  oask->add_option("end", end_text)->required();
  oask->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    tx::OracleRegister p{sha256(question), height_of(chain, start_text), height_of(chain, end_text)};
    if (p.end > p.start) {
      const Tx t = chain.make(from, p, gas_for(cfg, false), cfg.gas_price);
      const Amount need = t.fee + cfg.params.oracle_deposit_rate * (p.end - p.start);
      const Amount have = chain.state().balance_of(t.sender);
      if (have < need) throw Error(Errc::InsufficientFunds, "need " + need.str() + " base units, have " + have.str());
      submit(chain, t);
    } else {
      submit(chain, chain.make(from, p, gas_for(cfg, false), cfg.gas_price));
    }
  }));
  auto* oanswer = orc->add_subcommand("answer", "answer as the asker");
  oanswer->add_option("asker", from)->required();
  oanswer->add_option("question_id", qid)->required();
  oanswer->add_option("answer", bit)->required();
  oanswer->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::OracleAnswer{Hash256::from_hex(qid), yes_no(bit)}, gas_for(cfg, false), cfg.gas_price));
  }));
  auto* ocounter = orc->add_subcommand("counter", "dispute an answer with an equal deposit");
  ocounter->add_option("challenger", from)->required();
  ocounter->add_option("question_id", qid)->required();
  ocounter->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::OracleCounter{Hash256::from_hex(qid)}, gas_for(cfg, false), cfg.gas_price));
  }));
  auto* ovote = orc->add_subcommand("vote", "miner ballot on a contested question");
  ovote->add_option("miner", from)->required();
  ovote->add_option("question_id", qid)->required();
  ovote->add_option("answer", bit)->required();
  ovote->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::OracleVote{Hash256::from_hex(qid), yes_no(bit)}, gas_for(cfg, false), cfg.gas_price));
  }));
  auto* oresolve = orc->add_subcommand("resolve", "settle deposits once windows pass");
  oresolve->add_option("sender", from)->required();
  oresolve->add_option("question_id", qid)->required();
  oresolve->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    submit(chain, chain.make(from, tx::OracleResolve{Hash256::from_hex(qid)}, gas_for(cfg, false), cfg.gas_price));
  }));
  auto* oread = orc->add_subcommand("read", "print the current reading");
  oread->add_option("question_id", qid)->required();
  oread->callback(with_chain([&](const NetworkConfig&, Chain& chain) {
    static const char* names[] = {"no", "yes", "pending", "burned"};
    const Hash256 id = Hash256::from_hex(qid);
    const auto& q = chain.state().oracles.at(id);
    std::cout << "oracle " << qid << " phase=" << oracle::phase_name(q.phase)
              << " reading=" << names[static_cast<int>(oracle::read_answer(chain.state(), id))]
              << " escrowed=" << q.escrowed.str() << " returned=" << q.returned.str() << " burned=" << q.burned.str()
              << '\n';
  }));

  // storage
  std::string file;
  std::uint64_t chunk_size = storage::kDefaultChunkSize, period = 1, bytes = 0;
  std::string reward_text = "0", escrow_text = "0";
  auto* sto = app.add_subcommand("storage", "proof-of-storage contracts");
  sto->require_subcommand(1);
  auto* scommit = sto->add_subcommand("commit", "print the chunk Merkle commitment of a file");
  scommit->add_option("file", file)->required()->check(CLI::ExistingFile);
  scommit->add_option("--chunk-size", chunk_size);
  scommit->callback([&] {
    const std::string data = slurp(file);
    const auto c = storage::commit_data(as_bytes(data), chunk_size);
    std::cout << "root=" << c.data_root.hex() << " chunks=" << c.chunks.size() << " data_len=" << c.data_len << '\n';
  });
  auto* screate = sto->add_subcommand("create", "escrow payment for storing a file");
  screate->add_option("payer", from)->required();
  screate->add_option("provider", to)->required();
  screate->add_option("file", file)->required()->check(CLI::ExistingFile);
  screate->add_option("--chunk-size", chunk_size);
  screate->add_option("--period", period);
  screate->add_option("--reward", reward_text);
  screate->add_option("--escrow", escrow_text);
  screate->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    const auto c = storage::commit_data(as_bytes(slurp(file)), chunk_size);
    storage::CreateTerms terms{identity(to), c.data_root, c.chunks.size(), chunk_size, c.data_len, period,
                               parse_amount(reward_text), parse_amount(escrow_text)};
    submit(chain, chain.make(from, tx::StorageCreate{terms}, gas_for(cfg, false), cfg.gas_price));
  }));
  std::string storage_id;
  auto* sprove = sto->add_subcommand("prove", "answer the current challenge for a contract");
  sprove->add_option("provider", from)->required();
  sprove->add_option("contract", storage_id)->required();
  sprove->add_option("file", file)->required()->check(CLI::ExistingFile);
  sprove->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    const Hash256 id = Hash256::from_hex(storage_id);
    const auto& sc = chain.state().storage.at(id);
    const auto c = storage::commit_data(as_bytes(slurp(file)), sc.chunk_size);
    const auto idx = storage::challenge_index(chain.tip().hash(), id, c.chunks.size());
    std::cout << "challenge chunk=" << idx << " at height=" << chain.tip().height + 1 << '\n';
    submit(chain, chain.make(from, tx::StorageProve{id, c.chunks[idx], merkle_prove(c.chunks, idx)}, gas_for(cfg, false),
                             cfg.gas_price));
  }));
  auto* squote = sto->add_subcommand("quote", "retrieval price for a byte count");
  squote->add_option("bytes", bytes)->required();
  squote->callback([&] { std::cout << "quote bytes=" << bytes << " price=" << storage::retrieval_quote(bytes).str() << '\n'; });

  // epoch
  bool apply = false;
  auto* epoch = app.add_subcommand("epoch", "reward pool epochs");
  epoch->require_subcommand(1);
  auto* erun = epoch->add_subcommand("run", "compute (and with --apply settle) an epoch from a factors file");
  erun->add_option("factors", file)->required()->check(CLI::ExistingFile);
  erun->add_flag("--apply", apply, "mine to the boundary and settle on chain");
  erun->add_option("--miner", miner);
  erun->callback(with_chain([&](const NetworkConfig& cfg, Chain& chain) {
    const auto inputs = reward::parse_epoch_inputs(slurp(file), [](std::string_view t) { return identity(std::string(t)); });
    if (!apply) {
      // Preview: every listed zone exists with its listed users as members.
      std::map<Hash256, reward::Zone> zones = chain.state().zones;
      for (const auto& z : inputs.zones) zones[z.zone].id = z.zone;
      for (const auto& u : inputs.users) zones[u.zone].members.insert(u.member);
      std::cout << reward::compute_epoch(chain.state().pool, zones, inputs).to_text();
      return;
    }
    while ((chain.state().height + 1) % cfg.params.blocks_per_epoch != 0) chain.mine(miner);
    const auto report = reward::compute_epoch(chain.state().pool, chain.state().zones, inputs);
    submit(chain, chain.make(miner, tx::EpochSettle{inputs}, gas_for(cfg, false), cfg.gas_price));
    for (const auto& r : chain.mine(miner)) print_receipt(r);
    std::cout << report.to_text();
  }));

  // optimizer
  std::string mode = "q";
  std::size_t episodes = 500, steps = 100;
  double gamma = 0.5, epsilon = 0.5;
  auto* optc = app.add_subcommand("optimizer", "device optimizer kernels");
  optc->require_subcommand(1);
  auto* otrain = optc->add_subcommand("train", "tabular TD control on an MDP file");
  otrain->add_option("mdp", file)->required()->check(CLI::ExistingFile);
  otrain->add_option("--mode", mode, "q or sarsa")->check(CLI::IsMember({"q", "sarsa"}));
  otrain->add_option("--episodes", episodes);
  otrain->add_option("--steps", steps);
  otrain->add_option("--gamma", gamma);
  otrain->add_option("--epsilon", epsilon);
  otrain->callback([&] {
    const opt::TabularMdp mdp = opt::parse_mdp(slurp(file));
    opt::TrainConfig tc;
    tc.mode = mode == "q" ? opt::Mode::OffPolicy : opt::Mode::OnPolicy;
    tc.episodes = episodes;
    tc.steps_per_episode = steps;
    tc.seed = g.seed.value_or(1);
    tc.gamma = gamma;
    tc.epsilon = epsilon;
    const opt::QTable q = opt::train(mdp, opt::QTable(mdp.states, mdp.actions), tc);
    const opt::QTable star = opt::value_iteration(mdp, gamma);
    std::cout << std::fixed << std::setprecision(6);
    double gap = 0;
    for (std::size_t s = 0; s < mdp.states; ++s) {
      std::cout << "state " << s;
      for (std::size_t a = 0; a < mdp.actions; ++a) {
        std::cout << ' ' << q.at(s, a);
        gap = std::max(gap, std::abs(q.at(s, a) - star.at(s, a)));
      }
      std::cout << " greedy=" << q.greedy(s) << " optimal=" << star.greedy(s) << '\n';
    }
    std::cout << "max_gap " << gap << " policy_match " << (q.greedy_policy() == star.greedy_policy() ? "yes" : "no") << '\n';
  });
  auto* obp = optc->add_subcommand("bp", "exact marginals on a factor tree");
  obp->add_option("factors", file)->required()->check(CLI::ExistingFile);
  obp->callback([&] {
    const auto marg = opt::bp_marginals(opt::parse_factor_tree(slurp(file)));
    std::cout << std::setprecision(12);
    for (std::size_t v = 0; v < marg.size(); ++v) {
      std::cout << "var " << v;
      for (double p : marg[v]) std::cout << ' ' << p;
      std::cout << '\n';
    }
  });

  // sim
  bool quiet = false;
  auto* simc = app.add_subcommand("sim", "deterministic multi-node simulator");
  simc->require_subcommand(1);
  auto* srun = simc->add_subcommand("run", "execute a scenario file");
  srun->add_option("scenario", file)->required()->check(CLI::ExistingFile);
  srun->add_flag("--quiet", quiet, "print only the summary");
  srun->callback([&] {
    const NetworkConfig cfg = load_config(g);
    const auto r = sim::run(cfg, slurp(file), fs::path(file).parent_path());
    if (!quiet) {
      std::cout << r.log_text();
      for (const auto& line : r.receipts) std::cout << line << '\n';
      for (const auto& c : r.channels)
        std::cout << "channel " << c.alias << " status=" << c.status << " settled_nonce=" << c.settled_nonce << '\n';
    }
    std::cout << "height=" << r.head_height << " state_root=" << r.final_state_root.hex() << " events=" << r.events
              << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
