#include "dsdin/sim.hpp"

#include <array>
#include <deque>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <variant>

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"
#include "dsdin/learning.hpp"
#include "dsdin/templates.hpp"

namespace dsdin::sim {

std::string SimResult::log_text() const {
  std::string out;
  for (const auto& l : log) out += l + '\n';
  return out;
}

namespace {

using channel::SignedState;

enum class ChanKind : std::uint8_t { UpdateProposal, UpdateAck, CloseRequest };

struct BlockMsg {
  Bytes data;
};
struct TxMsg {
  Bytes data;
};
struct GetBlock {
  Hash256 hash;
};
struct ChanMsg {
  std::string chan;
  int to_party = 0;
  ChanKind kind = ChanKind::UpdateProposal;
  SignedState state;
};
using Message = std::variant<BlockMsg, TxMsg, GetBlock, ChanMsg>;

struct Deliver {
  std::size_t from = 0;
  std::size_t to = 0;
  Message msg;
};
struct RunCommand {
  std::size_t index = 0;
};
struct RetryProposal {
  std::string chan;
  int party = 0;
  std::uint64_t nonce = 0;
};
struct RetryClose {
  std::string chan;
  int party = 0;
  std::uint32_t attempt = 0;
};
struct AutoMine {
  std::uint64_t interval = 1;
  std::uint64_t remaining = 0;
};
using EventBody = std::variant<RunCommand, Deliver, RetryProposal, RetryClose, AutoMine>;

struct Event {
  std::uint64_t time = 0;
  std::uint64_t seq = 0;
  EventBody body;
};
struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
  }
};

struct Entry {
  Block block;
  State state;
  std::vector<Receipt> receipts;
};

struct Node {
  std::size_t index = 0;
  std::string name;
  std::map<Hash256, Entry> blocks;
  Hash256 head;
  std::map<Hash256, Tx> mempool;
  std::map<Hash256, std::vector<Bytes>> orphans;
  std::map<Hash256, Hash256> orphan_parent;
  bool online = true;
  int group = 0;

  const Entry& tip() const { return blocks.at(head); }
  const State& state() const { return tip().state; }
};

struct UpdateRequest {
  Amount a;
  Amount b;
  std::optional<Hash256> contract_hash;
  std::vector<std::int64_t> contract_state;
};

struct Actor {
  int party = 0;
  std::string identity;
  std::size_t home = 0;
  // Durable across crashes.
  std::optional<SignedState> latest;
  std::map<std::uint64_t, SignedState> history;
  std::map<Hash256, vm::Program> programs;
  std::optional<Tx> challenge_tx;
  std::optional<Tx> finalize_tx;
  std::optional<Tx> close_tx;
  // Volatile.
  bool online = true;
  bool closing = false;
  std::optional<SignedState> pending;
  std::optional<UpdateRequest> pending_request;
  std::deque<UpdateRequest> queue;
  std::optional<SignedState> close_offer;

  std::uint64_t nonce() const { return latest ? latest->nonce : 0; }
};

struct ChannelInfo {
  std::string alias;
  channel::Channel proto;
  std::array<Actor, 2> actors;
  std::uint64_t max_honest = 0;
  bool any_honest = false;
  std::optional<int> adversary;
};

struct StorageInfo {
  Hash256 id;
  std::string payer;
  std::string provider;
  storage::Commitment data;
};

bool same_content(const SignedState& x, const SignedState& y) {
  return x.channel_id == y.channel_id && x.nonce == y.nonce && x.balance_a == y.balance_a &&
         x.balance_b == y.balance_b && x.contract_hash == y.contract_hash && x.contract_state == y.contract_state;
}

std::string short_hex(const Hash256& h) { return h.hex().substr(0, 12); }

class Simulator {
 public:
  Simulator(const NetworkConfig& cfg, std::string_view scenario, std::filesystem::path base)
      : cfg_(cfg), base_(std::move(base)), rng_(cfg.seed) {
    parse_scenario(scenario);
    const GenesisConfig g = cfg_.genesis();
    const Block genesis = genesis_block(g);
    State st = genesis_state(g);
    if (cfg_.nodes == 0) throw Error(Errc::ScenarioError, "at least one node is required");
    nodes_.resize(cfg_.nodes);
    for (std::size_t i = 0; i < cfg_.nodes; ++i) {
      Node& n = nodes_[i];
      n.index = i;
      n.name = "n" + std::to_string(i);
      n.head = genesis.hash();
      n.blocks.emplace(n.head, Entry{genesis, st, {}});
    }
    log("genesis hash=" + short_hex(genesis.hash()) + " root=" + short_hex(st.roots().combined()));
  }

  SimResult run() {
    for (std::size_t i = 0; i < commands_.size(); ++i) push(commands_[i].time, RunCommand{i});
    while (!queue_.empty()) {
      if (++events_ > budget_) throw Error(Errc::ScenarioError, "event budget of " + std::to_string(budget_) + " exhausted");
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      std::visit([&](auto& body) { handle(body); }, ev.body);
    }
    return finish();
  }

 private:
  struct Command {
    std::uint64_t time = 0;
    std::size_t line = 0;
    std::vector<std::string> args;
  };

  // --- plumbing ------------------------------------------------------------

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::ScenarioError, "line " + std::to_string(line_) + ": " + why);
  }

  void log(const std::string& text) { log_.push_back("t=" + std::to_string(now_) + " " + text); }

  void push(std::uint64_t time, EventBody body) { queue_.push(Event{time, seq_++, std::move(body)}); }

  void parse_scenario(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::uint64_t last = 0;
    std::optional<std::uint64_t> budget;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
      std::istringstream ls(line);
      std::vector<std::string> tok;
      for (std::string t; ls >> t;) tok.push_back(t);
      if (tok.empty()) continue;
      line_ = lineno;
      if (tok[0] == "set") {
        if (tok.size() != 3 || tok[1] == "seed") fail("set takes a key (not seed) and a value");
        if (!commands_.empty()) fail("set must precede timed commands");
        try {
          cfg_.set(tok[1], tok[2]);
        } catch (const Error& e) {
          fail(e.what());
        }
        continue;
      }
      if (tok[0] == "budget") {
        if (tok.size() != 2) fail("budget takes one count");
        budget = number(tok[1]);
        continue;
      }
      if (tok.size() < 2) fail("expected `time command args...`");
      const std::uint64_t t = number(tok[0]);
      if (t < last) fail("times must be non-decreasing");
      last = t;
      commands_.push_back({t, lineno, std::vector<std::string>(tok.begin() + 1, tok.end())});
    }
    budget_ = budget.value_or(cfg_.event_budget);
  }

  std::uint64_t number(const std::string& s) const {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("bad number '" + s + "'");
    }
  }

  const KeyPair& key(const std::string& name) {
    auto it = keys_.find(name);
    if (it == keys_.end()) it = keys_.emplace(name, KeyPair::from_name(name)).first;
    return it->second;
  }

  Address address(const std::string& name) {
    if (name.size() == 64) return Hash256::from_hex(name);
    return key(name).address();
  }

  std::size_t node_index(const std::string& name) const {
    if (name.size() >= 2 && name[0] == 'n' && std::isdigit(static_cast<unsigned char>(name[1]))) {
      const auto i = std::stoull(name.substr(1));
      if (i < nodes_.size()) return i;
    }
    fail("unknown node '" + name + "'");
  }

  std::size_t home_of(const std::string& identity) const {
    if (auto it = cfg_.homes.find(identity); it != cfg_.homes.end()) return it->second % nodes_.size();
    if (identity.size() >= 2 && identity[0] == 'n' && std::isdigit(static_cast<unsigned char>(identity[1])))
      return node_index(identity);
    std::size_t i = 0;
    for (const auto& [name, bal] : cfg_.accounts) {
      if (name == identity) return i % nodes_.size();
      ++i;
    }
    return 0;
  }

  // --- networking ----------------------------------------------------------

  void send(std::size_t from, std::size_t to, Message msg) {
    if (nodes_[from].group != nodes_[to].group) return;
    if (cfg_.drop_rate > 0 && opt::unit_draw(rng_) < cfg_.drop_rate) return;
    const std::uint64_t span = cfg_.latency_max >= cfg_.latency_min ? cfg_.latency_max - cfg_.latency_min + 1 : 1;
    const std::uint64_t delay = cfg_.latency_min + opt::index_draw(rng_, span);
    push(now_ + delay, Deliver{from, to, std::move(msg)});
  }

  void broadcast(std::size_t from, const Message& msg, std::optional<std::size_t> except = std::nullopt) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (i != from && i != except) send(from, i, msg);
  }

  void handle(Deliver& d) {
    Node& n = nodes_[d.to];
    if (!n.online) return;
    std::visit(
        [&](auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, BlockMsg>) {
            accept_block(d.to, m.data, d.from);
          } else if constexpr (std::is_same_v<T, TxMsg>) {
            receive_tx(d.to, m.data);
          } else if constexpr (std::is_same_v<T, GetBlock>) {
            if (auto it = n.blocks.find(m.hash); it != n.blocks.end()) send(d.to, d.from, BlockMsg{it->second.block.encode()});
          } else {
            deliver_channel(m);
          }
        },
        d.msg);
  }

  // --- chain ---------------------------------------------------------------

  std::uint64_t next_counter(std::size_t node, const Address& sender) const {
    const Node& n = nodes_[node];
    const Account* acct = n.state().find(sender);
    std::uint64_t next = (acct ? acct->counter : 0) + 1;
    for (const auto& [h, t] : n.mempool)
      if (t.sender == sender && t.counter >= next) next = t.counter + 1;
    return next;
  }

  Tx make(std::size_t node, const std::string& who, Payload payload, std::optional<std::uint64_t> gas = {}) {
    const KeyPair& k = key(who);
    const bool code = std::holds_alternative<tx::ContractCreate>(payload) || std::holds_alternative<tx::ContractCall>(payload);
    std::uint64_t g = gas.value_or(code ? cfg_.contract_gas : cfg_.default_gas);
    if (const auto* d = std::get_if<tx::DataOnly>(&payload)) g = d->payload.size();
    return make_tx(k, next_counter(node, k.address()), g, cfg_.gas_price, std::move(payload));
  }

  void submit(std::size_t node, const Tx& t) {
    Node& n = nodes_[node];
    const Hash256 h = t.hash();
    n.mempool.emplace(h, t);
    log(n.name + " submit " + t.kind_name() + " tx=" + short_hex(h) + " counter=" + std::to_string(t.counter));
    broadcast(node, TxMsg{t.encode()});
  }

  void receive_tx(std::size_t node, const Bytes& data) {
    Node& n = nodes_[node];
    Tx t;
    try {
      t = Tx::decode(data);
    } catch (const Error&) {
      return;
    }
    const Hash256 h = t.hash();
    if (n.mempool.contains(h)) return;
    const Account* acct = n.state().find(t.sender);
    if (acct && t.counter <= acct->counter) return;
    n.mempool.emplace(h, std::move(t));
    broadcast(node, TxMsg{data});
  }

  bool ensure_submitted(std::size_t node, const Tx& t) {
    Node& n = nodes_[node];
    const Account* acct = n.state().find(t.sender);
    if (acct && t.counter <= acct->counter) return false;
    const Hash256 h = t.hash();
    if (!n.mempool.contains(h)) n.mempool.emplace(h, t);
    broadcast(node, TxMsg{t.encode()});
    return true;
  }

  void mine(std::size_t node) {
    Node& n = nodes_[node];
    if (!n.online) {
      log(n.name + " mine skipped (offline)");
      return;
    }
    const Entry& tip = n.tip();
    const Address miner = key(n.name).address();
    std::vector<Tx> candidates;
    for (const auto& [h, t] : n.mempool) {
      // Ballots only count in the voter's own blocks.
      if (std::holds_alternative<tx::OracleVote>(t.payload) && t.sender != miner) continue;
      candidates.push_back(t);
    }
    order_by_fee_density(candidates);
    BlockTemplate tmpl = assemble_block(tip.state, miner, candidates);
    try {
      mine_header(tmpl.block.header, tip.block.header, cfg_.params.pow, cfg_.params.pow_nonce_budget);
    } catch (const Error& e) {
      log(n.name + " mine failed: " + e.what());
      return;
    }
    std::size_t reverted = 0;
    for (const auto& r : tmpl.receipts) reverted += r.status == TxStatus::Reverted;
    log(n.name + " mine height=" + std::to_string(tmpl.block.header.height) + " hash=" + short_hex(tmpl.block.hash()) +
        " txs=" + std::to_string(tmpl.block.transactions.size()) + " reverted=" + std::to_string(reverted) +
        " skipped=" + std::to_string(tmpl.skipped.size()));
    accept_block(node, tmpl.block.encode(), node);
  }

  void accept_block(std::size_t node, const Bytes& data, std::size_t from) {
    Node& n = nodes_[node];
    Block b;
    try {
      b = Block::decode(data);
    } catch (const Error& e) {
      log(n.name + " reject undecodable block");
      return;
    }
    const Hash256 h = b.hash();
    if (n.blocks.contains(h)) return;
    n.orphan_parent.erase(h);
    auto parent = n.blocks.find(b.header.prev_hash);
    if (parent == n.blocks.end()) {
      auto& waiting = n.orphans[b.header.prev_hash];
      if (std::find(waiting.begin(), waiting.end(), data) == waiting.end()) waiting.push_back(data);
      n.orphan_parent[h] = b.header.prev_hash;
      // Request the deepest missing ancestor.
      Hash256 missing = b.header.prev_hash;
      for (auto up = n.orphan_parent.find(missing); up != n.orphan_parent.end(); up = n.orphan_parent.find(missing))
        missing = up->second;
      if (from != node) send(node, from, GetBlock{missing});
      return;
    }
    Entry e{b, parent->second.state, {}};
    try {
      validate_header(b.header, parent->second.block.header, cfg_.params.pow);
      e.receipts = apply_block(e.state, b);
    } catch (const Error& err) {
      log(n.name + " reject block " + short_hex(h) + ": " + err.what());
      return;
    }
    if (!e.state.supply().balanced())
      throw Error(Errc::ScenarioError, n.name + ": supply identity broken at height " + std::to_string(b.header.height));
    const std::uint64_t height = b.header.height;
    n.blocks.emplace(h, std::move(e));
    const auto& head = n.tip().block.header;
    if (height > head.height || (height == head.height && h < n.head)) {
      if (b.header.prev_hash != n.head) restore_orphaned(n, h);
      n.head = h;
      log(n.name + " head height=" + std::to_string(height) + " hash=" + short_hex(h));
      on_head_change(node);
    }
    broadcast(node, BlockMsg{data}, from);
    if (auto it = n.orphans.find(h); it != n.orphans.end()) {
      auto children = std::move(it->second);
      n.orphans.erase(it);
      for (const auto& c : children) accept_block(node, c, from);
    }
  }

  // Returns transactions of blocks leaving the canonical chain to the mempool.
  void restore_orphaned(Node& n, const Hash256& new_head) {
    std::set<Hash256> fresh;
    for (Hash256 h = new_head;;) {
      fresh.insert(h);
      const auto& hdr = n.blocks.at(h).block.header;
      if (hdr.height == 0) break;
      h = hdr.prev_hash;
    }
    for (Hash256 h = n.head; !fresh.contains(h);) {
      const Entry& e = n.blocks.at(h);
      for (const auto& t : e.block.transactions) {
        n.mempool.emplace(t.hash(), t);
        broadcast(n.index, TxMsg{t.encode()});
      }
      h = e.block.header.prev_hash;
    }
    log(n.name + " reorg to " + short_hex(new_head));
  }

  void announce(std::size_t node) {
    const Node& n = nodes_[node];
    broadcast(node, BlockMsg{n.tip().block.encode()});
  }

  void on_head_change(std::size_t node) {
    Node& n = nodes_[node];
    const State& st = n.state();
    for (auto it = n.mempool.begin(); it != n.mempool.end();) {
      const Account* acct = st.find(it->second.sender);
      if (acct && it->second.counter <= acct->counter)
        it = n.mempool.erase(it);
      else
        ++it;
    }
    for (auto& [alias, info] : channels_)
      for (auto& actor : info.actors)
        if (actor.home == node && actor.online) watch(info, actor);
  }

  // --- channels ------------------------------------------------------------

  ChannelInfo& chan(const std::string& alias) {
    auto it = channels_.find(alias);
    if (it == channels_.end()) fail("unknown channel '" + alias + "'");
    return it->second;
  }

  int party_of(const ChannelInfo& info, const std::string& who) const {
    for (int p = 0; p < 2; ++p)
      if (info.actors[p].identity == who) return p;
    fail("'" + who + "' is not a party of channel " + info.alias);
  }

  const channel::Channel* onchain(const ChannelInfo& info, std::size_t node) const {
    const auto& chans = nodes_[node].state().channels;
    auto it = chans.find(info.proto.id);
    return it == chans.end() ? nullptr : &it->second;
  }

  void send_channel(ChannelInfo& info, int from_party, ChanKind kind, const SignedState& s) {
    const Actor& from = info.actors[from_party];
    const Actor& to = info.actors[1 - from_party];
    send(from.home, to.home, ChanMsg{info.alias, 1 - from_party, kind, s});
  }

  void check_nonces(const ChannelInfo& info) {
    const auto a = info.actors[0].nonce(), b = info.actors[1].nonce();
    if ((a > b ? a - b : b - a) > 1)
      throw Error(Errc::ScenarioError, "channel " + info.alias + ": parties diverged (" + std::to_string(a) + " vs " +
                                           std::to_string(b) + ")");
  }

  void adopt(ChannelInfo& info, Actor& actor, const SignedState& full) {
    actor.latest = full;
    actor.history[full.nonce] = full;
    check_nonces(info);
  }

  void try_propose(ChannelInfo& info, Actor& actor) {
    if (!actor.online || actor.closing || actor.pending || actor.queue.empty()) return;
    const channel::Channel* c = onchain(info, actor.home);
    if (c == nullptr || c->status != channel::Status::Open) return;
    UpdateRequest req = actor.queue.front();
    actor.queue.pop_front();
    SignedState s;
    try {
      s = channel::propose_update(info.proto, actor.latest ? &*actor.latest : nullptr, actor.nonce() + 1, req.a, req.b,
                                  req.contract_hash, req.contract_state);
    } catch (const Error& e) {
      log(info.alias + " update rejected locally: " + e.what());
      return try_propose(info, actor);
    }
    channel::sign_state(s, info.proto, key(actor.identity), channel::Purpose::Update);
    actor.pending = s;
    actor.pending_request = req;
    log(info.alias + " " + actor.identity + " propose nonce=" + std::to_string(s.nonce) + " a=" + s.balance_a.str() +
        " b=" + s.balance_b.str());
    send_channel(info, actor.party, ChanKind::UpdateProposal, s);
    push(now_ + cfg_.retry_ticks, RetryProposal{info.alias, actor.party, s.nonce});
  }

  void requeue_pending(Actor& actor) {
    if (actor.pending_request) actor.queue.push_front(*actor.pending_request);
    actor.pending.reset();
    actor.pending_request.reset();
  }

  bool signed_by(const ChannelInfo& info, const SignedState& s, int party, channel::Purpose purpose) const {
    const Address& who = party == 0 ? info.proto.party_a : info.proto.party_b;
    const Bytes& sig = party == 0 ? s.sig_a : s.sig_b;
    return !sig.empty() && cfg_.params.scheme->verify(who, s.signing_bytes(purpose), sig);
  }

  void deliver_channel(const ChanMsg& m) {
    auto it = channels_.find(m.chan);
    if (it == channels_.end()) return;
    ChannelInfo& info = it->second;
    Actor& me = info.actors[m.to_party];
    if (!me.online) return;
    const int peer = 1 - m.to_party;
    const SignedState& s = m.state;
    if (s.channel_id != info.proto.id) return;

    switch (m.kind) {
      case ChanKind::UpdateProposal: {
        if (!signed_by(info, s, peer, channel::Purpose::Update)) return;
        const std::uint64_t l = me.nonce();
        if (s.nonce == l + 1 && !me.closing) {
          if (me.pending && me.pending->nonce == s.nonce) {
            if (me.party == 0) return;  // concurrent proposals: party A's wins
            requeue_pending(me);
          }
          if (s.total() != info.proto.total()) return;
          SignedState full = s;
          channel::sign_state(full, info.proto, key(me.identity), channel::Purpose::Update);
          adopt(info, me, full);
          log(info.alias + " " + me.identity + " accept nonce=" + std::to_string(full.nonce));
          send_channel(info, me.party, ChanKind::UpdateAck, full);
        } else if (me.latest && s.nonce <= l) {
          send_channel(info, me.party, ChanKind::UpdateAck, *me.latest);
        }
        break;
      }
      case ChanKind::UpdateAck: {
        try {
          channel::check_signed(info.proto, s, channel::Purpose::Update, *cfg_.params.scheme);
        } catch (const Error&) {
          return;
        }
        if (s.nonce > me.nonce()) {
          adopt(info, me, s);
          log(info.alias + " " + me.identity + " acked nonce=" + std::to_string(s.nonce));
        }
        if (me.pending && me.pending->nonce <= me.nonce()) {
          if (me.pending->nonce == s.nonce && same_content(*me.pending, s)) {
            me.pending.reset();
            me.pending_request.reset();
          } else {
            requeue_pending(me);
          }
        }
        try_propose(info, me);
        break;
      }
      case ChanKind::CloseRequest: {
        if (!signed_by(info, s, peer, channel::Purpose::Close)) return;
        if (me.pending) return;  // initiator retries once our update settles
        const channel::Channel* c = onchain(info, me.home);
        if (c == nullptr || c->status != channel::Status::Open) return;
        const Amount a = me.latest ? me.latest->balance_a : info.proto.deposit_a;
        const Amount b = me.latest ? me.latest->balance_b : info.proto.deposit_b;
        if (s.nonce != me.nonce() + 1 || s.balance_a != a || s.balance_b != b || s.contract_hash) return;
        me.closing = true;
        if (!me.close_tx || me.close_tx->payload.index() != Payload(tx::ChannelCooperativeClose{}).index() ||
            !ensure_submitted(me.home, *me.close_tx)) {
          SignedState full = s;
          channel::sign_state(full, info.proto, key(me.identity), channel::Purpose::Close);
          me.close_tx = make(me.home, me.identity, tx::ChannelCooperativeClose{full});
          log(info.alias + " " + me.identity + " countersign close nonce=" + std::to_string(s.nonce));
          submit(me.home, *me.close_tx);
        }
        break;
      }
    }
  }

  void handle(RetryProposal& r) {
    auto it = channels_.find(r.chan);
    if (it == channels_.end()) return;
    ChannelInfo& info = it->second;
    Actor& a = info.actors[r.party];
    if (!a.online || !a.pending || a.pending->nonce != r.nonce) return;
    const channel::Channel* c = onchain(info, a.home);
    if (c == nullptr || c->status != channel::Status::Open) {
      requeue_pending(a);
      return;
    }
    send_channel(info, a.party, ChanKind::UpdateProposal, *a.pending);
    push(now_ + cfg_.retry_ticks, RetryProposal{r.chan, r.party, r.nonce});
  }

  void handle(RetryClose& r) {
    auto it = channels_.find(r.chan);
    if (it == channels_.end()) return;
    ChannelInfo& info = it->second;
    Actor& a = info.actors[r.party];
    if (!a.online || !a.close_offer || r.attempt >= cfg_.max_retries) return;
    const channel::Channel* c = onchain(info, a.home);
    if (c != nullptr && c->status == channel::Status::Closed) return;
    send_channel(info, a.party, ChanKind::CloseRequest, *a.close_offer);
    push(now_ + cfg_.retry_ticks, RetryClose{r.chan, r.party, r.attempt + 1});
  }

  std::optional<vm::Program> program_for(const Actor& a, const SignedState& s) const {
    if (!s.contract_hash) return std::nullopt;
    auto it = a.programs.find(*s.contract_hash);
    if (it == a.programs.end()) return std::nullopt;
    return it->second;
  }

  void record_honest(ChannelInfo& info, const Actor& a, std::uint64_t nonce) {
    if (info.adversary == a.party) return;
    info.any_honest = true;
    info.max_honest = std::max(info.max_honest, nonce);
  }

  // Honest watcher: challenges stale closes and finalizes its own.
  void watch(ChannelInfo& info, Actor& a) {
    const channel::Channel* c = onchain(info, a.home);
    if (c == nullptr) return;
    if (c->status == channel::Status::Open) {
      try_propose(info, a);
      return;
    }
    if (c->status != channel::Status::Closing) return;
    const std::uint64_t h = nodes_[a.home].state().height;
    const Address me = key(a.identity).address();
    if (c->closer != me) {
      if (!a.latest || a.latest->nonce <= c->candidate->nonce || h + 1 >= c->deadline_height) return;
      const bool stale_tx = a.challenge_tx && std::get<tx::ChannelChallenge>(a.challenge_tx->payload).better.nonce <
                                                  a.latest->nonce;
      if (!a.challenge_tx || stale_tx || !ensure_submitted(a.home, *a.challenge_tx)) {
        a.challenge_tx = make(a.home, a.identity, tx::ChannelChallenge{info.proto.id, *a.latest, program_for(a, *a.latest)});
        log(info.alias + " " + a.identity + " challenge nonce=" + std::to_string(a.latest->nonce) + " candidate=" +
            std::to_string(c->candidate->nonce));
        submit(a.home, *a.challenge_tx);
      }
      record_honest(info, a, a.latest->nonce);
    } else if (h + 1 >= c->deadline_height) {
      if (!a.finalize_tx || !ensure_submitted(a.home, *a.finalize_tx)) {
        a.finalize_tx = make(a.home, a.identity, tx::ChannelFinalize{info.proto.id});
        log(info.alias + " " + a.identity + " finalize");
        submit(a.home, *a.finalize_tx);
      }
    }
  }

  // --- commands ------------------------------------------------------------

  struct Args {
    std::vector<std::string> pos;
    std::map<std::string, std::string> opt;
  };

  Args split_args(const std::vector<std::string>& raw) const {
    Args a;
    for (std::size_t i = 1; i < raw.size(); ++i) {
      const auto eq = raw[i].find('=');
      if (eq != std::string::npos && eq > 0)
        a.opt[raw[i].substr(0, eq)] = raw[i].substr(eq + 1);
      else
        a.pos.push_back(raw[i]);
    }
    return a;
  }

  void need(const Args& a, std::size_t n, const char* usage) const {
    if (a.pos.size() < n) fail(std::string("usage: ") + usage);
  }

  std::optional<std::uint64_t> gas_opt(const Args& a) const {
    if (auto it = a.opt.find("gas"); it != a.opt.end()) return number(it->second);
    return std::nullopt;
  }

  Amount amount(const std::string& s) const {
    try {
      return parse_amount(s);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::uint64_t height_arg(const std::string& s, std::size_t node) const {
    if (!s.empty() && s[0] == '+') return nodes_[node].state().height + number(s.substr(1));
    return number(s);
  }

  std::vector<std::int64_t> words(const std::string& csv) const {
    std::vector<std::int64_t> out;
    std::stringstream ss(csv);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) out.push_back(static_cast<std::int64_t>(std::stoll(item)));
    return out;
  }

  std::string read_file(const std::string& rel) const {
    std::ifstream f(base_ / rel);
    if (!f) fail("cannot read '" + rel + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  vm::Program program_arg(const std::string& spec) const {
    try {
      if (spec.ends_with(".asm")) return vm::assemble(read_file(spec));
      return vm::templates::by_name(spec);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  Hash256 lookup(const std::map<std::string, Hash256>& m, const std::string& alias, const char* what) const {
    auto it = m.find(alias);
    if (it == m.end()) fail(std::string("unknown ") + what + " '" + alias + "'");
    return it->second;
  }

  void handle(AutoMine& a) {
    std::vector<std::size_t> online;
    for (const auto& n : nodes_)
      if (n.online) online.push_back(n.index);
    if (!online.empty()) mine(online[opt::index_draw(rng_, online.size())]);
    if (a.remaining > 1) push(now_ + a.interval, AutoMine{a.interval, a.remaining - 1});
  }

  void handle(RunCommand& rc) {
    const Command& cmd = commands_[rc.index];
    line_ = cmd.line;
    try {
      execute(cmd.args);
    } catch (const Error& e) {
      if (e.code() == Errc::ScenarioError) throw;
      fail(e.what());
    }
  }

  void execute(const std::vector<std::string>& raw) {
    const std::string& op = raw[0];
    const Args a = split_args(raw);

    if (op == "mine") {
      need(a, 1, "mine <node> [count]");
      const auto count = a.pos.size() > 1 ? number(a.pos[1]) : 1;
      for (std::uint64_t i = 0; i < count; ++i) mine(node_index(a.pos[0]));
    } else if (op == "auto-mine") {
      need(a, 2, "auto-mine <interval> <count>");
      const auto interval = std::max<std::uint64_t>(1, number(a.pos[0]));
      if (number(a.pos[1]) > 0) push(now_, AutoMine{interval, number(a.pos[1])});
    } else if (op == "spend") {
      need(a, 3, "spend <from> <to> <amount>");
      const auto node = home_of(a.pos[0]);
      submit(node, make(node, a.pos[0], tx::Spend{address(a.pos[1]), amount(a.pos[2])}, gas_opt(a)));
    } else if (op == "data") {
      need(a, 2, "data <from> <text>");
      const auto node = home_of(a.pos[0]);
      submit(node, make(node, a.pos[0], tx::DataOnly{Bytes(a.pos[1].begin(), a.pos[1].end())}));
    } else if (op == "contract-create") {
      need(a, 3, "contract-create <alias> <owner> <template|file.asm> [deposit=] [amount=] [args=]");
      const auto node = home_of(a.pos[1]);
      tx::ContractCreate p;
      p.code = program_arg(a.pos[2]);
      if (auto it = a.opt.find("deposit"); it != a.opt.end()) p.deposit = amount(it->second);
      if (auto it = a.opt.find("amount"); it != a.opt.end()) p.amount = amount(it->second);
      if (auto it = a.opt.find("args"); it != a.opt.end()) p.call_data = words(it->second);
      const Tx t = make(node, a.pos[1], p, gas_opt(a));
      contracts_[a.pos[0]] = Hasher().update(t.sender).update_u64(t.counter).finish();
      submit(node, t);
    } else if (op == "contract-call") {
      need(a, 2, "contract-call <alias> <caller> [amount=] [args=]");
      const auto node = home_of(a.pos[1]);
      tx::ContractCall p;
      p.contract = lookup(contracts_, a.pos[0], "contract");
      if (auto it = a.opt.find("amount"); it != a.opt.end()) p.amount = amount(it->second);
      if (auto it = a.opt.find("args"); it != a.opt.end()) p.call_data = words(it->second);
      submit(node, make(node, a.pos[1], p, gas_opt(a)));
    } else if (op == "name-claim") {
      need(a, 3, "name-claim <owner> <name> <target>");
      const auto node = home_of(a.pos[0]);
      submit(node, make(node, a.pos[0], tx::NameClaim{a.pos[1], address(a.pos[2])}, gas_opt(a)));
    } else if (op == "delete-account") {
      need(a, 2, "delete-account <sender> <target>");
      const auto node = home_of(a.pos[0]);
      submit(node, make(node, a.pos[0], tx::DeleteAccount{address(a.pos[1])}, gas_opt(a)));
    } else if (op.starts_with("channel-")) {
      channel_command(op, a);
    } else if (op.starts_with("oracle-")) {
      oracle_command(op, a);
    } else if (op.starts_with("storage-")) {
      storage_command(op, a);
    } else if (op.starts_with("az-")) {
      zone_command(op, a);
    } else if (op == "epoch-run") {
      need(a, 1, "epoch-run <factors-file> [node]");
      epoch_run(a.pos[0], a.pos.size() > 1 ? node_index(a.pos[1]) : 0);
    } else if (op == "partition") {
      need(a, 1, "partition <n0,n1> <n2> ...");
      for (auto& n : nodes_) n.group = 0;
      for (std::size_t g = 0; g < a.pos.size(); ++g) {
        std::stringstream ss(a.pos[g]);
        for (std::string name; std::getline(ss, name, ',');) nodes_[node_index(name)].group = static_cast<int>(g + 1);
      }
      log("partition " + a.pos.front() + (a.pos.size() > 1 ? " ..." : ""));
    } else if (op == "heal") {
      for (auto& n : nodes_) n.group = 0;
      log("heal");
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].online) announce(i);
    } else if (op == "crash") {
      need(a, 1, "crash <node>");
      nodes_[node_index(a.pos[0])].online = false;
      log(a.pos[0] + " crash");
    } else if (op == "restart") {
      need(a, 1, "restart <node>");
      const auto i = node_index(a.pos[0]);
      nodes_[i].online = true;
      log(a.pos[0] + " restart");
      announce(i);
    } else if (op == "expect-balance") {
      need(a, 2, "expect-balance <identity> <amount> [node]");
      const auto node = a.pos.size() > 2 ? node_index(a.pos[2]) : 0;
      const Amount got = nodes_[node].state().balance_of(address(a.pos[0]));
      if (got != amount(a.pos[1])) fail("balance of " + a.pos[0] + " is " + got.str() + ", expected " + a.pos[1]);
      log("expect-balance " + a.pos[0] + " ok");
    } else if (op == "expect-balanced") {
      for (const auto& n : nodes_)
        if (!n.state().supply().balanced()) fail(n.name + " supply identity broken");
      log("expect-balanced ok");
    } else if (op == "log") {
      std::string text;
      for (std::size_t i = 1; i < raw.size(); ++i) text += (i > 1 ? " " : "") + raw[i];
      log("note " + text);
    } else {
      fail("unknown command '" + op + "'");
    }
  }

  void channel_command(const std::string& op, const Args& a) {
    if (op == "channel-open") {
      need(a, 5, "channel-open <alias> <a> <b> <deposit_a> <deposit_b>");
      if (channels_.contains(a.pos[0])) fail("channel alias already used");
      const auto node = home_of(a.pos[1]);
      tx::ChannelOpen p{address(a.pos[2]), amount(a.pos[3]), amount(a.pos[4]), {}};
      Tx t = make(node, a.pos[1], p, gas_opt(a));
      std::get<tx::ChannelOpen>(t.payload).counterparty_sig = key(a.pos[2]).sign(t.signing_bytes());
      ChannelInfo info;
      info.alias = a.pos[0];
      info.proto.id = channel::channel_id(t.sender, p.counterparty, t.counter);
      info.proto.party_a = t.sender;
      info.proto.party_b = p.counterparty;
      info.proto.deposit_a = p.deposit_self;
      info.proto.deposit_b = p.deposit_counterparty;
      for (int i = 0; i < 2; ++i) {
        info.actors[i].party = i;
        info.actors[i].identity = a.pos[1 + i];
        info.actors[i].home = home_of(a.pos[1 + i]);
      }
      log(info.alias + " open id=" + short_hex(info.proto.id));
      channels_.emplace(info.alias, std::move(info));
      submit(node, t);
      return;
    }
    need(a, 2, "channel-<op> <alias> <party> ...");
    ChannelInfo& info = chan(a.pos[0]);
    Actor& actor = info.actors[party_of(info, a.pos[1])];
    if (op == "channel-update") {
      need(a, 4, "channel-update <alias> <proposer> <balance_a> <balance_b> [contract=] [state=]");
      UpdateRequest req{amount(a.pos[2]), amount(a.pos[3]), std::nullopt, {}};
      if (auto it = a.opt.find("contract"); it != a.opt.end()) {
        const vm::Program prog = program_arg(it->second);
        req.contract_hash = prog.hash();
        for (auto& x : info.actors) x.programs[prog.hash()] = prog;
      }
      if (auto it = a.opt.find("state"); it != a.opt.end()) req.contract_state = words(it->second);
      actor.queue.push_back(std::move(req));
      try_propose(info, actor);
    } else if (op == "channel-close") {
      if (!actor.online) fail("actor is crashed");
      SignedState s;
      s.channel_id = info.proto.id;
      s.nonce = actor.nonce() + 1;
      s.balance_a = actor.latest ? actor.latest->balance_a : info.proto.deposit_a;
      s.balance_b = actor.latest ? actor.latest->balance_b : info.proto.deposit_b;
      channel::sign_state(s, info.proto, key(actor.identity), channel::Purpose::Close);
      actor.closing = true;
      actor.close_offer = s;
      log(info.alias + " " + actor.identity + " request close nonce=" + std::to_string(s.nonce));
      send_channel(info, actor.party, ChanKind::CloseRequest, s);
      push(now_ + cfg_.retry_ticks, RetryClose{info.alias, actor.party, 1});
    } else if (op == "channel-unilateral") {
      std::optional<SignedState> cand = actor.latest;
      if (auto it = a.opt.find("stale"); it != a.opt.end()) {
        const auto n = number(it->second);
        info.adversary = actor.party;
        // Newest co-signed state at or below the requested nonce.
        auto h = actor.history.upper_bound(n);
        if (n == 0 || h == actor.history.begin())
          cand.reset();
        else
          cand = std::prev(h)->second;
      }
      actor.closing = true;
      const std::uint64_t n = cand ? cand->nonce : 0;
      Tx t = make(actor.home, actor.identity,
                  tx::ChannelUnilateralClose{info.proto.id, cand, cand ? program_for(actor, *cand) : std::nullopt},
                  gas_opt(a));
      log(info.alias + " " + actor.identity + " unilateral close nonce=" + std::to_string(n));
      record_honest(info, actor, n);
      submit(actor.home, t);
    } else if (op == "channel-challenge") {
      if (!actor.latest) fail("no signed state to challenge with");
      log(info.alias + " " + actor.identity + " manual challenge nonce=" + std::to_string(actor.latest->nonce));
      record_honest(info, actor, actor.latest->nonce);
      submit(actor.home, make(actor.home, actor.identity,
                              tx::ChannelChallenge{info.proto.id, *actor.latest, program_for(actor, *actor.latest)},
                              gas_opt(a)));
    } else if (op == "channel-finalize") {
      submit(actor.home, make(actor.home, actor.identity, tx::ChannelFinalize{info.proto.id}, gas_opt(a)));
    } else if (op == "channel-crash") {
      actor.online = false;
      actor.pending.reset();
      actor.pending_request.reset();
      actor.queue.clear();
      actor.close_offer.reset();
      actor.closing = false;
      log(info.alias + " " + actor.identity + " crash (durable nonce=" + std::to_string(actor.nonce()) + ")");
    } else if (op == "channel-restart") {
      actor.online = true;
      log(info.alias + " " + actor.identity + " restart from nonce=" + std::to_string(actor.nonce()));
      watch(info, actor);
    } else {
      fail("unknown command '" + op + "'");
    }
  }

  void oracle_command(const std::string& op, const Args& a) {
    if (op == "oracle-ask") {
      need(a, 5, "oracle-ask <alias> <asker> <question> <start> <end>");
      const auto node = home_of(a.pos[1]);
      tx::OracleRegister p{sha256(a.pos[2]), height_arg(a.pos[3], node), height_arg(a.pos[4], node)};
      const Tx t = make(node, a.pos[1], p, gas_opt(a));
      oracles_[a.pos[0]] = Hasher().update(t.sender).update_u64(t.counter).update(p.question_hash).finish();
      submit(node, t);
      return;
    }
    need(a, 1, "oracle-<op> <alias> ...");
    const Hash256 id = lookup(oracles_, a.pos[0], "oracle");
    auto bit = [&](const std::string& s) {
      if (s == "yes") return true;
      if (s == "no") return false;
      fail("expected yes or no");
    };
    if (op == "oracle-answer") {
      need(a, 3, "oracle-answer <alias> <asker> yes|no");
      const auto node = home_of(a.pos[1]);
      submit(node, make(node, a.pos[1], tx::OracleAnswer{id, bit(a.pos[2])}, gas_opt(a)));
    } else if (op == "oracle-counter") {
      need(a, 2, "oracle-counter <alias> <challenger>");
      const auto node = home_of(a.pos[1]);
      submit(node, make(node, a.pos[1], tx::OracleCounter{id}, gas_opt(a)));
    } else if (op == "oracle-vote") {
      need(a, 3, "oracle-vote <alias> <node> yes|no");
      const auto node = node_index(a.pos[1]);
      submit(node, make(node, nodes_[node].name, tx::OracleVote{id, bit(a.pos[2])}, gas_opt(a)));
    } else if (op == "oracle-resolve") {
      need(a, 2, "oracle-resolve <alias> <sender>");
      const auto node = home_of(a.pos[1]);
      submit(node, make(node, a.pos[1], tx::OracleResolve{id}, gas_opt(a)));
    } else if (op == "oracle-expect") {
      need(a, 2, "oracle-expect <alias> yes|no|pending|burned");
      static const char* names[] = {"no", "yes", "pending", "burned"};
      const auto got = names[static_cast<int>(oracle::read_answer(nodes_[0].state(), id))];
      if (a.pos[1] != got) fail("oracle " + a.pos[0] + " reads " + got + ", expected " + a.pos[1]);
      log("oracle-expect " + a.pos[0] + " " + got);
    } else {
      fail("unknown command '" + op + "'");
    }
  }

  void storage_command(const std::string& op, const Args& a) {
    if (op == "storage-create") {
      need(a, 8, "storage-create <alias> <payer> <provider> <bytes> <chunk_size> <period> <reward> <escrow>");
      StorageInfo s;
      s.payer = a.pos[1];
      s.provider = a.pos[2];
      Bytes data(number(a.pos[3]));
      for (std::size_t i = 0; i < data.size(); i += 32) {
        const Hash256 h = Hasher().update_str(a.pos[0]).update_u64(i).finish();
        for (std::size_t j = 0; j < 32 && i + j < data.size(); ++j) data[i + j] = h.bytes[j];
      }
      s.data = storage::commit_data(data, number(a.pos[4]));
      storage::CreateTerms terms;
      terms.provider = address(s.provider);
      terms.data_root = s.data.data_root;
      terms.chunk_count = s.data.chunks.size();
      terms.chunk_size = number(a.pos[4]);
      terms.data_len = s.data.data_len;
      terms.period = number(a.pos[5]);
      terms.reward_per_proof = amount(a.pos[6]);
      terms.escrow = amount(a.pos[7]);
      const auto node = home_of(s.payer);
      const Tx t = make(node, s.payer, tx::StorageCreate{terms}, gas_opt(a));
      s.id = Hasher().update_str("storage").update(t.sender).update_u64(t.counter).finish();
      storage_[a.pos[0]] = std::move(s);
      submit(node, t);
      return;
    }
    need(a, 1, "storage-<op> <alias> ...");
    auto it = storage_.find(a.pos[0]);
    if (it == storage_.end()) fail("unknown storage contract '" + a.pos[0] + "'");
    StorageInfo& s = it->second;
    if (op == "storage-prove") {
      const auto node = home_of(s.provider);
      const Node& n = nodes_[node];
      const auto idx = storage::challenge_index(n.head, s.id, s.data.chunks.size());
      tx::StorageProve p{s.id, s.data.chunks[idx], merkle_prove(s.data.chunks, idx)};
      log(a.pos[0] + " prove chunk=" + std::to_string(idx));
      submit(node, make(node, s.provider, p, gas_opt(a)));
    } else if (op == "storage-corrupt") {
      need(a, 3, "storage-corrupt <alias> <chunk> <byte>");
      auto& chunk = s.data.chunks.at(number(a.pos[1]));
      chunk.at(number(a.pos[2])) ^= 0x01;
      log(a.pos[0] + " provider copy corrupted");
    } else if (op == "storage-close") {
      const auto node = home_of(s.payer);
      submit(node, make(node, s.payer, tx::StorageClose{s.id}, gas_opt(a)));
    } else {
      fail("unknown command '" + op + "'");
    }
  }

  void zone_command(const std::string& op, const Args& a) {
    need(a, 2, "az-<op> <alias> <actor> ...");
    const std::string& who = a.pos[1];
    const auto node = home_of(who);
    if (op == "az-create") {
      need(a, 3, "az-create <alias> <owner> <join_price>");
      const Tx t = make(node, who, tx::ZoneTx{reward::CreateZone{amount(a.pos[2])}}, gas_opt(a));
      zones_[a.pos[0]] = Hasher().update_str("az").update(t.sender).update_u64(t.counter).finish();
      submit(node, t);
      return;
    }
    const Hash256 id = lookup(zones_, a.pos[0], "zone");
    reward::ZoneAction action;
    if (op == "az-join") {
      action = reward::JoinZone{id};
    } else if (op == "az-refer") {
      need(a, 3, "az-refer <alias> <member> <user>");
      action = reward::ReferUser{id, address(a.pos[2])};
    } else if (op == "az-contribute") {
      need(a, 3, "az-contribute <alias> <member> <content>");
      action = reward::RecordContribution{id, sha256(a.pos[2])};
    } else {
      fail("unknown command '" + op + "'");
    }
    submit(node, make(node, who, tx::ZoneTx{action}, gas_opt(a)));
  }

  void epoch_run(const std::string& file, std::size_t node) {
    const std::uint64_t bpe = cfg_.params.blocks_per_epoch;
    const auto text = read_file(file);
    const auto inputs = reward::parse_epoch_inputs(text, [&](std::string_view token) {
      if (auto it = zones_.find(std::string(token)); it != zones_.end()) return it->second;
      return address(std::string(token));
    });
    for (std::size_t guard = 0; (nodes_[node].state().height + 1) % bpe != 0; ++guard) {
      if (guard > bpe) fail("cannot reach an epoch boundary");
      mine(node);
    }
    const State& st = nodes_[node].state();
    try {
      const auto report = reward::compute_epoch(st.pool, st.zones, inputs);
      std::istringstream rows(report.to_text());
      for (std::string row; std::getline(rows, row);) log("epoch-report " + row);
    } catch (const Error& e) {
      log(std::string("epoch-report unavailable: ") + e.what());
    }
    submit(node, make(node, nodes_[node].name, tx::EpochSettle{inputs}));
    mine(node);
  }

  SimResult finish() {
    SimResult r;
    const Node& n0 = nodes_[0];
    const State& st = n0.state();
    r.final_state_root = st.roots().combined();
    r.head_hash = n0.head;
    r.head_height = st.height;
    r.final_state = st;
    for (const auto& n : nodes_) r.supply.push_back(n.state().supply());

    std::vector<const Entry*> chain;
    for (Hash256 h = n0.head;;) {
      const Entry& e = n0.blocks.at(h);
      chain.push_back(&e);
      if (e.block.header.height == 0) break;
      h = e.block.header.prev_hash;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      for (const auto& rc : (*it)->receipts)
        r.receipts.push_back("height=" + std::to_string((*it)->block.header.height) + " " + rc.to_line());

    for (const auto& [alias, info] : channels_) {
      ChannelReport cr;
      cr.alias = alias;
      cr.id = info.proto.id;
      cr.max_honest_submitted = info.max_honest;
      cr.any_honest_submission = info.any_honest;
      if (auto it = st.channels.find(info.proto.id); it != st.channels.end()) {
        const auto& c = it->second;
        cr.status = c.status == channel::Status::Open ? "open" : c.status == channel::Status::Closing ? "closing" : "closed";
        cr.settled_nonce = c.settled_nonce;
      } else {
        cr.status = "absent";
      }
      r.channels.push_back(cr);
    }
    log("final height=" + std::to_string(r.head_height) + " head=" + short_hex(r.head_hash) +
        " state_root=" + r.final_state_root.hex());
    r.log = std::move(log_);
    r.events = events_;
    return r;
  }

  NetworkConfig cfg_;
  std::filesystem::path base_;
  std::mt19937_64 rng_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t now_ = 0;
  std::uint64_t events_ = 0;
  std::uint64_t budget_ = 0;
  std::size_t line_ = 0;
  std::vector<Command> commands_;
  std::vector<Node> nodes_;
  std::map<std::string, KeyPair> keys_;
  std::map<std::string, ChannelInfo> channels_;
  std::map<std::string, Hash256> oracles_;
  std::map<std::string, StorageInfo> storage_;
  std::map<std::string, Hash256> zones_;
  std::map<std::string, Hash256> contracts_;
  std::vector<std::string> log_;
};

}  // namespace

SimResult run(const NetworkConfig& config, std::string_view scenario, const std::filesystem::path& base_dir) {
  return Simulator(config, scenario, base_dir).run();
}

}  // namespace dsdin::sim
