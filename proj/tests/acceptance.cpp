// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsdin/sim.hpp"
#include "dsdin/storage.hpp"
#include "support.hpp"

using namespace dsdin;
using namespace dsdin::test;

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{DSDIN_FIXTURES};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> scenarios() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kFixtures))
    if (e.path().extension() == ".scn") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Recomputes the supply identity from raw state maps.
bool conserved(const State& s, const NetworkConfig& cfg, std::string& why) {
  Amount genesis = cfg.pool_endowment;
  for (const auto& [name, amt] : cfg.accounts) genesis += amt;
  Amount minted;
  for (std::uint64_t h = 1; h <= s.height; ++h) minted += coinbase(h, s.params.emission);
  Amount held = s.pool.pool_balance + s.burned_total;
  for (const auto& [a, acct] : s.accounts) held += acct.balance;
  for (const auto& [id, ch] : s.channels)
    if (ch.status != channel::Status::Closed) held += ch.total();
  for (const auto& [id, q] : s.oracles) held += q.escrowed - q.returned - q.burned;
  for (const auto& [id, c] : s.storage)
    if (!c.closed) held += c.escrow;
  if (held == genesis + minted) return true;
  why = "held " + held.str() + " vs genesis+minted " + (genesis + minted).str();
  return false;
}

// --- 1 ----------------------------------------------------------------------

Verdict conservation() {
  const auto files = scenarios();
  std::size_t ok = 0;
  std::string why;
  for (const auto& f : files) {
    NetworkConfig cfg;
    try {
      const auto text = slurp(f);
      // Mirror `set` directives so the independent genesis total sees them.
      std::istringstream lines(text);
      for (std::string line; std::getline(lines, line);) {
        std::istringstream ls(line);
        std::string word, key, value;
        if (ls >> word >> key >> value && word == "set") cfg.set(key, value);
      }
      const auto r = sim::run(NetworkConfig{}, text, kFixtures);
      bool good = std::all_of(r.supply.begin(), r.supply.end(), [](const SupplyReport& s) { return s.balanced(); });
      std::string w;
      good = good && conserved(r.final_state, cfg, w);
      if (good)
        ++ok;
      else
        why += " " + f.filename().string() + ":" + w;
    } catch (const std::exception& e) {
      why += " " + f.filename().string() + ": " + e.what();
    }
  }
  return {files.size() >= 12 && ok == files.size(),
          std::to_string(ok) + "/" + std::to_string(files.size()) + " scenarios exact" + why};
}

// --- 2 ----------------------------------------------------------------------

Verdict fee_semantics() {
  TestChain chain;
  auto deploy = [&](std::string_view src, std::vector<std::int64_t> init) {
    tx::ContractCreate c;
    c.code = vm::assemble(src);
    c.deposit = Amount::dsd(1);
    c.call_data = std::move(init);
    return *chain.mine({chain.tx("dave", c, 1'000)})[0].created;
  };
  // Five straight-line instructions each; the second traps on a zero argument.
  const Address adder = deploy("PUSH 1\nPUSH 2\nADD\nPOP\nSTOP", {});
  const Address divider = deploy("PUSH 1\nSWAP\nDIV\nPOP\nSTOP", {1});

  const std::vector<std::string> people{"alice", "bob", "carol", "dave"};
  std::map<Address, Amount> expect;
  for (const auto& p : people) expect[addr(p)] = chain.state.balance_of(addr(p));
  expect[adder] = chain.state.balance_of(adder);
  expect[divider] = chain.state.balance_of(divider);

  struct Plan {
    Tx tx;
    bool applies = false;
    std::uint64_t gas_used = 0;
    Address to;
    Amount amount;
  };
  std::mt19937_64 rng(2);
  std::size_t checked = 0, reverted = 0, refunded = 0, bad = 0;
  std::string why;
  for (int block = 0; block < 100; ++block) {
    std::vector<Plan> plans;
    std::map<Address, Amount> budget = expect;
    for (int i = 0; i < 10; ++i) {
      const auto& who = people[rng() % people.size()];
      const std::uint64_t price = 1 + rng() % 4;
      Plan p;
      const auto kind = rng() % 4;
      if (kind == 0) {
        const std::uint64_t gas = 1 + rng() % 30;
        p.to = addr(people[rng() % people.size()]);
        p.amount = Amount(rng() % 3 == 0 ? 2'000'000'000'000ull : rng() % 5'000'000);
        p.tx = chain.tx(who, tx::Spend{p.to, p.amount}, gas, price);
        p.gas_used = gas;
        p.applies = budget[addr(who)] >= p.tx.fee + p.amount;
      } else {
        const std::uint64_t gas = 1 + rng() % 12;
        const bool trap = kind == 3 && rng() % 2;
        p.to = kind == 1 ? adder : divider;
        p.amount = Amount(rng() % 1'000);
        p.tx = chain.tx(who, tx::ContractCall{p.to, p.amount, kind == 1 ? std::vector<std::int64_t>{}
                                                                       : std::vector<std::int64_t>{trap ? 0 : 1}},
                        gas, price);
        p.applies = !trap && gas >= 5;
        p.gas_used = p.applies ? 5 : gas;
      }
      budget[addr(who)] -= p.applies ? p.tx.fee + p.amount : p.tx.fee;
      plans.push_back(p);
    }
    std::vector<Tx> txs;
    for (const auto& p : plans) txs.push_back(p.tx);
    const auto receipts = chain.mine(txs);
    if (receipts.size() != plans.size()) {
      ++bad;
      why = " receipts missing in block " + std::to_string(block);
      break;
    }
    for (const auto& r : receipts) {
      const auto it = std::find_if(plans.begin(), plans.end(), [&](const Plan& p) { return p.tx.hash() == r.tx_hash; });
      const Plan& p = *it;
      const Tx& t = p.tx;
      ++checked;
      const bool applied = r.status == TxStatus::Applied;
      bool good = applied == p.applies && r.gas_used == p.gas_used &&
                  r.fee_paid == Amount(r.gas_used) * t.gas_price && r.fee_paid + r.refund == t.fee &&
                  r.refund == Amount(t.gas - p.gas_used) * t.gas_price;
      if (!applied) good = good && r.fee_paid == t.fee && !r.fee_paid.is_zero();
      reverted += !applied;
      refunded += !r.refund.is_zero();
      expect[t.sender] -= r.fee_paid;
      if (applied) {
        expect[t.sender] -= p.amount;
        expect[p.to] += p.amount;
      }
      if (!good) {
        ++bad;
        why = " mismatch on " + r.to_line();
      }
    }
    for (const auto& [a, amt] : expect)
      if (chain.state.balance_of(a) != amt) {
        ++bad;
        why = " balance drift in block " + std::to_string(block);
      }
    if (!chain.state.supply().balanced()) ++bad;
  }
  return {checked == 1'000 && bad == 0 && reverted > 0 && refunded > 0,
          std::to_string(checked) + " receipts, " + std::to_string(reverted) + " reverted, " +
              std::to_string(refunded) + " with refunds, " + std::to_string(bad) + " violations" + why};
}

// --- 3 ----------------------------------------------------------------------

std::string dispute_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::ostringstream head;
  head << "set drop_rate " << rng() % 31 << "/100\n";
  const auto lat_min = 1 + rng() % 3;
  head << "set latency.min " << lat_min << "\nset latency.max " << lat_min + rng() % 8 << "\n";
  std::vector<std::pair<std::uint64_t, std::string>> events;
  const std::uint64_t total = 20'000'000;
  events.push_back({0, "channel-open c alice bob 10dsd 10dsd"});
  const auto updates = 2 + rng() % 6;
  std::uint64_t t = 20;
  const bool crash = rng() % 4 == 0;
  const auto crash_at = rng() % updates;
  const char* party[2] = {"alice", "bob"};
  for (std::uint64_t i = 0; i < updates; ++i) {
    const auto a = rng() % (total + 1);
    events.push_back({t, std::string("channel-update c ") + party[rng() % 2] + ' ' + std::to_string(a) + ' ' +
                             std::to_string(total - a)});
    if (crash && i == crash_at) {
      const std::string victim = party[rng() % 2];
      events.push_back({t + 1, "channel-crash c " + victim});
      events.push_back({t + 5 + rng() % 20, "channel-restart c " + victim});
    }
    t += 1 + rng() % 12;
  }
  const auto close_at = t + 30 + rng() % 40;
  events.push_back({close_at, std::string("channel-unilateral c ") + party[rng() % 2] +
                                  " stale=" + std::to_string(rng() % (updates + 1))});
  events.push_back({5, "auto-mine 10 " + std::to_string(close_at / 10 + 60)});
  std::stable_sort(events.begin(), events.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [at, line] : events) head << at << ' ' << line << '\n';
  return head.str();
}

Verdict dispute_dominance() {
  std::size_t violations = 0, challenged = 0;
  std::string why;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const std::string text = dispute_scenario(seed);
    NetworkConfig cfg;
    cfg.seed = seed;
    try {
      const auto r = sim::run(cfg, text);
      const auto& c = r.channels.at(0);
      challenged += c.any_honest_submission && c.max_honest_submitted > 0;
      if (c.status != "closed" || c.settled_nonce < c.max_honest_submitted) {
        ++violations;
        why = " seed " + std::to_string(seed) + ": status=" + c.status + " settled=" + std::to_string(c.settled_nonce) +
              " honest=" + std::to_string(c.max_honest_submitted);
      }
    } catch (const std::exception& e) {
      ++violations;
      why = " seed " + std::to_string(seed) + ": " + e.what();
    }
  }
  return {violations == 0, "500 interleavings, " + std::to_string(challenged) + " with honest submissions, " +
                               std::to_string(violations) + " violations" + why};
}

// --- 4 ----------------------------------------------------------------------

Verdict cuckoo() {
  PowParams p;
  p.edge_bits = 12;
  p.cycle_len = 8;
  p.target = Hash256::filled(0xff);
  p.target.bytes[0] = 0x00;

  std::size_t hits = 0;
  const std::size_t trials = 400;
  for (std::size_t i = 0; i < trials; ++i)
    hits += search_graph(ref_sha256(bytes_of("calibration-" + std::to_string(i))), 0, p).has_value();
  const double per_nonce = std::max(1.0, static_cast<double>(hits)) / trials;
  const auto budget = static_cast<std::uint64_t>(std::ceil(std::log(0.01) / std::log(1.0 - per_nonce)));

  std::size_t solved = 0, accepted = 0;
  std::vector<std::pair<Hash256, CuckooSolution>> found;
  for (int i = 0; i < 100; ++i) {
    const Hash256 h = ref_sha256(bytes_of("header-" + std::to_string(i)));
    if (const auto sol = solve(h, p, budget)) {
      ++solved;
      accepted += verify(h, *sol, p);
      found.push_back({h, *sol});
    }
  }

  std::mt19937_64 rng(4);
  std::size_t rejected = 0;
  for (int i = 0; i < 1'000; ++i) {
    CuckooSolution f;
    f.nonce = rng() % 64;
    std::set<std::uint32_t> edges;
    while (edges.size() < p.cycle_len) edges.insert(static_cast<std::uint32_t>(rng() % p.edge_count()));
    f.edges.assign(edges.begin(), edges.end());
    rejected += !verify(ref_sha256(bytes_of("forgery-" + std::to_string(i))), f, p);
  }
  std::size_t near = 0, near_rejected = 0;
  for (const auto& [h, sol] : found) {
    CuckooSolution other = sol;
    ++other.nonce;
    ++near;
    near_rejected += !verify(h, other, p);
    for (std::size_t k = 0; k < sol.edges.size(); ++k) {
      CuckooSolution m = sol;
      m.edges[k] ^= 1;
      std::sort(m.edges.begin(), m.edges.end());
      ++near;
      near_rejected += !verify(h, m, p);
    }
  }
  return {accepted == solved && rejected == 1'000 && near_rejected == near && solved >= 95,
          "p/nonce=" + std::to_string(per_nonce).substr(0, 5) + " budget=" + std::to_string(budget) +
              " solved " + std::to_string(solved) + "/100, verified " + std::to_string(accepted) + ", forgeries rejected " +
              std::to_string(rejected) + "/1000, perturbed rejected " + std::to_string(near_rejected) + "/" +
              std::to_string(near)};
}

// --- 5 ----------------------------------------------------------------------

Rational rand_unit(std::mt19937_64& rng) {
  const auto d = 1 + static_cast<std::int64_t>(rng() % 20);
  return Rational(static_cast<std::int64_t>(rng() % (d + 1)), d);
}

Verdict reward_exactness() {
  std::mt19937_64 rng(5);
  std::size_t bad = 0, carried = 0;
  for (int epoch = 0; epoch < 1'000; ++epoch) {
    reward::PoolState pool;
    pool.q = Amount(rng() % 10'000'000);
    pool.q_prev = Amount(rng() % 10'000'000);
    pool.gamma_t = Amount(rng() % 10'000'000);
    pool.alpha_step = Rational(1 + static_cast<std::int64_t>(rng() % 10), 10);
    pool.mu = Rational(static_cast<std::int64_t>(rng() % 10), 10);
    pool.pool_balance = Amount::dsd(1'000'000);

    const std::size_t k = 1 + rng() % 4, zones = 2 + rng() % 5;
    reward::EpochInputs in;
    Rational wsum = 0;
    std::vector<std::int64_t> raw_w;
    for (std::size_t i = 0; i < k; ++i) raw_w.push_back(1 + static_cast<std::int64_t>(rng() % 9));
    for (auto w : raw_w) wsum += w;
    for (auto w : raw_w) in.factor_weights.push_back(Rational(w) / wsum);

    std::map<Hash256, reward::Zone> registry;
    for (std::size_t z = 0; z < zones; ++z) {
      reward::Zone zone;
      zone.id = ref_sha256(bytes_of("zone-" + std::to_string(epoch) + "-" + std::to_string(z)));
      reward::ZoneFactorRow row{zone.id, {}};
      row.raw.push_back(Rational(static_cast<std::int64_t>(z)));  // distinct first column
      for (std::size_t i = 1; i < k; ++i) row.raw.push_back(Rational(static_cast<std::int64_t>(rng() % 100)));
      in.zones.push_back(row);
      const std::size_t members = 1 + rng() % 4;
      for (std::size_t m = 0; m < members; ++m) {
        const Address who = ref_sha256(bytes_of("m" + std::to_string(rng())));
        zone.members.insert(who);
        reward::UserContribution c;
        c.epsilon = 1 + rand_unit(rng);
        c.theta = rand_unit(rng);
        c.work.push_back({Rational(1 + static_cast<std::int64_t>(rng() % 9), 10), rand_unit(rng) + 1});
        c.usage.push_back({rand_unit(rng), {rand_unit(rng), rand_unit(rng)}});
        in.users.push_back({zone.id, who, c});
      }
      registry.emplace(zone.id, zone);
    }

    const auto rep = reward::compute_epoch(pool, registry, in);
    Amount zsum;
    std::vector<Rational> values;
    for (const auto& z : rep.zones) {
      zsum += z.allocation;
      values.push_back(z.value);
      Amount inside;
      for (const auto& u : rep.users)
        if (u.zone == z.zone) inside += u.payout;
      if (inside != z.allocation) ++bad;
    }
    if (zsum != rep.gamma || rep.distributed != rep.gamma) ++bad;
    carried += !rep.carried.is_zero();

    const Rational c(1 + static_cast<std::int64_t>(rng() % 1'000), 1 + static_cast<std::int64_t>(rng() % 7));
    std::vector<Rational> scaled;
    for (const auto& v : values) scaled.push_back(v * c);
    if (reward::allocate_to_zones(rep.gamma, values) != reward::allocate_to_zones(rep.gamma, scaled)) ++bad;

    auto user_scaled = in;
    for (auto& u : user_scaled.users) {
      u.contribution.epsilon *= c;
      u.contribution.theta *= c;
    }
    const auto rep2 = reward::compute_epoch(pool, registry, user_scaled);
    for (std::size_t i = 0; i < rep.users.size(); ++i)
      if (rep2.users[i].payout != rep.users[i].payout) ++bad;
  }
  return {bad == 0 && carried == 0, "1000 epochs, " + std::to_string(bad) + " violations, " +
                                        std::to_string(carried) + " carried"};
}

// --- 6 ----------------------------------------------------------------------

Verdict replenish_rule() {
  std::mt19937_64 rng(6);
  std::size_t bad = 0;
  for (int i = 0; i < 1'000; ++i) {
    reward::PoolState p;
    p.q = Amount(rng() % 1'000'000'000);
    p.gamma_t = Amount(rng() % 1'000'000'000);
    p.alpha_step = 1;
    p.mu = 0;
    p.pool_balance = Amount::dsd(100'000);
    if (reward::replenish(p, Amount(rng() % 1'000'000'000)).q != p.gamma_t) ++bad;

    // General step against a hand-rolled rational evaluation.
    p.alpha_step = Rational(1 + static_cast<std::int64_t>(rng() % 97), 97);
    p.mu = Rational(static_cast<std::int64_t>(rng() % 89), 89);
    const Amount next(rng() % 1'000'000'000);
    const Rational q(static_cast<std::int64_t>(p.q.base_units()));
    const Rational want = q + p.alpha_step * (Rational(static_cast<std::int64_t>(p.gamma_t.base_units())) +
                                              p.mu * Rational(static_cast<std::int64_t>(next.base_units())) - q);
    const auto fl = static_cast<std::uint64_t>(numerator(want) / denominator(want));
    if (reward::replenish(p, next).q != Amount(fl)) ++bad;
  }
  reward::PoolState fixed;
  fixed.q = Amount(100);
  fixed.alpha_step = Rational(1, 10);
  fixed.mu = Rational(9, 10);
  fixed.gamma_t = Amount(10);
  fixed.pool_balance = Amount(1'000);
  const bool fixed_point = reward::replenish(fixed, Amount(100)).q == Amount(100);
  return {bad == 0 && fixed_point, "one-step convergence on 1000 draws, " + std::to_string(bad) +
                                       " mismatches; fixed point " + (fixed_point ? "exact" : "broken")};
}

// --- 7 ----------------------------------------------------------------------

Verdict td_learning() {
  const auto mdp = opt::parse_mdp(slurp(kFixtures / "three_state.mdp"));
  const auto star = opt::value_iteration(mdp, 0.5);
  const auto want = star.greedy_policy();
  std::size_t q_ok = 0, sarsa_ok = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    opt::TrainConfig cfg;
    cfg.mode = opt::Mode::OffPolicy;
    cfg.episodes = 500;
    cfg.steps_per_episode = 100;
    cfg.seed = seed;
    cfg.gamma = 0.5;
    cfg.epsilon = 0.5;
    const auto q = opt::train(mdp, opt::QTable(mdp.states, mdp.actions), cfg);
    double err = 0;
    for (std::size_t i = 0; i < q.values().size(); ++i) err = std::max(err, std::abs(q.values()[i] - star.values()[i]));
    worst = std::max(worst, err);
    q_ok += q.greedy_policy() == want && err <= 0.05;

    cfg.mode = opt::Mode::OnPolicy;
    cfg.epsilon = 0.3;
    cfg.epsilon_halflife = 5'000;
    sarsa_ok += opt::train(mdp, opt::QTable(mdp.states, mdp.actions), cfg).greedy_policy() == want;
  }
  std::ostringstream d;
  d << "Q-learning " << q_ok << "/10 (max |Q-Q*| " << worst << "), SARSA " << sarsa_ok << "/10";
  return {q_ok == 10 && sarsa_ok >= 8, d.str()};
}

// --- 8 ----------------------------------------------------------------------

Verdict belief_propagation() {
  std::mt19937_64 rng(8);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_tree(rng, 1 + rng() % 6);
    const auto got = opt::bp_marginals(g);
    const auto want = brute_marginals(g);
    for (std::size_t v = 0; v < got.size(); ++v)
      for (std::size_t k = 0; k < got[v].size(); ++k) worst = std::max(worst, std::abs(got[v][k] - want[v][k]));
  }
  std::ostringstream d;
  d << "100 trees, max abs error " << worst;
  return {worst <= 1e-9, d.str()};
}

// --- 9 ----------------------------------------------------------------------

Verdict storage_protocol() {
  TestChain chain;
  Bytes data(32);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i * 37 + 11);
  const auto c = storage::commit_data(data, 4);
  storage::CreateTerms terms;
  terms.provider = addr("bob");
  terms.data_root = c.data_root;
  terms.chunk_count = c.chunks.size();
  terms.chunk_size = 4;
  terms.data_len = c.data_len;
  terms.reward_per_proof = Amount(10);
  terms.escrow = Amount(1'000);
  const Hash256 id = storage::create_contract(chain.state, addr("alice"), 1, terms);
  chain.state.height = 1;
  chain.state.tip_hash = ref_sha256(bytes_of("tip"));
  const auto challenged = storage::challenge_index(chain.state.tip_hash, id, 8);

  std::size_t attempts = 0, false_accepts = 0;
  for (std::uint64_t i = 0; i < 8; ++i)
    for (std::size_t pos = 0; pos < 4; ++pos)
      for (int delta = 1; delta < 256; ++delta) {
        Bytes m = c.chunks[i];
        m[pos] = static_cast<std::uint8_t>(m[pos] + delta);
        for (std::uint64_t j = 0; j < 8; ++j) {
          ++attempts;
          false_accepts += merkle_verify(c.data_root, m, merkle_prove(c.chunks, j), 8);
        }
        if (i == challenged) {
          ++attempts;
          false_accepts += !error_of([&] { storage::prove_and_pay(chain.state, id, m, merkle_prove(c.chunks, i), 2); });
        }
      }
  const bool honest = !error_of([&] {
    storage::prove_and_pay(chain.state, id, c.chunks[challenged], merkle_prove(c.chunks, challenged), 2);
  });
  const Amount quote = storage::retrieval_quote(64 * 1'024);
  return {false_accepts == 0 && honest && quote == Amount(100'000),
          std::to_string(attempts) + " mutated proofs, " + std::to_string(false_accepts) +
              " accepted; honest proof paid; 64 KiB quote " + std::to_string(quote.base_units())};
}

// --- 10 ---------------------------------------------------------------------

Verdict oracle_paths() {
  const auto r = sim::run(NetworkConfig{}, slurp(kFixtures / "oracle_paths.scn"), kFixtures);
  const State& s = r.final_state;
  struct Want {
    const char* text;
    const char* path;
    oracle::Reading reading;
    bool contested;
    bool burns;
    bool refunds;
  };
  const std::vector<Want> wants{
      {"rain-tomorrow", "accepted", oracle::Reading::Yes, false, false, true},
      {"btc-above-100k", "contested-won", oracle::Reading::Yes, true, true, true},
      {"launch-on-time", "contested-lost", oracle::Reading::No, true, true, true},
      {"nobody-answers", "expired-burn", oracle::Reading::Burned, false, true, false},
  };
  std::size_t ok = 0;
  std::string why;
  for (const auto& w : wants) {
    const Hash256 qh = ref_sha256(bytes_of(w.text));
    const auto it = std::find_if(s.oracles.begin(), s.oracles.end(),
                                 [&](const auto& kv) { return kv.second.question_hash == qh; });
    if (it == s.oracles.end()) {
      why += std::string(" ") + w.path + ":missing";
      continue;
    }
    const auto& q = it->second;
    const bool flows = q.returned + q.burned == q.escrowed && q.escrowed == q.deposit * (w.contested ? 2 : 1) &&
                       q.burned == (w.burns ? q.deposit : Amount{}) && q.returned == (w.refunds ? q.deposit : Amount{});
    const bool good = flows && oracle::read_answer(s, q.id) == w.reading && q.terminal() &&
                      (w.contested == !q.challenger.is_zero());
    if (good)
      ++ok;
    else
      why += std::string(" ") + w.path + ":wrong";
  }
  return {ok == 4, std::to_string(ok) + "/4 terminal paths exact" + why};
}

// --- 11 ---------------------------------------------------------------------

Verdict light_client() {
  TestChain chain;
  for (int b = 0; b < 20; ++b) {
    std::vector<Tx> txs;
    for (int i = 0; i <= b % 4; ++i)
      txs.push_back(chain.tx(b % 2 ? "alice" : "bob", tx::Spend{addr("carol"), Amount(1 + b * 10 + i)}));
    chain.mine(txs);
  }
  const auto& pow = chain.state.params.pow;
  std::size_t honest = 0, honest_ok = 0, mutants = 0, caught = 0;
  for (std::size_t b = 1; b < chain.blocks.size(); ++b) {
    const std::vector<BlockHeader> prefix(chain.headers.begin(), chain.headers.begin() + static_cast<long>(b) + 1);
    const auto leaves = chain.blocks[b].tx_leaves();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const auto proof = merkle_prove(leaves, i);
      ++honest;
      honest_ok += verify_light(prefix, leaves[i], proof, leaves.size(), pow);
    }
  }

  // Single-field mutations against the last block's final transaction.
  const auto& last = chain.blocks.back();
  const auto leaves = last.tx_leaves();
  const std::size_t idx = leaves.size() - 1;
  const Bytes tx = leaves[idx];
  const MerkleProof proof = merkle_prove(leaves, idx);
  auto reject = [&](const std::vector<BlockHeader>& hs, const Bytes& t, const MerkleProof& p) {
    ++mutants;
    caught += !verify_light(hs, t, p, leaves.size(), pow);
  };
  for (std::size_t h = 0; h < chain.headers.size(); ++h) {
    auto edit = [&](const std::function<void(BlockHeader&)>& f) {
      auto hs = chain.headers;
      f(hs[h]);
      reject(hs, tx, proof);
    };
    edit([](BlockHeader& x) { ++x.height; });
    for (Hash256 BlockHeader::*field :
         {&BlockHeader::prev_hash, &BlockHeader::tx_root, &BlockHeader::account_root, &BlockHeader::name_root,
          &BlockHeader::wormhole_root, &BlockHeader::oracle_open_root, &BlockHeader::oracle_answer_root,
          &BlockHeader::proof_root, &BlockHeader::entropy, &BlockHeader::miner})
      edit([&](BlockHeader& x) { (x.*field).bytes[7] ^= 0x10; });
    edit([](BlockHeader& x) { ++x.pow_nonce; });
    for (std::size_t k = 0; k < chain.headers[h].pow_cycle.size(); ++k)
      edit([&](BlockHeader& x) { x.pow_cycle[k] ^= 1; });
    edit([](BlockHeader& x) { x.pow_cycle.pop_back(); });
  }
  for (std::size_t i = 0; i < tx.size(); ++i) {
    Bytes t = tx;
    t[i] ^= 0x01;
    reject(chain.headers, t, proof);
  }
  for (std::uint64_t j = 0; j < leaves.size() + 2; ++j) {
    if (j == idx) continue;
    MerkleProof p = proof;
    p.leaf_index = j;
    reject(chain.headers, tx, p);
  }
  for (std::size_t s = 0; s < proof.siblings.size(); ++s) {
    MerkleProof p = proof;
    p.siblings[s].bytes[0] ^= 0x01;
    reject(chain.headers, tx, p);
  }
  {
    MerkleProof p = proof;
    p.siblings.pop_back();
    reject(chain.headers, tx, p);
    p = proof;
    p.siblings.push_back(Hash256{});
    reject(chain.headers, tx, p);
  }
  return {honest_ok == honest && caught == mutants,
          std::to_string(honest_ok) + "/" + std::to_string(honest) + " honest accepted, " + std::to_string(caught) +
              "/" + std::to_string(mutants) + " mutations rejected"};
}

// --- 12 ---------------------------------------------------------------------

std::string capture(const std::string& cmd) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), n);
  return out;
}

Verdict determinism() {
  std::size_t same = 0, total = 0;
  std::string why;
  for (const auto& f : scenarios()) {
    ++total;
    const std::string cmd = std::string(DSDIN_CLI) + " --seed 7 sim run '" + f.string() + "' 2>&1";
    const auto a = capture(cmd), b = capture(cmd);
    if (a == b && a.find("state_root=") != std::string::npos)
      ++same;
    else
      why += " " + f.filename().string();
  }
  return {same == total && total >= 12,
          std::to_string(same) + "/" + std::to_string(total) + " scenarios byte-identical" + why};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 means no runtime bound
    Verdict (*run)();
  };
  const std::vector<Criterion> all{
      {1, "conservation", 10, conservation},
      {2, "fee semantics", 0, fee_semantics},
      {3, "channel dispute dominance", 30, dispute_dominance},
      {4, "cuckoo pow", 60, cuckoo},
      {5, "reward exactness", 5, reward_exactness},
      {6, "replenish rule", 0, replenish_rule},
      {7, "td learning", 30, td_learning},
      {8, "belief propagation", 5, belief_propagation},
      {9, "storage protocol", 0, storage_protocol},
      {10, "oracle lifecycle", 0, oracle_paths},
      {11, "light client", 0, light_client},
      {12, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("%s %2d %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
