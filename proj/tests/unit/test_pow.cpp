#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "support.hpp"

using namespace dsdin;
using namespace dsdin::test;

namespace {

PowParams params_12_8() {
  PowParams p;
  p.edge_bits = 12;
  p.cycle_len = 8;
  p.target = Hash256::from_hex("00ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff");
  return p;
}

// Independent cycle check: every endpoint has degree two and the edges form
// one connected loop.
bool is_single_cycle(const Hash256& header, const CuckooSolution& s, std::uint32_t edge_bits, std::size_t len) {
  if (s.edges.size() != len) return false;
  std::map<std::pair<int, std::uint32_t>, std::vector<std::size_t>> incident;
  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    const GraphEdge e = derive_edge(header, s.nonce, s.edges[i], edge_bits);
    incident[{0, e.u}].push_back(i);
    incident[{1, e.v}].push_back(i);
  }
  for (const auto& [node, es] : incident)
    if (es.size() != 2) return false;
  std::set<std::size_t> seen{0};
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const GraphEdge e = derive_edge(header, s.nonce, s.edges[i], edge_bits);
    for (auto key : {std::pair<int, std::uint32_t>{0, e.u}, std::pair<int, std::uint32_t>{1, e.v}})
      for (std::size_t j : incident[key])
        if (seen.insert(j).second) stack.push_back(j);
  }
  return seen.size() == len;
}

}  // namespace

TEST_CASE("siphash24 matches the reference test vector") {
  const SipKeys k{0x0706050403020100ull, 0x0f0e0d0c0b0a0908ull};
  CHECK(siphash24(k, 0x0706050403020100ull) == 0x93f5f5799a932462ull);
}

TEST_CASE("edges are deterministic and land in their partitions") {
  const Hash256 h = sha256(std::string_view("header"));
  const auto keys = graph_keys(h, 3);
  const auto edges = derive_edges(keys, 12);
  CHECK(edges == derive_edges_serial(keys, 12));
  CHECK(edges.size() == 4096);
  for (std::uint64_t i = 0; i < edges.size(); ++i) {
    CHECK(edges[i].u < 2048u);
    CHECK(edges[i].v < 2048u);
    if (i % 512 == 0) CHECK(edges[i] == derive_edge(h, 3, i, 12));
  }
}

TEST_CASE("node degrees stay close to the mean") {
  const auto edges = derive_edges(graph_keys(sha256(std::string_view("histogram")), 0), 12);
  std::map<std::uint32_t, int> du, dv;
  for (const auto& e : edges) {
    ++du[e.u];
    ++dv[e.v];
  }
  int max_deg = 0;
  for (const auto* m : {&du, &dv})
    for (const auto& [node, d] : *m) max_deg = std::max(max_deg, d);
  // Mean degree is 2; a Poisson(2) tail beyond 15 over 4096 nodes has
  // probability below 1e-8.
  CHECK(max_deg <= 15);
  CHECK(max_deg <= 40);
}

TEST_CASE("solve produces cycles that verify and satisfy the target") {
  const PowParams p = params_12_8();
  int solved = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const Hash256 h = Hasher().update_str("pow-unit").update_u64(i).finish();
    const auto s = solve(h, p, 200);
    if (!s) continue;
    ++solved;
    CHECK(verify(h, *s, p));
    CHECK(is_single_cycle(h, *s, p.edge_bits, p.cycle_len));
    CHECK(meets_target(solution_digest(h, *s), p.target));
    CHECK(std::is_sorted(s->edges.begin(), s->edges.end()));
    CHECK(*s == *solve_serial(h, p, 200));
  }
  CHECK(solved >= 9);
}

TEST_CASE("verify rejects perturbed edges and raised difficulty") {
  const PowParams p = params_12_8();
  const Hash256 h = sha256(std::string_view("perturb"));
  const auto s = solve(h, p, 500);
  REQUIRE(s);
  for (std::size_t i = 0; i < s->edges.size(); ++i) {
    CuckooSolution bad = *s;
    bad.edges[i] ^= 1;
    CHECK_FALSE(verify(h, bad, p));
  }
  CuckooSolution other_nonce = *s;
  ++other_nonce.nonce;
  CHECK_FALSE(verify(h, other_nonce, p));
  // Lower the target just below this solution's digest.
  PowParams harder = p;
  harder.target = solution_digest(h, *s);
  for (int i = 31; i >= 0; --i) {
    if (harder.target.bytes[i] > 0) {
      --harder.target.bytes[i];
      break;
    }
    harder.target.bytes[i] = 0xff;
  }
  CHECK(is_single_cycle(h, *s, p.edge_bits, p.cycle_len));
  CHECK_FALSE(verify(h, *s, harder));
}

TEST_CASE("random forgeries of the right length never verify") {
  PowParams p = params_12_8();
  p.target = Hash256::filled(0xff);
  std::mt19937_64 rng(99);
  const Hash256 h = sha256(std::string_view("forge"));
  for (int i = 0; i < 1000; ++i) {
    std::set<std::uint32_t> picks;
    while (picks.size() < p.cycle_len) picks.insert(static_cast<std::uint32_t>(rng() % p.edge_count()));
    CuckooSolution s{rng() % 1000, {picks.begin(), picks.end()}};
    REQUIRE_FALSE(verify(h, s, p));
  }
}

TEST_CASE("an all-zero target is unsatisfiable") {
  PowParams p;
  p.edge_bits = 8;
  p.cycle_len = 4;
  p.target = Hash256{};
  CHECK_FALSE(solve(sha256(std::string_view("zero")), p, 50).has_value());
  BlockHeader hdr;
  try {
    mine_header(hdr, std::nullopt, p, 50);
    FAIL("expected PowNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PowNotFound);
  }
}

TEST_CASE("emission follows the halving schedule") {
  EmissionParams e;
  CHECK(coinbase(1, e) == Amount(50'000'000));
  CHECK(coinbase(e.halving_interval, e) == Amount(50'000'000));
  CHECK(coinbase(e.halving_interval + 1, e) == Amount(25'000'000));
  Amount sum;
  for (std::uint64_t h = 1; h <= 2 * e.halving_interval; ++h) sum += coinbase(h, e);
  CHECK(sum == Amount::dsd(e.halving_interval * 75));
  CHECK(emission_through(2 * e.halving_interval, e) == sum);
  EmissionParams small{Amount(1'000), 7};
  Amount running;
  for (std::uint64_t h = 1; h <= 100; ++h) {
    running += coinbase(h, small);
    REQUIRE(emission_through(h, small) == running);
  }
}

TEST_CASE("stake weight reads the liquid balance only") {
  TestChain chain;
  CHECK(stake_weight(chain.state, addr("alice")) == 1'000'000'000u);
  CHECK(stake_weight(chain.state, addr("nobody")) == 0u);
  auto t = chain.tx("alice", tx::ChannelOpen{addr("bob"), Amount::dsd(10), Amount::dsd(5), {}});
  std::get<tx::ChannelOpen>(t.payload).counterparty_sig = KeyPair::from_name("bob").sign(t.signing_bytes());
  chain.mine({t});
  CHECK(stake_weight(chain.state, addr("alice")) == Amount::dsd(990).base_units() - 100);
}
