#pragma once

#include <sodium.h>

#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dsdin/bp.hpp"
#include "dsdin/config.hpp"
#include "dsdin/engine.hpp"
#include "dsdin/learning.hpp"
#include "dsdin/templates.hpp"

namespace dsdin {

inline std::ostream& operator<<(std::ostream& os, const Amount& a) { return os << a.str(); }
inline std::ostream& operator<<(std::ostream& os, const Hash256& h) { return os << h.hex(); }

}  // namespace dsdin

namespace dsdin::test {

// SHA-256 straight from libsodium, bypassing the library's Hasher.
inline Hash256 ref_sha256(ByteView data) {
  Hash256 h;
  crypto_hash_sha256(h.bytes.data(), data.data(), data.size());
  return h;
}

inline Hash256 ref_pair(const Hash256& a, const Hash256& b) {
  Bytes buf(a.bytes.begin(), a.bytes.end());
  buf.insert(buf.end(), b.bytes.begin(), b.bytes.end());
  return ref_sha256(buf);
}

// hash_word recomputed: first eight bytes of SHA-256 over the big-endian word.
inline std::int64_t ref_hash_word(std::int64_t x) {
  Bytes be(8);
  for (int i = 0; i < 8; ++i) be[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(x) >> (56 - 8 * i));
  const Hash256 h = ref_sha256(be);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | h.bytes[static_cast<std::size_t>(i)];
  return static_cast<std::int64_t>(v);
}

// Runs fn and returns the code of the dsdin::Error it throws.
inline std::optional<Errc> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline Params fast_params() {
  Params p;
  p.pow.edge_bits = 8;
  p.pow.cycle_len = 4;
  return p;
}

inline Address addr(std::string_view name) { return KeyPair::from_name(name).address(); }

// Single-node chain over the real block pipeline.
struct TestChain {
  GenesisConfig genesis;
  State state;
  std::vector<BlockHeader> headers;
  std::vector<Block> blocks;
  std::map<Address, std::uint64_t> next_counter;

  explicit TestChain(Params params = fast_params(),
                     std::vector<std::string> names = {"alice", "bob", "carol", "dave"},
                     Amount each = Amount::dsd(1'000)) {
    genesis.params = params;
    for (const auto& n : names) genesis.accounts.push_back({addr(n), each});
    genesis.pool_endowment = Amount::dsd(100'000);
    genesis.founder = addr("miner");
    state = genesis_state(genesis);
    const Block g = genesis_block(genesis);
    headers.push_back(g.header);
    blocks.push_back(g);
  }

  Tx tx(std::string_view who, Payload p, std::uint64_t gas = 100, std::uint64_t price = 1) {
    const KeyPair k = KeyPair::from_name(who);
    auto& c = next_counter[k.address()];
    if (c == 0) {
      const Account* a = state.find(k.address());
      c = (a ? a->counter : 0) + 1;
    }
    return make_tx(k, c++, gas, price, std::move(p));
  }

  std::vector<Receipt> mine(const std::vector<Tx>& txs, std::string_view miner = "miner") {
    BlockTemplate t = assemble_block(state, addr(miner), txs);
    mine_header(t.block.header, headers.back(), state.params.pow, state.params.pow_nonce_budget);
    State next = state;
    auto receipts = apply_block(next, t.block);
    state = std::move(next);
    headers.push_back(t.block.header);
    blocks.push_back(t.block);
    next_counter.clear();
    return receipts;
  }

  void advance(std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) mine({});
  }
};

// Joint enumeration of the unnormalised product of all potentials.
inline std::vector<std::vector<double>> brute_marginals(const opt::FactorTree& g) {
  const std::size_t n = g.domain.size();
  std::vector<std::vector<double>> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v].assign(g.domain[v], 0.0);
  std::vector<std::size_t> x(n, 0);
  double z = 0;
  while (true) {
    double w = 1;
    for (std::size_t v = 0; v < n; ++v) w *= g.unary[v][x[v]];
    for (const auto& e : g.edges) w *= e.table[x[e.a] * g.domain[e.b] + x[e.b]];
    z += w;
    for (std::size_t v = 0; v < n; ++v) out[v][x[v]] += w;
    std::size_t v = 0;
    while (v < n && ++x[v] == g.domain[v]) x[v++] = 0;
    if (v == n) break;
  }
  for (auto& m : out)
    for (auto& p : m) p /= z;
  return out;
}

inline opt::FactorTree random_tree(std::mt19937_64& rng, std::size_t n) {
  opt::FactorTree g;
  for (std::size_t v = 0; v < n; ++v) {
    g.domain.push_back(1 + rng() % 3);
    std::vector<double> u;
    for (std::size_t k = 0; k < g.domain[v]; ++k) u.push_back(0.05 + opt::unit_draw(rng) * 3);
    g.unary.push_back(u);
  }
  for (std::size_t v = 1; v < n; ++v) {
    opt::PairPotential e;
    e.a = rng() % v;
    e.b = v;
    if (rng() % 2) std::swap(e.a, e.b);
    for (std::size_t k = 0; k < g.domain[e.a] * g.domain[e.b]; ++k) e.table.push_back(0.05 + opt::unit_draw(rng) * 3);
    g.edges.push_back(e);
  }
  return g;
}


}  // namespace dsdin::test
