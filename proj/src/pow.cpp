#include "dsdin/pow.hpp"

#include <algorithm>

#include <omp.h>

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"

namespace dsdin {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int b) noexcept { return (x << b) | (x >> (64 - b)); }

// DFS work cap per graph; a graph that exhausts it yields no solution.
constexpr std::uint64_t kSearchStepCap = std::uint64_t{1} << 22;

class CycleSearch {
 public:
  CycleSearch(const Hash256& header, std::uint64_t nonce, const PowParams& params,
              const std::vector<GraphEdge>& edges)
      : header_(header), nonce_(nonce), params_(params), edges_(edges) {
    // Node ids: U nodes are 2*u, V nodes 2*v+1.
    const std::size_t nodes = std::size_t{1} << params.edge_bits;
    alive_.assign(edges.size(), true);
    std::vector<std::uint32_t> degree(nodes, 0);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
      ++degree[2 * edges[e].u];
      ++degree[2 * edges[e].v + 1];
    }
    trim(degree);
    // Surviving edges in compressed rows: adj_[offset_[n] .. offset_[n + 1]).
    offset_.assign(nodes + 1, 0);
    for (std::size_t n = 0; n < nodes; ++n) offset_[n + 1] = offset_[n] + degree[n];
    adj_.resize(offset_[nodes]);
    std::vector<std::uint32_t> fill(offset_.begin(), offset_.end() - 1);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
      if (!alive_[e]) continue;
      const std::uint32_t a = 2 * edges[e].u, b = 2 * edges[e].v + 1;
      adj_[fill[a]++] = {e, b};
      adj_[fill[b]++] = {e, a};
    }
    on_path_.assign(nodes, false);
  }

  std::optional<CuckooSolution> run() {
    for (std::uint32_t e0 = 0; e0 < edges_.size(); ++e0) {
      if (!alive_[e0]) continue;
      anchor_ = e0;
      start_ = 2 * edges_[e0].u;
      path_.assign(1, e0);
      on_path_[start_] = true;
      const std::uint32_t first = 2 * edges_[e0].v + 1;
      on_path_[first] = true;
      bool found = dfs(first);
      on_path_[first] = false;
      on_path_[start_] = false;
      if (found) return result_;
      if (steps_ > kSearchStepCap) break;
    }
    return std::nullopt;
  }

 private:
  // Leaf edges cannot lie on a cycle; peel them repeatedly.
  void trim(std::vector<std::uint32_t>& degree) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        if (!alive_[e]) continue;
        const std::uint32_t a = 2 * edges_[e].u, b = 2 * edges_[e].v + 1;
        if (degree[a] == 1 || degree[b] == 1) {
          alive_[e] = false;
          --degree[a];
          --degree[b];
          changed = true;
        }
      }
    }
  }

  bool dfs(std::uint32_t node) {
    if (++steps_ > kSearchStepCap) return false;
    const std::size_t depth = path_.size();
    for (std::uint32_t k = offset_[node]; k < offset_[node + 1]; ++k) {
      const auto [e, next] = adj_[k];
      if (e <= anchor_) continue;
      if (depth + 1 == params_.cycle_len) {
        if (next != start_) continue;
        path_.push_back(e);
        if (accept()) return true;
        path_.pop_back();
        continue;
      }
      if (on_path_[next]) continue;
      on_path_[next] = true;
      path_.push_back(e);
      const bool found = dfs(next);
      path_.pop_back();
      on_path_[next] = false;
      if (found) return true;
      if (steps_ > kSearchStepCap) return false;
    }
    return false;
  }

  bool accept() {
    CuckooSolution sol{nonce_, path_};
    std::sort(sol.edges.begin(), sol.edges.end());
    if (!meets_target(solution_digest(header_, sol), params_.target)) return false;
    result_ = std::move(sol);
    return true;
  }

  const Hash256& header_;
  std::uint64_t nonce_;
  const PowParams& params_;
  const std::vector<GraphEdge>& edges_;
  std::vector<std::uint32_t> offset_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> adj_;  // (edge, other node)
  std::vector<bool> alive_;
  std::vector<bool> on_path_;
  std::vector<std::uint32_t> path_;
  std::uint32_t anchor_ = 0;
  std::uint32_t start_ = 0;
  std::uint64_t steps_ = 0;
  CuckooSolution result_;
};

}  // namespace

void PowParams::validate() const {
  if (edge_bits < 4 || edge_bits > 31) throw Error(Errc::BadFormat, "edge_bits must lie in [4, 31]");
  if (cycle_len < 4 || cycle_len % 2 != 0) throw Error(Errc::BadFormat, "cycle_len must be even and >= 4");
}

std::uint64_t siphash24(const SipKeys& keys, std::uint64_t message) noexcept {
  std::uint64_t v0 = keys.k0 ^ 0x736f6d6570736575ULL;
  std::uint64_t v1 = keys.k1 ^ 0x646f72616e646f6dULL;
  std::uint64_t v2 = keys.k0 ^ 0x6c7967656e657261ULL;
  std::uint64_t v3 = keys.k1 ^ 0x7465646279746573ULL;
  auto round = [&] {
    v0 += v1; v2 += v3; v1 = rotl(v1, 13);
    v3 = rotl(v3, 16); v1 ^= v0; v3 ^= v2;
    v0 = rotl(v0, 32); v2 += v1; v0 += v3;
    v1 = rotl(v1, 17); v3 = rotl(v3, 21);
    v1 ^= v2; v3 ^= v0; v2 = rotl(v2, 32);
  };
  // Single 8-byte block followed by the length block (8 << 56).
  v3 ^= message;
  round();
  round();
  v0 ^= message;
  const std::uint64_t b = std::uint64_t{8} << 56;
  v3 ^= b;
  round();
  round();
  v0 ^= b;
  v2 ^= 0xff;
  round();
  round();
  round();
  round();
  return v0 ^ v1 ^ v2 ^ v3;
}

SipKeys graph_keys(const Hash256& header_hash, std::uint64_t nonce) {
  const Hash256 k = Hasher().update_str("cuckoo").update(header_hash).update_u64(nonce).finish();
  SipKeys keys;
  for (int i = 0; i < 8; ++i) {
    keys.k0 = (keys.k0 << 8) | k.bytes[i];
    keys.k1 = (keys.k1 << 8) | k.bytes[8 + i];
  }
  return keys;
}

GraphEdge derive_edge(const SipKeys& keys, std::uint64_t edge_index, std::uint32_t edge_bits) noexcept {
  const std::uint64_t mask = (std::uint64_t{1} << (edge_bits - 1)) - 1;
  return {static_cast<std::uint32_t>(siphash24(keys, 2 * edge_index) & mask),
          static_cast<std::uint32_t>(siphash24(keys, 2 * edge_index + 1) & mask)};
}

GraphEdge derive_edge(const Hash256& header_hash, std::uint64_t nonce, std::uint64_t edge_index,
                      std::uint32_t edge_bits) {
  return derive_edge(graph_keys(header_hash, nonce), edge_index, edge_bits);
}

std::vector<GraphEdge> derive_edges_serial(const SipKeys& keys, std::uint32_t edge_bits) {
  std::vector<GraphEdge> out(std::size_t{1} << edge_bits);
  for (std::size_t e = 0; e < out.size(); ++e) out[e] = derive_edge(keys, e, edge_bits);
  return out;
}

std::vector<GraphEdge> derive_edges(const SipKeys& keys, std::uint32_t edge_bits) {
  std::vector<GraphEdge> out(std::size_t{1} << edge_bits);
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (std::int64_t e = 0; e < n; ++e) out[e] = derive_edge(keys, static_cast<std::uint64_t>(e), edge_bits);
  return out;
}

Hash256 solution_digest(const Hash256& header_hash, const CuckooSolution& solution) {
  Writer w;
  w.hash(header_hash).u64(solution.nonce).u32(static_cast<std::uint32_t>(solution.edges.size()));
  for (auto e : solution.edges) w.u32(e);
  return sha256(w.data());
}

bool meets_target(const Hash256& digest, const Hash256& target) noexcept { return digest < target; }

std::optional<CuckooSolution> search_graph(const Hash256& header_hash, std::uint64_t nonce, const PowParams& params) {
  const auto edges = derive_edges_serial(graph_keys(header_hash, nonce), params.edge_bits);
  return CycleSearch(header_hash, nonce, params, edges).run();
}

std::optional<CuckooSolution> solve_serial(const Hash256& header_hash, const PowParams& params,
                                           std::uint64_t nonce_budget, std::uint64_t start_nonce) {
  params.validate();
  if (params.target.is_zero()) return std::nullopt;
  for (std::uint64_t i = 0; i < nonce_budget; ++i) {
    if (auto sol = search_graph(header_hash, start_nonce + i, params)) return sol;
  }
  return std::nullopt;
}

std::optional<CuckooSolution> solve(const Hash256& header_hash, const PowParams& params, std::uint64_t nonce_budget,
                                    std::uint64_t start_nonce, const std::atomic<bool>* cancel) {
  params.validate();
  if (params.target.is_zero()) return std::nullopt;
  // One nonce per thread per round; the lowest solving nonce wins.
  const auto kBatch = static_cast<std::uint64_t>(std::max(1, omp_get_max_threads()));
  for (std::uint64_t base = 0; base < nonce_budget; base += kBatch) {
    if (cancel != nullptr && cancel->load(std::memory_order_relaxed)) return std::nullopt;
    const auto width = static_cast<std::int64_t>(std::min(kBatch, nonce_budget - base));
    std::vector<std::optional<CuckooSolution>> found(static_cast<std::size_t>(width));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < width; ++i) {
      if (cancel != nullptr && cancel->load(std::memory_order_relaxed)) continue;
      found[i] = search_graph(header_hash, start_nonce + base + static_cast<std::uint64_t>(i), params);
    }
    if (cancel != nullptr && cancel->load(std::memory_order_relaxed)) return std::nullopt;
    for (auto& f : found)
      if (f) return std::move(f);
  }
  return std::nullopt;
}

bool verify(const Hash256& header_hash, const CuckooSolution& solution, const PowParams& params) {
  if (params.edge_bits < 4 || params.edge_bits > 31 || params.cycle_len < 4 || params.cycle_len % 2) return false;
  const std::size_t n = params.cycle_len;
  if (solution.edges.size() != n) return false;
  const std::uint64_t limit = params.edge_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (solution.edges[i] >= limit) return false;
    if (i > 0 && solution.edges[i] <= solution.edges[i - 1]) return false;
  }
  const SipKeys keys = graph_keys(header_hash, solution.nonce);
  // Endpoints interleaved: uv[2i] in U, uv[2i+1] in V.
  std::vector<std::uint32_t> uv(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const GraphEdge e = derive_edge(keys, solution.edges[i], params.edge_bits);
    uv[2 * i] = e.u;
    uv[2 * i + 1] = e.v;
  }
  // Walk the cycle: from each endpoint, the unique other edge sharing that
  // node on the same side must exist, and the walk must close after n edges.
  std::size_t i = 0;
  std::size_t visited = 0;
  do {
    std::size_t j = i;
    for (std::size_t k = (i + 2) % (2 * n); k != i; k = (k + 2) % (2 * n)) {
      if (uv[k] == uv[i]) {
        if (j != i) return false;  // node of degree > 2
        j = k;
      }
    }
    if (j == i) return false;  // dead end
    i = j ^ 1;
    ++visited;
  } while (i != 0 && visited <= n);
  if (visited != n) return false;
  return meets_target(solution_digest(header_hash, solution), params.target);
}

Amount coinbase(std::uint64_t height, const EmissionParams& params) {
  if (height == 0) throw Error(Errc::BadFormat, "coinbase height must be >= 1");
  const std::uint64_t halvings = (height - 1) / params.halving_interval;
  if (halvings >= 64) return Amount{};
  return Amount(params.initial_reward.base_units() >> halvings);
}

Amount emission_through(std::uint64_t height, const EmissionParams& params) {
  Amount total;
  const std::uint64_t full_eras = height / params.halving_interval;
  for (std::uint64_t era = 0; era < full_eras && era < 64; ++era)
    total += Amount(params.initial_reward.base_units() >> era) * params.halving_interval;
  const std::uint64_t rest = height % params.halving_interval;
  if (full_eras < 64) total += Amount(params.initial_reward.base_units() >> full_eras) * rest;
  return total;
}

}  // namespace dsdin
