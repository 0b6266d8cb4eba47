#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/hash.hpp"

namespace dsdin {

struct State;

struct PowParams {
  std::uint32_t edge_bits = 12;
  std::uint32_t cycle_len = 42;
  Hash256 target = Hash256::filled(0xff);

  /// Throws BadFormat unless 4 <= edge_bits <= 31 and cycle_len is even, >= 4.
  void validate() const;
  std::uint64_t edge_count() const noexcept { return std::uint64_t{1} << edge_bits; }
};

struct CuckooSolution {
  std::uint64_t nonce = 0;
  std::vector<std::uint32_t> edges;  // strictly increasing edge indices

  bool operator==(const CuckooSolution&) const = default;
};

struct SipKeys {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
};

std::uint64_t siphash24(const SipKeys& keys, std::uint64_t message) noexcept;

/// Siphash keys for one (header, nonce) graph instance.
SipKeys graph_keys(const Hash256& header_hash, std::uint64_t nonce);

/// Endpoints of one edge. `u` lies in partition U and `v` in partition V;
/// each partition has 2^(edge_bits-1) nodes.
struct GraphEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  bool operator==(const GraphEdge&) const = default;
};

GraphEdge derive_edge(const SipKeys& keys, std::uint64_t edge_index, std::uint32_t edge_bits) noexcept;
GraphEdge derive_edge(const Hash256& header_hash, std::uint64_t nonce, std::uint64_t edge_index,
                      std::uint32_t edge_bits);

std::vector<GraphEdge> derive_edges(const SipKeys& keys, std::uint32_t edge_bits);
std::vector<GraphEdge> derive_edges_serial(const SipKeys& keys, std::uint32_t edge_bits);

Hash256 solution_digest(const Hash256& header_hash, const CuckooSolution& solution);
bool meets_target(const Hash256& digest, const Hash256& target) noexcept;

/// Searches one graph for a cycle of exactly `cycle_len` edges whose digest
/// meets the target. Deterministic: cycles are enumerated anchored at their
/// smallest edge, in ascending anchor order.
std::optional<CuckooSolution> search_graph(const Hash256& header_hash, std::uint64_t nonce, const PowParams& params);

/// Tries nonces start, start+1, ... and returns the lowest successful one.
/// Nonces are searched in parallel batches; the result equals solve_serial.
/// Setting `cancel` aborts with nullopt.
std::optional<CuckooSolution> solve(const Hash256& header_hash, const PowParams& params, std::uint64_t nonce_budget,
                                    std::uint64_t start_nonce = 0, const std::atomic<bool>* cancel = nullptr);
std::optional<CuckooSolution> solve_serial(const Hash256& header_hash, const PowParams& params,
                                           std::uint64_t nonce_budget, std::uint64_t start_nonce = 0);

/// O(cycle_len) verification of the cycle relation and the difficulty test.
bool verify(const Hash256& header_hash, const CuckooSolution& solution, const PowParams& params);

struct EmissionParams {
  Amount initial_reward = Amount::dsd(50);
  std::uint64_t halving_interval = 100'000;
};

/// Block reward at `height` (>= 1): initial_reward halved every interval.
Amount coinbase(std::uint64_t height, const EmissionParams& params);

/// Closed form of the sum of coinbase(1..height).
Amount emission_through(std::uint64_t height, const EmissionParams& params);

/// Oracle voting weight: the plain account balance; absent accounts weigh 0.
std::uint64_t stake_weight(const State& state, const Address& address);

}  // namespace dsdin
