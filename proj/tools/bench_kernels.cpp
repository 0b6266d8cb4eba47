// Serial vs OpenMP kernels: Cuckoo edge derivation, nonce search, Merkle roots.

#include <benchmark/benchmark.h>

#include "dsdin/merkle.hpp"
#include "dsdin/pow.hpp"

using namespace dsdin;

namespace {

PowParams bench_params(std::uint32_t edge_bits) {
  PowParams p;
  p.edge_bits = edge_bits;
  p.cycle_len = 8;
  p.target = Hash256::from_hex("00ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff");
  return p;
}

std::vector<Hash256> leaves(std::size_t n) {
  std::vector<Hash256> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = Hasher().update_u64(i).finish();
  return out;
}

void BM_DeriveEdgesSerial(benchmark::State& st) {
  const SipKeys keys = graph_keys(sha256("bench"), 0);
  for (auto _ : st) benchmark::DoNotOptimize(derive_edges_serial(keys, static_cast<std::uint32_t>(st.range(0))));
  st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << st.range(0)));
}

void BM_DeriveEdgesParallel(benchmark::State& st) {
  const SipKeys keys = graph_keys(sha256("bench"), 0);
  for (auto _ : st) benchmark::DoNotOptimize(derive_edges(keys, static_cast<std::uint32_t>(st.range(0))));
  st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << st.range(0)));
}

void BM_SolveSerial(benchmark::State& st) {
  const PowParams p = bench_params(12);
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(solve_serial(Hasher().update_u64(i++).finish(), p, 200));
}

void BM_SolveParallel(benchmark::State& st) {
  const PowParams p = bench_params(12);
  std::uint64_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(solve(Hasher().update_u64(i++).finish(), p, 200));
}

void BM_MerkleSerial(benchmark::State& st) {
  const auto level = leaves(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(merkle_root_serial(level));
}

void BM_MerkleParallel(benchmark::State& st) {
  const auto level = leaves(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(merkle_root_from_hashes(level));
}

}  // namespace

BENCHMARK(BM_DeriveEdgesSerial)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_DeriveEdgesParallel)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_SolveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MerkleSerial)->Arg(1 << 10)->Arg(1 << 16);
BENCHMARK(BM_MerkleParallel)->Arg(1 << 10)->Arg(1 << 16);

BENCHMARK_MAIN();
