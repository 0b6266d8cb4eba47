#include "dsdin/config.hpp"

#include <charconv>
#include <sstream>

#include "dsdin/error.hpp"

namespace dsdin {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_uint(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw Error(Errc::BadFormat, std::string(key) + ": expected an unsigned integer");
  return out;
}

}  // namespace

Amount parse_amount(std::string_view text) {
  std::string_view t = text;
  bool dsd = false;
  if (t.size() > 3 && t.substr(t.size() - 3) == "dsd") {
    dsd = true;
    t.remove_suffix(3);
  }
  const Rational r = parse_rational(t) * (dsd ? Rational(Amount::kPerDsd) : Rational(1));
  if (r < 0 || boost::multiprecision::denominator(r) != 1)
    throw Error(Errc::BadFormat, "amount '" + std::string(text) + "' is not a whole number of base units");
  const auto n = boost::multiprecision::numerator(r);
  if (n > std::numeric_limits<std::uint64_t>::max()) throw Error(Errc::Overflow, "amount too large");
  return Amount(n.convert_to<std::uint64_t>());
}

NetworkConfig::NetworkConfig() {
  params.pow.edge_bits = 8;
  params.pow.cycle_len = 4;
  for (const char* name : {"alice", "bob", "carol", "dave"}) accounts[name] = Amount::dsd(1'000);
}

void NetworkConfig::set(std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "seed") seed = parse_uint<std::uint64_t>(k, value);
  else if (k == "nodes") nodes = parse_uint<std::size_t>(k, value);
  else if (k == "latency.min") latency_min = parse_uint<std::uint64_t>(k, value);
  else if (k == "latency.max") latency_max = parse_uint<std::uint64_t>(k, value);
  else if (k == "drop_rate") drop_rate = parse_rational(value).convert_to<double>();
  else if (k == "retry_ticks") retry_ticks = parse_uint<std::uint64_t>(k, value);
  else if (k == "max_retries") max_retries = parse_uint<std::uint32_t>(k, value);
  else if (k == "event_budget") event_budget = parse_uint<std::uint64_t>(k, value);
  else if (k == "gas_price") gas_price = parse_uint<std::uint64_t>(k, value);
  else if (k == "default_gas") default_gas = parse_uint<std::uint64_t>(k, value);
  else if (k == "contract_gas") contract_gas = parse_uint<std::uint64_t>(k, value);
  else if (k == "pow.edge_bits") params.pow.edge_bits = parse_uint<std::uint32_t>(k, value);
  else if (k == "pow.cycle_len") params.pow.cycle_len = parse_uint<std::uint32_t>(k, value);
  else if (k == "pow.target_hex") params.pow.target = Hash256::from_hex(value);
  else if (k == "pow.nonce_budget") params.pow_nonce_budget = parse_uint<std::uint64_t>(k, value);
  else if (k == "emission.reward") params.emission.initial_reward = parse_amount(value);
  else if (k == "emission.halving") params.emission.halving_interval = parse_uint<std::uint64_t>(k, value);
  else if (k == "maintenance_rate") params.maintenance_rate = parse_amount(value);
  else if (k == "delete_reward") params.delete_reward = parse_amount(value);
  else if (k == "countdown") params.countdown_blocks = parse_uint<std::uint64_t>(k, value);
  else if (k == "oracle.deposit_rate") params.oracle_deposit_rate = parse_amount(value);
  else if (k == "oracle.challenge_window") params.oracle_challenge_window = parse_uint<std::uint64_t>(k, value);
  else if (k == "oracle.vote_window") params.oracle_vote_window = parse_uint<std::uint64_t>(k, value);
  else if (k == "blocks_per_epoch") params.blocks_per_epoch = parse_uint<std::uint64_t>(k, value);
  else if (k == "reward.alpha") params.reward_alpha = parse_rational(value);
  else if (k == "reward.mu") params.reward_mu = parse_rational(value);
  else if (k == "reward.q_initial") params.reward_q_initial = parse_amount(value);
  else if (k == "zone.creation_price") params.zone_creation_price = parse_amount(value);
  else if (k == "vm.space_limit") params.vm_space_limit = parse_uint<std::uint64_t>(k, value);
  else if (k == "pool_endowment") pool_endowment = parse_amount(value);
  else if (k == "founder") founder = std::string(value);
  else if (k == "accounts.clear") accounts.clear();
  else if (k.starts_with("account.")) accounts[k.substr(8)] = parse_amount(value);
  else if (k.starts_with("home.")) homes[k.substr(5)] = parse_uint<std::size_t>(k, value);
  else throw Error(Errc::BadFormat, "unknown config key '" + k + "'");
}

GenesisConfig NetworkConfig::genesis() const {
  params.pow.validate();
  if (params.blocks_per_epoch == 0) throw Error(Errc::BadFormat, "blocks_per_epoch must be positive");
  GenesisConfig g;
  g.params = params;
  for (const auto& [name, bal] : accounts) g.accounts.push_back({KeyPair::from_name(name).address(), bal});
  g.pool_endowment = pool_endowment;
  g.founder = KeyPair::from_name(founder).address();
  return g;
}

NetworkConfig parse_config(std::string_view text) {
  NetworkConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(Errc::BadFormat, "config line " + std::to_string(lineno) + ": expected key=value");
    try {
      cfg.set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), "config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

}  // namespace dsdin
