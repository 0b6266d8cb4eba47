#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "dsdin/engine.hpp"

namespace dsdin {

/// "5dsd", "0.1dsd" or a plain base-unit integer.
Amount parse_amount(std::string_view text);

/// Network and simulator settings read from `key=value` lines.
struct NetworkConfig {
  std::uint64_t seed = 1;
  std::size_t nodes = 3;
  std::uint64_t latency_min = 1;
  std::uint64_t latency_max = 4;
  double drop_rate = 0.0;
  std::uint64_t retry_ticks = 6;
  std::uint32_t max_retries = 30;
  std::uint64_t event_budget = 500'000;
  std::uint64_t gas_price = 1;
  std::uint64_t default_gas = 100;
  std::uint64_t contract_gas = 1'000;

  Params params;
  std::map<std::string, Amount> accounts;   // genesis balances by identity name
  std::map<std::string, std::size_t> homes;  // identity -> node index
  Amount pool_endowment = Amount::dsd(100'000);
  std::string founder = "n0";

  NetworkConfig();

  /// Applies one setting; throws BadFormat for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  GenesisConfig genesis() const;
};

/// Parses `key=value` lines ('#' comments) over the defaults.
NetworkConfig parse_config(std::string_view text);

}  // namespace dsdin
