#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dsdin/config.hpp"

namespace dsdin::sim {

struct ChannelReport {
  std::string alias;
  Hash256 id;
  std::string status;                      // as seen by node 0 at the end
  std::uint64_t settled_nonce = 0;
  std::uint64_t max_honest_submitted = 0;  // highest nonce an honest party put on chain in time
  bool any_honest_submission = false;
};

struct SimResult {
  std::vector<std::string> log;
  std::vector<std::string> receipts;  // node 0 canonical chain, in order
  Hash256 final_state_root;           // combined roots of node 0's head
  Hash256 head_hash;
  std::uint64_t head_height = 0;
  std::vector<SupplyReport> supply;   // per node head
  std::vector<ChannelReport> channels;
  std::uint64_t events = 0;
  State final_state;                  // node 0's head state

  std::string log_text() const;
};

/// Runs a scenario to quiescence on one logical clock. Scenario lines are
/// `time command args...` with '#' comments; relative file arguments
/// resolve against `base_dir`. Throws ScenarioError with the line number.
SimResult run(const NetworkConfig& config, std::string_view scenario, const std::filesystem::path& base_dir = {});

}  // namespace dsdin::sim
