#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dsdin/amount.hpp"
#include "dsdin/hash.hpp"

namespace dsdin {

class Writer;
class Reader;
struct State;

using Rational = boost::multiprecision::cpp_rational;

/// Accepts "p/q", integers and finite decimals ("0.25"); exact.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

namespace reward {

struct PoolState {
  Amount q;                      // incentive value function Q(t), in base units
  Rational alpha_step{1, 10};    // step size, in (0, 1]
  Rational mu{9, 10};            // correction factor, in (0, 1)
  Amount gamma_t;                // tokens rewarded in the last epoch
  Amount pool_balance;           // eco-incentive endowment still undistributed
  Amount q_prev;                 // Q of the previous epoch (bootstrap for Q(t+1))
  std::uint64_t epoch = 0;
  std::uint64_t last_epoch_height = 0;
  Amount paid_out;               // distributions plus account-deletion rewards

  bool operator==(const PoolState&) const = default;
  void encode(Writer& w) const;
};

/// Q <- Q + alpha * (gamma_t + mu * q_next - Q), exact then floored to base
/// units. Advances the epoch counter. Throws InsufficientEndowment when the
/// new Q exceeds the remaining pool balance.
PoolState replenish(PoolState pool, Amount q_next);

/// Normalised factor values F_i of one zone with their weights alpha_i.
struct ZoneFactors {
  std::vector<Rational> values;
  std::vector<Rational> weights;
};

/// V = sum alpha_i * F_i. Throws BadFormat on a size mismatch or values
/// outside [0, 1].
Rational pov_value(const ZoneFactors& factors);

/// Per-factor min-max normalisation across zones (rows = zones). A
/// constant column maps to 0.
std::vector<std::vector<Rational>> normalize_min_max(const std::vector<std::vector<Rational>>& raw);

/// Largest-remainder apportionment of `total` proportional to `weights`.
/// Remainder units go to the largest fractional parts, ties to the lower
/// index. Sums to `total` exactly; all zeros when the weight sum is 0.
std::vector<Amount> allocate_proportional(Amount total, const std::vector<Rational>& weights);

inline std::vector<Amount> allocate_to_zones(Amount gamma, const std::vector<Rational>& values) {
  return allocate_proportional(gamma, values);
}
inline std::vector<Amount> allocate_to_users(Amount gamma_zone, const std::vector<Rational>& weights) {
  return allocate_proportional(gamma_zone, weights);
}

struct UsageItem {
  Rational beta;                  // usage weight of the content item
  std::vector<Rational> uses;     // normalised per-use values C_j
};

struct WorkItem {
  Rational value;   // S_i
  Rational weight;  // alpha_i
};

struct UserContribution {
  Rational epsilon;
  Rational theta;
  std::vector<WorkItem> work;
  std::vector<UsageItem> usage;
};

/// W = epsilon * sum alpha_i S_i + theta * sum beta_i * sum_j C_j.
Rational poc_weight(const UserContribution& c);

// --- Algorithm zones -------------------------------------------------------

struct Zone {
  Hash256 id;
  Address owner;
  std::set<Address> admins;
  std::set<Address> members;
  std::set<Address> referred;  // may browse, may not contribute
  Amount join_price;
  std::map<Address, std::uint64_t> contributions;

  void encode(Writer& w) const;
};

struct CreateZone {
  Amount join_price;
};
struct JoinZone {
  Hash256 zone;
};
struct ReferUser {
  Hash256 zone;
  Address user;
};
struct RecordContribution {
  Hash256 zone;
  Hash256 content_hash;
};
using ZoneAction = std::variant<CreateZone, JoinZone, ReferUser, RecordContribution>;

void encode_action(Writer& w, const ZoneAction& a);
ZoneAction decode_action(Reader& r);

/// Applies one zone action on behalf of `actor`. Create charges the
/// configured creation price (burned) and returns the new zone id; join
/// pays the join price to the owner. Errors: InsufficientFunds, NotMember,
/// AlreadyMember, NotFound.
Hash256 zone_lifecycle(State& state, const Address& actor, std::uint64_t counter, const ZoneAction& action);

// --- Epoch settlement ------------------------------------------------------

struct ZoneFactorRow {
  Hash256 zone;
  std::vector<Rational> raw;
};

struct UserRow {
  Hash256 zone;
  Address member;
  UserContribution contribution;
};

struct EpochInputs {
  std::vector<Rational> factor_weights;
  std::vector<ZoneFactorRow> zones;
  std::vector<UserRow> users;

  void encode(Writer& w) const;
  static EpochInputs decode(Reader& r);
  bool operator==(const EpochInputs& o) const;
};

struct ZoneReportRow {
  Hash256 zone;
  Rational value;
  Amount allocation;
};

struct UserReportRow {
  Hash256 zone;
  Address member;
  Rational weight;
  Amount payout;
};

struct EpochReport {
  std::uint64_t epoch = 0;
  Amount gamma;
  Amount distributed;
  Amount carried;
  std::vector<ZoneReportRow> zones;
  std::vector<UserReportRow> users;

  /// Line-oriented text: header, one `az` row per zone, one `user` row per member.
  std::string to_text() const;
};

/// Pure batch computation of one epoch against the given pool and zone
/// registry: replenish, POV split across zones, POC split inside each zone.
/// Zones whose members have zero total weight carry their share forward.
EpochReport compute_epoch(const PoolState& pool, const std::map<Hash256, Zone>& zones, const EpochInputs& inputs);

/// Applies the epoch to chain state (pool update, member wallet credits).
/// Throws NotEpochBoundary off the configured epoch heights.
EpochReport settle_epoch(State& state, const EpochInputs& inputs);

/// Text format for scenario-provided factor files:
///   weights <r1> <r2> ...
///   az <zone-hex> <raw1> <raw2> ...
///   user <zone-hex> <member-hex> <epsilon> <theta> work=<S>@<alpha>,... usage=<beta>:<c1>+<c2>,...
/// '#' starts a comment. `resolve` maps non-hex identity tokens to ids.
EpochInputs parse_epoch_inputs(std::string_view text, const std::function<Hash256(std::string_view)>& resolve);

}  // namespace reward
}  // namespace dsdin
