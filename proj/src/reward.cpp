#include "dsdin/reward.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"
#include "dsdin/state.hpp"

namespace dsdin {

using boost::multiprecision::cpp_int;

namespace {

cpp_int to_int(Amount a) { return cpp_int(a.base_units()); }

Amount to_amount(const cpp_int& v) {
  if (v < 0 || v > cpp_int(std::numeric_limits<std::uint64_t>::max())) throw Error(Errc::Overflow, "amount range");
  return Amount(v.convert_to<std::uint64_t>());
}

cpp_int floor_div(const Rational& r) {
  const cpp_int n = boost::multiprecision::numerator(r);
  const cpp_int d = boost::multiprecision::denominator(r);
  cpp_int q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

bool is_hex_id(std::string_view t) {
  return t.size() == 64 && std::all_of(t.begin(), t.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

void put_rational(Writer& w, const Rational& r) { w.str(format_rational(r)); }
Rational get_rational(Reader& r) { return parse_rational(r.str()); }

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error(Errc::BadFormat, "bad rational '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto digits = [&](std::string_view d) {
    if (d.empty() || !std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; })) throw fail();
    return cpp_int(std::string(d));
  };
  Rational out;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const cpp_int den = digits(body.substr(slash + 1));
    if (den == 0) throw fail();
    out = Rational(digits(body.substr(0, slash)), den);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto frac = body.substr(dot + 1);
    const cpp_int whole = dot == 0 ? cpp_int(0) : digits(body.substr(0, dot));
    out = Rational(whole) + Rational(digits(frac), boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(frac.size())));
  } else {
    out = Rational(digits(body));
  }
  return negative ? Rational(-out) : out;
}

std::string format_rational(const Rational& r) {
  const cpp_int d = boost::multiprecision::denominator(r);
  if (d == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + d.str();
}

namespace reward {

void PoolState::encode(Writer& w) const {
  w.u64(q.base_units());
  put_rational(w, alpha_step);
  put_rational(w, mu);
  w.u64(gamma_t.base_units()).u64(pool_balance.base_units()).u64(q_prev.base_units());
  w.u64(epoch).u64(last_epoch_height).u64(paid_out.base_units());
}

PoolState replenish(PoolState pool, Amount q_next) {
  if (pool.alpha_step <= 0 || pool.alpha_step > 1) throw Error(Errc::BadFormat, "alpha must lie in (0, 1]");
  if (pool.mu < 0 || pool.mu >= 1) throw Error(Errc::BadFormat, "mu must lie in [0, 1)");
  const Rational q(to_int(pool.q));
  const Rational updated =
      q + pool.alpha_step * (Rational(to_int(pool.gamma_t)) + pool.mu * Rational(to_int(q_next)) - q);
  const cpp_int floored = floor_div(updated);
  const Amount next = to_amount(floored < 0 ? cpp_int(0) : floored);
  if (next > pool.pool_balance) throw Error(Errc::InsufficientEndowment);
  pool.q_prev = pool.q;
  pool.q = next;
  ++pool.epoch;
  return pool;
}

Rational pov_value(const ZoneFactors& factors) {
  if (factors.values.size() != factors.weights.size()) throw Error(Errc::BadFormat, "factor/weight count mismatch");
  Rational v = 0;
  for (std::size_t i = 0; i < factors.values.size(); ++i) {
    const auto& f = factors.values[i];
    if (f < 0 || f > 1) throw Error(Errc::BadFormat, "normalised factor outside [0, 1]");
    if (factors.weights[i] < 0) throw Error(Errc::BadFormat, "negative factor weight");
    v += factors.weights[i] * f;
  }
  return v;
}

std::vector<std::vector<Rational>> normalize_min_max(const std::vector<std::vector<Rational>>& raw) {
  std::vector<std::vector<Rational>> out(raw.size());
  if (raw.empty()) return out;
  const std::size_t k = raw.front().size();
  for (const auto& row : raw)
    if (row.size() != k) throw Error(Errc::BadFormat, "ragged factor table");
  for (auto& row : out) row.assign(k, Rational(0));
  for (std::size_t j = 0; j < k; ++j) {
    Rational lo = raw[0][j], hi = raw[0][j];
    for (const auto& row : raw) {
      if (row[j] < 0) throw Error(Errc::BadFormat, "negative factor measurement");
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    if (hi == lo) continue;
    for (std::size_t i = 0; i < raw.size(); ++i) out[i][j] = (raw[i][j] - lo) / (hi - lo);
  }
  return out;
}

std::vector<Amount> allocate_proportional(Amount total, const std::vector<Rational>& weights) {
  std::vector<Amount> out(weights.size());
  Rational sum = 0;
  for (const auto& w : weights) {
    if (w < 0) throw Error(Errc::BadFormat, "negative allocation weight");
    sum += w;
  }
  if (sum == 0) return out;

  std::vector<Rational> frac(weights.size());
  cpp_int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Rational share = Rational(to_int(total)) * weights[i] / sum;
    const cpp_int fl = floor_div(share);
    out[i] = to_amount(fl);
    frac[i] = share - Rational(fl);
    assigned += fl;
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  auto left = (to_int(total) - assigned).convert_to<std::uint64_t>();
  for (std::size_t i = 0; left > 0; ++i, --left) out[order[i]] += Amount(1);
  return out;
}

Rational poc_weight(const UserContribution& c) {
  if (c.epsilon < 0 || c.theta < 0) throw Error(Errc::BadFormat, "negative contribution weight");
  Rational work = 0;
  for (const auto& w : c.work) work += w.weight * w.value;
  Rational usage = 0;
  for (const auto& u : c.usage) {
    Rational uses = 0;
    for (const auto& v : u.uses) uses += v;
    usage += u.beta * uses;
  }
  return c.epsilon * work + c.theta * usage;
}

// --- zones -----------------------------------------------------------------

void Zone::encode(Writer& w) const {
  w.hash(id).hash(owner).u64(join_price.base_units());
  for (const auto* set : {&admins, &members, &referred}) {
    w.u32(static_cast<std::uint32_t>(set->size()));
    for (const auto& a : *set) w.hash(a);
  }
  w.u32(static_cast<std::uint32_t>(contributions.size()));
  for (const auto& [a, n] : contributions) w.hash(a).u64(n);
}

void encode_action(Writer& w, const ZoneAction& a) {
  w.u8(static_cast<std::uint8_t>(a.index()));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CreateZone>) w.u64(x.join_price.base_units());
        if constexpr (std::is_same_v<T, JoinZone>) w.hash(x.zone);
        if constexpr (std::is_same_v<T, ReferUser>) w.hash(x.zone).hash(x.user);
        if constexpr (std::is_same_v<T, RecordContribution>) w.hash(x.zone).hash(x.content_hash);
      },
      a);
}

ZoneAction decode_action(Reader& r) {
  switch (r.u8()) {
    case 0: return CreateZone{Amount(r.u64())};
    case 1: return JoinZone{r.hash()};
    case 2: {
      ReferUser x;
      x.zone = r.hash();
      x.user = r.hash();
      return x;
    }
    case 3: {
      RecordContribution x;
      x.zone = r.hash();
      x.content_hash = r.hash();
      return x;
    }
    default: throw Error(Errc::Decode, "unknown zone action");
  }
}

Hash256 zone_lifecycle(State& state, const Address& actor, std::uint64_t counter, const ZoneAction& action) {
  auto find_zone = [&](const Hash256& id) -> Zone& {
    auto it = state.zones.find(id);
    if (it == state.zones.end()) throw Error(Errc::NotFound, "unknown zone");
    return it->second;
  };
  return std::visit(
      [&](const auto& x) -> Hash256 {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CreateZone>) {
          const Hash256 id = Hasher().update_str("az").update(actor).update_u64(counter).finish();
          if (state.zones.contains(id)) throw Error(Errc::BadFormat, "zone id already in use");
          state.debit(actor, state.params.zone_creation_price, Errc::InsufficientFunds);
          state.burn(state.params.zone_creation_price);
          Zone z;
          z.id = id;
          z.owner = actor;
          z.admins.insert(actor);
          z.members.insert(actor);
          z.join_price = x.join_price;
          state.zones.emplace(id, std::move(z));
          return id;
        } else if constexpr (std::is_same_v<T, JoinZone>) {
          Zone& z = find_zone(x.zone);
          if (z.members.contains(actor)) throw Error(Errc::AlreadyMember);
          state.debit(actor, z.join_price, Errc::InsufficientFunds);
          state.credit(z.owner, z.join_price);
          z.members.insert(actor);
          return z.id;
        } else if constexpr (std::is_same_v<T, ReferUser>) {
          Zone& z = find_zone(x.zone);
          if (!z.members.contains(actor)) throw Error(Errc::NotMember);
          if (z.members.contains(x.user)) throw Error(Errc::AlreadyMember);
          z.referred.insert(x.user);
          return z.id;
        } else {
          Zone& z = find_zone(x.zone);
          if (!z.members.contains(actor)) throw Error(Errc::NotMember);
          ++z.contributions[actor];
          return z.id;
        }
      },
      action);
}

// --- epochs ----------------------------------------------------------------

void EpochInputs::encode(Writer& w) const {
  w.u32(static_cast<std::uint32_t>(factor_weights.size()));
  for (const auto& r : factor_weights) put_rational(w, r);
  w.u32(static_cast<std::uint32_t>(zones.size()));
  for (const auto& z : zones) {
    w.hash(z.zone).u32(static_cast<std::uint32_t>(z.raw.size()));
    for (const auto& r : z.raw) put_rational(w, r);
  }
  w.u32(static_cast<std::uint32_t>(users.size()));
  for (const auto& u : users) {
    w.hash(u.zone).hash(u.member);
    put_rational(w, u.contribution.epsilon);
    put_rational(w, u.contribution.theta);
    w.u32(static_cast<std::uint32_t>(u.contribution.work.size()));
    for (const auto& item : u.contribution.work) {
      put_rational(w, item.value);
      put_rational(w, item.weight);
    }
    w.u32(static_cast<std::uint32_t>(u.contribution.usage.size()));
    for (const auto& item : u.contribution.usage) {
      put_rational(w, item.beta);
      w.u32(static_cast<std::uint32_t>(item.uses.size()));
      for (const auto& c : item.uses) put_rational(w, c);
    }
  }
}

EpochInputs EpochInputs::decode(Reader& r) {
  EpochInputs in;
  in.factor_weights.resize(r.count(4));
  for (auto& x : in.factor_weights) x = get_rational(r);
  in.zones.resize(r.count(36));
  for (auto& z : in.zones) {
    z.zone = r.hash();
    z.raw.resize(r.count(4));
    for (auto& x : z.raw) x = get_rational(r);
  }
  in.users.resize(r.count(64));
  for (auto& u : in.users) {
    u.zone = r.hash();
    u.member = r.hash();
    u.contribution.epsilon = get_rational(r);
    u.contribution.theta = get_rational(r);
    u.contribution.work.resize(r.count(8));
    for (auto& item : u.contribution.work) {
      item.value = get_rational(r);
      item.weight = get_rational(r);
    }
    u.contribution.usage.resize(r.count(8));
    for (auto& item : u.contribution.usage) {
      item.beta = get_rational(r);
      item.uses.resize(r.count(4));
      for (auto& c : item.uses) c = get_rational(r);
    }
  }
  return in;
}

bool EpochInputs::operator==(const EpochInputs& o) const {
  Writer a, b;
  encode(a);
  o.encode(b);
  return a.data() == b.data();
}

std::string EpochReport::to_text() const {
  std::ostringstream os;
  os << "epoch " << epoch << " gamma " << gamma.str() << " distributed " << distributed.str() << " carried "
     << carried.str() << '\n';
  for (const auto& z : zones) os << "az " << z.zone.hex() << ' ' << format_rational(z.value) << ' ' << z.allocation.str() << '\n';
  for (const auto& u : users)
    os << "user " << u.zone.hex() << ' ' << u.member.hex() << ' ' << format_rational(u.weight) << ' '
       << u.payout.str() << '\n';
  return os.str();
}

namespace {

struct EpochOutcome {
  PoolState pool;
  EpochReport report;
};

EpochOutcome run_epoch(const PoolState& pool, const std::map<Hash256, Zone>& registry, const EpochInputs& inputs) {
  EpochOutcome out;
  out.pool = replenish(pool, pool.q_prev);
  EpochReport& rep = out.report;
  rep.epoch = out.pool.epoch;
  rep.gamma = out.pool.q;

  Rational weight_sum = 0;
  for (const auto& w : inputs.factor_weights) {
    if (w < 0) throw Error(Errc::BadFormat, "negative factor weight");
    weight_sum += w;
  }
  if (!inputs.zones.empty() && weight_sum != 1) throw Error(Errc::BadFormat, "factor weights must sum to 1");

  // Zones in ascending id order so the remainder tie-break follows ids.
  std::map<Hash256, const ZoneFactorRow*> rows;
  for (const auto& z : inputs.zones) {
    if (!registry.contains(z.zone)) throw Error(Errc::NotFound, "epoch names an unknown zone");
    if (z.raw.size() != inputs.factor_weights.size()) throw Error(Errc::BadFormat, "factor count mismatch");
    if (!rows.emplace(z.zone, &z).second) throw Error(Errc::BadFormat, "duplicate zone row");
  }
  std::map<Hash256, std::map<Address, const UserContribution*>> members;
  for (const auto& u : inputs.users) {
    if (!rows.contains(u.zone)) throw Error(Errc::BadFormat, "user row for a zone without factors");
    if (!registry.at(u.zone).members.contains(u.member)) throw Error(Errc::NotMember);
    if (!members[u.zone].emplace(u.member, &u.contribution).second) throw Error(Errc::BadFormat, "duplicate user row");
  }

  std::vector<std::vector<Rational>> raw;
  for (const auto& [id, row] : rows) raw.push_back(row->raw);
  const auto normalized = normalize_min_max(raw);
  std::vector<Rational> values;
  for (const auto& f : normalized) values.push_back(pov_value({f, inputs.factor_weights}));
  const auto alloc = allocate_to_zones(rep.gamma, values);

  std::size_t i = 0;
  for (const auto& [id, row] : rows) {
    rep.zones.push_back({id, values[i], alloc[i]});
    const auto it = members.find(id);
    std::vector<Rational> weights;
    if (it != members.end())
      for (const auto& [member, c] : it->second) weights.push_back(poc_weight(*c));
    const auto payouts = allocate_to_users(alloc[i], weights);
    std::size_t j = 0;
    if (it != members.end())
      for (const auto& [member, c] : it->second) {
        rep.users.push_back({id, member, weights[j], payouts[j]});
        rep.distributed += payouts[j];
        ++j;
      }
    ++i;
  }
  rep.carried = rep.gamma - rep.distributed;
  return out;
}

}  // namespace

EpochReport compute_epoch(const PoolState& pool, const std::map<Hash256, Zone>& zones, const EpochInputs& inputs) {
  return run_epoch(pool, zones, inputs).report;
}

EpochReport settle_epoch(State& state, const EpochInputs& inputs) {
  const std::uint64_t h = state.height;
  if (h == 0 || h % state.params.blocks_per_epoch != 0 || state.pool.last_epoch_height == h)
    throw Error(Errc::NotEpochBoundary);
  auto outcome = run_epoch(state.pool, state.zones, inputs);
  for (const auto& u : outcome.report.users)
    if (!u.payout.is_zero()) state.credit(u.member, u.payout);
  PoolState& pool = outcome.pool;
  pool.pool_balance -= outcome.report.distributed;
  pool.paid_out += outcome.report.distributed;
  pool.gamma_t = outcome.report.distributed;
  pool.last_epoch_height = h;
  state.pool = pool;
  return outcome.report;
}

EpochInputs parse_epoch_inputs(std::string_view text, const std::function<Hash256(std::string_view)>& resolve) {
  auto id_of = [&](std::string_view t) { return is_hex_id(t) ? Hash256::from_hex(t) : resolve(t); };
  EpochInputs in;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "weights") {
        for (std::size_t i = 1; i < tok.size(); ++i) in.factor_weights.push_back(parse_rational(tok[i]));
      } else if (tok[0] == "az" && tok.size() >= 2) {
        ZoneFactorRow row{id_of(tok[1]), {}};
        for (std::size_t i = 2; i < tok.size(); ++i) row.raw.push_back(parse_rational(tok[i]));
        in.zones.push_back(std::move(row));
      } else if (tok[0] == "user" && tok.size() >= 5) {
        UserRow row{id_of(tok[1]), id_of(tok[2]), {}};
        row.contribution.epsilon = parse_rational(tok[3]);
        row.contribution.theta = parse_rational(tok[4]);
        for (std::size_t i = 5; i < tok.size(); ++i) {
          const std::string_view t = tok[i];
          if (t.starts_with("work=")) {
            for (auto item : split(t.substr(5), ',')) {
              if (item.empty()) continue;
              const auto at = item.find('@');
              if (at == std::string_view::npos) throw Error(Errc::BadFormat, "work item needs S@alpha");
              row.contribution.work.push_back({parse_rational(item.substr(0, at)), parse_rational(item.substr(at + 1))});
            }
          } else if (t.starts_with("usage=")) {
            for (auto item : split(t.substr(6), ',')) {
              if (item.empty()) continue;
              const auto colon = item.find(':');
              if (colon == std::string_view::npos) throw Error(Errc::BadFormat, "usage item needs beta:c1+c2");
              UsageItem u{parse_rational(item.substr(0, colon)), {}};
              for (auto c : split(item.substr(colon + 1), '+')) u.uses.push_back(parse_rational(c));
              row.contribution.usage.push_back(std::move(u));
            }
          } else {
            throw Error(Errc::BadFormat, "unknown user field '" + std::string(t) + "'");
          }
        }
        in.users.push_back(std::move(row));
      } else {
        throw Error(Errc::BadFormat, "unknown directive '" + tok[0] + "'");
      }
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return in;
}

}  // namespace reward
}  // namespace dsdin
