#include "dsdin/state.hpp"

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"

namespace dsdin {

const Account* State::find(const Address& a) const {
  auto it = accounts.find(a);
  return it == accounts.end() ? nullptr : &it->second;
}

Amount State::balance_of(const Address& a) const {
  const Account* acct = find(a);
  return acct ? acct->balance : Amount{};
}

Account& State::touch(const Address& a) {
  auto [it, inserted] = accounts.try_emplace(a);
  Account& acct = it->second;
  if (inserted) {
    acct.address = a;
    acct.freshness = height;
    return acct;
  }
  if (acct.freshness < height) {
    auto charge = charge_maintenance(acct, height, params.maintenance_rate);
    burned_total += charge.collected;
    acct = charge.account;
  }
  return acct;
}

void State::credit(const Address& a, Amount v) { touch(a).balance += v; }

void State::debit(const Address& a, Amount v, Errc err) {
  Account& acct = touch(a);
  if (acct.balance < v) throw Error(err);
  acct.balance -= v;
}

Hash256 StateRoots::combined() const {
  return Hasher()
      .update(account_root)
      .update(name_root)
      .update(wormhole_root)
      .update(oracle_open_root)
      .update(oracle_answer_root)
      .finish();
}

StateRoots State::roots() const {
  StateRoots r;

  // Account tree: account leaves, then system leaves (supply counters and
  // pool, contract records, storage contracts, zones) so that every piece
  // of consensus state is committed by some header root.
  std::vector<Bytes> leaves;
  leaves.reserve(accounts.size() + contracts.size() + storage.size() + zones.size() + 1);
  for (const auto& [addr, acct] : accounts) leaves.push_back(acct.encode());
  {
    Writer w;
    w.str("system").u64(burned_total.base_units()).u64(minted_total.base_units()).u64(genesis_total.base_units());
    pool.encode(w);
    leaves.push_back(std::move(w).take());
  }
  for (const auto& [addr, rec] : contracts) {
    Writer w;
    w.str("contract").hash(addr).hash(rec.owner).bytes(rec.code.encode());
    leaves.push_back(std::move(w).take());
  }
  for (const auto& [id, sc] : storage) {
    Writer w;
    w.str("storage");
    sc.encode(w);
    leaves.push_back(std::move(w).take());
  }
  for (const auto& [id, z] : zones) {
    Writer w;
    w.str("zone");
    z.encode(w);
    leaves.push_back(std::move(w).take());
  }
  r.account_root = merkle_root(leaves);

  std::vector<Bytes> names_leaves;
  for (const auto& [n, rec] : names) names_leaves.push_back(rec.encode());
  r.name_root = merkle_root_or_zero(names_leaves);

  std::vector<Bytes> ch_leaves;
  for (const auto& [id, ch] : channels) {
    Writer w;
    ch.encode(w);
    ch_leaves.push_back(std::move(w).take());
  }
  r.wormhole_root = merkle_root_or_zero(ch_leaves);

  std::vector<Bytes> open_leaves, answer_leaves;
  for (const auto& [id, q] : oracles) {
    Writer w;
    q.encode(w);
    (q.terminal() ? answer_leaves : open_leaves).push_back(std::move(w).take());
  }
  r.oracle_open_root = merkle_root_or_zero(open_leaves);
  r.oracle_answer_root = merkle_root_or_zero(answer_leaves);
  return r;
}

SupplyReport State::supply() const {
  SupplyReport s;
  for (const auto& [a, acct] : accounts) s.balances += acct.balance;
  for (const auto& [id, ch] : channels) s.channel_locks += ch.locked();
  for (const auto& [id, q] : oracles) s.oracle_deposits += q.live();
  for (const auto& [id, sc] : storage) s.storage_escrow += sc.escrow;
  s.reward_pool = pool.pool_balance;
  s.burned = burned_total;
  s.genesis_total = genesis_total;
  s.minted = minted_total;
  return s;
}

Hash256 resolve_name(const State& state, const std::string& name) {
  auto it = state.names.find(name);
  if (it == state.names.end()) throw Error(Errc::NotFound, "name '" + name + "'");
  return it->second.target;
}

Amount delete_account(State& state, const Address& target, const Address& sender) {
  if (state.find(target) == nullptr) throw Error(Errc::NotFound, "account");
  Account& acct = state.touch(target);
  if (!acct.balance.is_zero()) throw Error(Errc::NonZeroBalance);
  if (acct.kind == AccountKind::Contract) state.contracts.erase(target);
  state.accounts.erase(target);
  const Amount reward = min(state.params.delete_reward, state.pool.pool_balance);
  state.pool.pool_balance -= reward;
  state.pool.paid_out += reward;
  state.credit(sender, reward);
  return reward;
}

std::uint64_t stake_weight(const State& state, const Address& address) {
  return state.balance_of(address).base_units();
}

}  // namespace dsdin
