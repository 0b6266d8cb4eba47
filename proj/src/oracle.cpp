#include "dsdin/oracle.hpp"

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"
#include "dsdin/pow.hpp"
#include "dsdin/state.hpp"

namespace dsdin::oracle {

namespace {

Question& find_question(State& state, const Hash256& id) {
  auto it = state.oracles.find(id);
  if (it == state.oracles.end()) throw Error(Errc::NotFound, "unknown oracle question");
  return it->second;
}

void refund(State& state, Question& q, const Address& to, Amount v) {
  state.credit(to, v);
  q.returned += v;
}

void destroy(State& state, Question& q, Amount v) {
  state.burn(v);
  q.burned += v;
}

}  // namespace

const char* phase_name(Phase p) noexcept {
  switch (p) {
    case Phase::Open: return "open";
    case Phase::Answered: return "answered";
    case Phase::Contested: return "contested";
    case Phase::Resolved: return "resolved";
    case Phase::Burned: return "burned";
  }
  return "?";
}

void Question::encode(Writer& w) const {
  w.hash(id).hash(asker).hash(question_hash).u64(start).u64(end).u64(deposit.base_units());
  w.u8(static_cast<std::uint8_t>(phase)).boolean(answer).u64(answer_height);
  w.hash(challenger).u64(counter_deposit.base_units()).u64(vote_end);
  w.u32(static_cast<std::uint32_t>(votes.size()));
  for (const auto& [miner, v] : votes) w.hash(miner).boolean(v.answer).u64(v.weight);
  w.u64(escrowed.base_units()).u64(returned.base_units()).u64(burned.base_units());
}

Hash256 register_question(State& state, const Address& asker, std::uint64_t counter, const Hash256& question_hash,
                          std::uint64_t start, std::uint64_t end, std::uint64_t height) {
  if (end <= start || start < height) throw Error(Errc::BadWindow);
  const Amount deposit = state.params.oracle_deposit_rate * (end - start);
  const Hash256 id = Hasher().update(asker).update_u64(counter).update(question_hash).finish();
  if (state.oracles.contains(id)) throw Error(Errc::BadFormat, "question id already registered");
  state.debit(asker, deposit, Errc::InsufficientFunds);
  Question q;
  q.id = id;
  q.asker = asker;
  q.question_hash = question_hash;
  q.start = start;
  q.end = end;
  q.deposit = deposit;
  q.escrowed = deposit;
  state.oracles.emplace(id, std::move(q));
  return id;
}

void answer(State& state, const Hash256& id, const Address& caller, bool bit, std::uint64_t height) {
  Question& q = find_question(state, id);
  if (caller != q.asker) throw Error(Errc::NotAsker);
  if (q.phase != Phase::Open) throw Error(Errc::NotReady, "question already answered");
  if (height < q.start || height > q.end) throw Error(Errc::OutsideWindow);
  q.phase = Phase::Answered;
  q.answer = bit;
  q.answer_height = height;
}

void counterclaim(State& state, const Hash256& id, const Address& challenger, std::uint64_t height) {
  Question& q = find_question(state, id);
  if (q.phase != Phase::Answered) throw Error(Errc::NotReady, "only answered questions can be contested");
  if (height > q.end + state.params.oracle_challenge_window) throw Error(Errc::TooLate);
  state.debit(challenger, q.deposit, Errc::InsufficientFunds);
  q.phase = Phase::Contested;
  q.challenger = challenger;
  q.counter_deposit = q.deposit;
  q.escrowed += q.deposit;
  q.vote_end = height + state.params.oracle_vote_window;
}

void vote(State& state, const Hash256& id, const Address& miner, bool bit, std::uint64_t height) {
  Question& q = find_question(state, id);
  if (q.phase != Phase::Contested) throw Error(Errc::NotReady, "question is not contested");
  if (height >= q.vote_end) throw Error(Errc::TooLate);
  if (q.votes.contains(miner)) throw Error(Errc::AlreadyVoted);
  q.votes.emplace(miner, Vote{bit, stake_weight(state, miner)});
}

Tally tally(const Question& q) {
  Tally t;
  for (const auto& [miner, v] : q.votes) (v.answer ? t.yes : t.no) += v.weight;
  return t;
}

void resolve(State& state, const Hash256& id, std::uint64_t height) {
  Question& q = find_question(state, id);
  switch (q.phase) {
    case Phase::Answered:
      if (height <= q.end + state.params.oracle_challenge_window) throw Error(Errc::NotReady);
      refund(state, q, q.asker, q.deposit);
      q.phase = Phase::Resolved;
      return;
    case Phase::Contested: {
      if (height < q.vote_end) throw Error(Errc::NotReady);
      const Tally t = tally(q);
      bool bit = q.answer;
      if (t.yes != t.no) bit = t.yes > t.no;
      const bool asker_won = bit == q.answer;
      refund(state, q, asker_won ? q.asker : q.challenger, q.deposit);
      destroy(state, q, q.deposit);
      q.answer = bit;
      q.phase = Phase::Resolved;
      return;
    }
    case Phase::Open:
      if (height <= q.end) throw Error(Errc::NotReady);
      destroy(state, q, q.deposit);
      q.phase = Phase::Burned;
      return;
    case Phase::Resolved:
    case Phase::Burned:
      throw Error(Errc::NotReady, "question already settled");
  }
}

Reading read_answer(const State& state, const Hash256& id) {
  auto it = state.oracles.find(id);
  if (it == state.oracles.end()) return Reading::Pending;
  const Question& q = it->second;
  if (q.phase == Phase::Burned) return Reading::Burned;
  if (q.phase != Phase::Resolved) return Reading::Pending;
  return q.answer ? Reading::Yes : Reading::No;
}

}  // namespace dsdin::oracle
