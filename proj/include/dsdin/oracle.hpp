#pragma once

#include <cstdint>
#include <map>

#include "dsdin/amount.hpp"
#include "dsdin/hash.hpp"

namespace dsdin {

class Writer;
struct State;

namespace oracle {

enum class Phase : std::uint8_t { Open = 0, Answered = 1, Contested = 2, Resolved = 3, Burned = 4 };

const char* phase_name(Phase p) noexcept;

struct Vote {
  bool answer = false;
  std::uint64_t weight = 0;
};

struct Question {
  Hash256 id;
  Address asker;
  Hash256 question_hash;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  Amount deposit;
  Phase phase = Phase::Open;
  bool answer = false;  // operator answer once answered, final bit once resolved
  std::uint64_t answer_height = 0;
  Address challenger;
  Amount counter_deposit;
  std::uint64_t vote_end = 0;
  std::map<Address, Vote> votes;
  // Deposit flow bookkeeping: escrowed = returned + burned + live.
  Amount escrowed;
  Amount returned;
  Amount burned;

  Amount live() const { return escrowed - returned - burned; }
  bool terminal() const { return phase == Phase::Resolved || phase == Phase::Burned; }
  void encode(Writer& w) const;
};

/// Returns the question id H(asker || counter || question_hash).
/// Errors: BadWindow, InsufficientFunds.
Hash256 register_question(State& state, const Address& asker, std::uint64_t counter, const Hash256& question_hash,
                          std::uint64_t start, std::uint64_t end, std::uint64_t height);

/// Errors: NotFound, NotAsker, OutsideWindow, NotReady (phase not open).
void answer(State& state, const Hash256& id, const Address& caller, bool bit, std::uint64_t height);

/// Errors: NotFound, NotReady, TooLate, InsufficientFunds.
void counterclaim(State& state, const Hash256& id, const Address& challenger, std::uint64_t height);

/// Stake-weighted ballot by the miner of the current block while contested.
/// Errors: NotFound, NotReady, TooLate, AlreadyVoted.
void vote(State& state, const Hash256& id, const Address& miner, bool bit, std::uint64_t height);

/// Errors: NotFound, NotReady.
void resolve(State& state, const Hash256& id, std::uint64_t height);

struct Tally {
  std::uint64_t yes = 0;
  std::uint64_t no = 0;
};
Tally tally(const Question& q);

enum class Reading { No, Yes, Pending, Burned };
Reading read_answer(const State& state, const Hash256& id);

}  // namespace oracle
}  // namespace dsdin
