#include <doctest.h>

#include <set>

#include "support.hpp"

using namespace dsdin;
using namespace dsdin::test;
using oracle::Phase;
using oracle::Reading;

namespace {

const Address kAsker = addr("alice");
const Address kChallenger = addr("bob");
const Hash256 kQ = Hash256::filled(0x42);

struct Fixture {
  TestChain chain;
  std::uint64_t counter = 0;

  Hash256 ask(std::uint64_t start, std::uint64_t end, std::uint64_t height = 0) {
    return oracle::register_question(chain.state, kAsker, ++counter, kQ, start, end, height);
  }
  oracle::Question& q(const Hash256& id) { return chain.state.oracles.at(id); }
};

}  // namespace

TEST_CASE("deposit is proportional to the answer window") {
  Fixture f;
  f.chain.state.params.oracle_deposit_rate = Amount(2);
  const Amount before = f.chain.state.balance_of(kAsker);
  const Hash256 id = f.ask(10, 60);
  CHECK(f.q(id).deposit == Amount(100));
  CHECK(f.chain.state.balance_of(kAsker) == before - Amount(100));
  CHECK(f.chain.state.supply().oracle_deposits == Amount(100));
  CHECK(f.ask(10, 60) != id);

  CHECK(error_of([&] { f.ask(10, 10); }) == Errc::BadWindow);
  CHECK(error_of([&] { f.ask(10, 5); }) == Errc::BadWindow);
  CHECK(error_of([&] { f.ask(3, 9, 4); }) == Errc::BadWindow);
  f.chain.state.params.oracle_deposit_rate = Amount::dsd(1);
  CHECK(error_of([&] { f.ask(0, 5'000); }) == Errc::InsufficientFunds);
}

TEST_CASE("question ids hash asker, counter and question") {
  Fixture f;
  const Hash256 id = f.ask(0, 5);
  Bytes pre(kAsker.bytes.begin(), kAsker.bytes.end());
  for (int i = 0; i < 7; ++i) pre.push_back(0);
  pre.push_back(1);
  pre.insert(pre.end(), kQ.bytes.begin(), kQ.bytes.end());
  CHECK(id == ref_sha256(pre));
}

TEST_CASE("only the asker answers, and only inside the window") {
  Fixture f;
  const Hash256 id = f.ask(5, 15);
  CHECK(error_of([&] { oracle::answer(f.chain.state, id, kChallenger, true, 6); }) == Errc::NotAsker);
  CHECK(error_of([&] { oracle::answer(f.chain.state, id, kAsker, true, 4); }) == Errc::OutsideWindow);
  CHECK(error_of([&] { oracle::answer(f.chain.state, id, kAsker, true, 16); }) == Errc::OutsideWindow);
  const Amount before = f.chain.state.balance_of(kAsker);
  oracle::answer(f.chain.state, id, kAsker, true, 15);
  CHECK(f.q(id).phase == Phase::Answered);
  CHECK(f.chain.state.balance_of(kAsker) == before);
  CHECK(error_of([&] { oracle::answer(f.chain.state, id, kAsker, false, 15); }) == Errc::NotReady);
}

TEST_CASE("unchallenged answers are accepted and the deposit returns") {
  Fixture f;
  const Amount before = f.chain.state.balance_of(kAsker);
  const Hash256 id = f.ask(0, 10);
  oracle::answer(f.chain.state, id, kAsker, true, 3);
  CHECK(oracle::read_answer(f.chain.state, id) == Reading::Pending);
  CHECK(error_of([&] { oracle::resolve(f.chain.state, id, 20); }) == Errc::NotReady);
  oracle::resolve(f.chain.state, id, 21);
  CHECK(oracle::read_answer(f.chain.state, id) == Reading::Yes);
  CHECK(f.chain.state.balance_of(kAsker) == before);
  CHECK(f.q(id).returned == f.q(id).escrowed);
  CHECK(error_of([&] { oracle::resolve(f.chain.state, id, 22); }) == Errc::NotReady);
}

TEST_CASE("expired unanswered questions burn the deposit") {
  Fixture f;
  const Hash256 id = f.ask(0, 10);
  const Amount burned = f.chain.state.burned_total;
  CHECK(error_of([&] { oracle::resolve(f.chain.state, id, 10); }) == Errc::NotReady);
  oracle::resolve(f.chain.state, id, 11);
  CHECK(f.chain.state.burned_total == burned + Amount(10));
  CHECK(oracle::read_answer(f.chain.state, id) == Reading::Burned);
  CHECK(error_of([&] { oracle::answer(f.chain.state, id, kAsker, true, 11); }) == Errc::NotReady);
  CHECK(oracle::read_answer(f.chain.state, Hash256::filled(1)) == Reading::Pending);
}

TEST_CASE("counterclaims match the deposit exactly and respect the window") {
  Fixture f;
  const Hash256 id = f.ask(0, 10);
  oracle::answer(f.chain.state, id, kAsker, true, 2);

  TestChain& c = f.chain;
  const Address poor = addr("poor");
  c.state.debit(addr("carol"), Amount(9));
  c.state.credit(poor, Amount(9));
  CHECK(error_of([&] { oracle::counterclaim(c.state, id, poor, 5); }) == Errc::InsufficientFunds);
  CHECK(error_of([&] { oracle::counterclaim(c.state, id, kChallenger, 21); }) == Errc::TooLate);

  const Amount before = c.state.balance_of(kChallenger);
  oracle::counterclaim(c.state, id, kChallenger, 20);
  CHECK(f.q(id).phase == Phase::Contested);
  CHECK(f.q(id).vote_end == 40);
  CHECK(c.state.balance_of(kChallenger) == before - Amount(10));
  CHECK(f.q(id).escrowed == Amount(20));
}

TEST_CASE("stake-weighted vote 70/30 for no overturns the answer") {
  Fixture f;
  State& s = f.chain.state;
  const std::vector<std::pair<std::string, std::uint64_t>> miners{{"m1", 50}, {"m2", 20}, {"m3", 30}};
  for (const auto& [name, dsd] : miners) {
    s.debit(addr("dave"), Amount::dsd(dsd));
    s.credit(addr(name), Amount::dsd(dsd));
  }
  const Hash256 id = f.ask(0, 10);
  oracle::answer(s, id, kAsker, true, 1);
  const Amount asker = s.balance_of(kAsker);
  const Amount chall = s.balance_of(kChallenger);
  const Amount burned = s.burned_total;
  oracle::counterclaim(s, id, kChallenger, 4);
  const std::map<std::string, bool> ballots{{"m1", false}, {"m2", false}, {"m3", true}};
  for (const auto& [name, bit] : ballots) oracle::vote(s, id, addr(name), bit, 10);
  CHECK(error_of([&] { oracle::vote(s, id, addr("m1"), true, 11); }) == Errc::AlreadyVoted);
  CHECK(error_of([&] { oracle::vote(s, id, addr("alice"), true, 24); }) == Errc::TooLate);

  std::uint64_t yes = 0, no = 0;
  for (const auto& [name, dsd] : miners) (ballots.at(name) ? yes : no) += Amount::dsd(dsd).base_units();
  const auto t = oracle::tally(f.q(id));
  CHECK(t.yes == yes);
  CHECK(t.no == no);
  CHECK(no * 3 == yes * 7);

  CHECK(error_of([&] { oracle::resolve(s, id, 23); }) == Errc::NotReady);
  oracle::resolve(s, id, 24);
  CHECK(oracle::read_answer(s, id) == Reading::No);
  CHECK(s.balance_of(kChallenger) == chall);
  CHECK(s.balance_of(kAsker) == asker);
  CHECK(s.burned_total == burned + Amount(10));
  CHECK(f.q(id).returned + f.q(id).burned == f.q(id).escrowed);
}

TEST_CASE("tied votes keep the original answer") {
  Fixture f;
  State& s = f.chain.state;
  const Hash256 id = f.ask(0, 10);
  oracle::answer(s, id, kAsker, false, 1);
  oracle::counterclaim(s, id, kChallenger, 2);
  oracle::vote(s, id, addr("carol"), true, 3);
  oracle::vote(s, id, addr("dave"), false, 3);
  oracle::resolve(s, id, 22);
  CHECK(oracle::read_answer(s, id) == Reading::No);
}

TEST_CASE("random operation sequences follow the lifecycle graph") {
  const std::set<std::pair<Phase, Phase>> edges{
      {Phase::Open, Phase::Answered}, {Phase::Open, Phase::Burned}, {Phase::Answered, Phase::Contested},
      {Phase::Answered, Phase::Resolved}, {Phase::Contested, Phase::Resolved}};
  std::mt19937_64 rng(3);
  const std::vector<std::string> people{"alice", "bob", "carol", "dave"};
  for (int trial = 0; trial < 200; ++trial) {
    Fixture f;
    State& s = f.chain.state;
    const std::uint64_t start = rng() % 5, end = start + 1 + rng() % 10;
    const Hash256 id = f.ask(start, end);
    for (std::uint64_t h = 0; h < 60; ++h) {
      const Phase before = f.q(id).phase;
      const Address who = addr(people[rng() % people.size()]);
      const auto op = rng() % 4;
      const auto err = error_of([&] {
        if (op == 0) oracle::answer(s, id, who, rng() % 2, h);
        if (op == 1) oracle::counterclaim(s, id, who, h);
        if (op == 2) oracle::vote(s, id, who, rng() % 2, h);
        if (op == 3) oracle::resolve(s, id, h);
      });
      const Phase after = f.q(id).phase;
      if (after != before) CHECK(edges.contains({before, after}));
      if (err) CHECK(after == before);
      const auto& q = f.q(id);
      CHECK(q.returned + q.burned + q.live() == q.escrowed);
      CHECK(s.supply().balanced());
      if (q.terminal()) CHECK(q.live() == Amount(0));
    }
  }
}
