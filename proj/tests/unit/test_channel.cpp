#include <doctest.h>

#include "support.hpp"

using namespace dsdin;
using namespace dsdin::test;
using channel::Purpose;
using channel::SignedState;
using channel::Status;

namespace {

const KeyPair kA = KeyPair::from_name("alice");
const KeyPair kB = KeyPair::from_name("bob");

struct Fixture {
  TestChain chain;
  Hash256 id;

  explicit Fixture(Amount da = Amount::dsd(5), Amount db = Amount::dsd(5), std::uint64_t counter = 1) {
    id = channel::open_channel(chain.state, kA.address(), kB.address(), da, db, counter, true);
  }
  channel::Channel& ch() { return chain.state.channels.at(id); }

  // Signed chain of states 1..n with A's balance stepping down by 1 DSD.
  std::vector<SignedState> history(std::uint64_t n) {
    std::vector<SignedState> out;
    for (std::uint64_t k = 1; k <= n; ++k) {
      const Amount a = ch().deposit_a - Amount::dsd(k % 5);
      out.push_back(channel::make_update(ch(), out.empty() ? nullptr : &out.back(), k, a, ch().total() - a, kA, kB));
    }
    return out;
  }
};

SignedState close_signed(const channel::Channel& ch, Amount a, Amount b, std::uint64_t nonce) {
  SignedState s;
  s.channel_id = ch.id;
  s.nonce = nonce;
  s.balance_a = a;
  s.balance_b = b;
  channel::sign_state(s, ch, kA, Purpose::Close);
  channel::sign_state(s, ch, kB, Purpose::Close);
  return s;
}

}  // namespace

TEST_CASE("open locks both deposits") {
  Fixture f;
  CHECK(f.ch().total() == Amount::dsd(10));
  CHECK(f.ch().status == Status::Open);
  CHECK(f.id == ref_sha256([&] {
    Bytes b = bytes_of("channel");
    const Address a = kA.address(), c = kB.address();
    b.insert(b.end(), a.bytes.begin(), a.bytes.end());
    b.insert(b.end(), c.bytes.begin(), c.bytes.end());
    for (int i = 0; i < 7; ++i) b.push_back(0);
    b.push_back(1);
    return b;
  }()));
  CHECK(f.chain.state.supply().channel_locks == Amount::dsd(10));
  CHECK(f.chain.state.balance_of(kA.address()) == Amount::dsd(995));
  CHECK(error_of([&] {
    channel::open_channel(f.chain.state, kA.address(), kB.address(), Amount::dsd(2'000), Amount(0), 9, true);
  }) == Errc::InsufficientFunds);
  CHECK(error_of([&] {
    channel::open_channel(f.chain.state, kA.address(), kB.address(), Amount(1), Amount(1), 10, false);
  }) == Errc::MissingSignature);
}

TEST_CASE("open through a block moves 10 DSD from accounts into locks") {
  TestChain chain;
  const auto before = chain.state.supply();
  Tx t = chain.tx("alice", tx::ChannelOpen{kB.address(), Amount::dsd(5), Amount::dsd(5), {}});
  std::get<tx::ChannelOpen>(t.payload).counterparty_sig = kB.sign(t.signing_bytes());
  const auto r = chain.mine({t});
  REQUIRE(r[0].status == TxStatus::Applied);
  const auto after = chain.state.supply();
  CHECK(after.channel_locks == before.channel_locks + Amount::dsd(10));
  const Amount minted = coinbase(1, chain.state.params.emission);
  CHECK(after.balances + Amount::dsd(10) == before.balances + minted);
  CHECK(after.balanced());

  Tx unsigned_open = chain.tx("carol", tx::ChannelOpen{addr("dave"), Amount(1), Amount(1), {}});
  const auto r2 = chain.mine({unsigned_open});
  REQUIRE(r2.size() == 1);
  CHECK(r2[0].status == TxStatus::Reverted);
  CHECK(*r2[0].error == Errc::MissingSignature);
}

TEST_CASE("updates require consecutive nonces and preserved totals") {
  Fixture f;
  const auto s1 = channel::make_update(f.ch(), nullptr, 1, Amount::dsd(5), Amount::dsd(5), kA, kB);
  const auto s2 = channel::make_update(f.ch(), &s1, 2, Amount::dsd(3), Amount::dsd(7), kA, kB);
  CHECK_NOTHROW(channel::check_signed(f.ch(), s2, Purpose::Update, *f.chain.state.params.scheme));
  CHECK(error_of([&] { channel::make_update(f.ch(), &s2, 2, Amount::dsd(3), Amount::dsd(7), kA, kB); }) ==
        Errc::NonMonotonicNonce);
  CHECK(error_of([&] { channel::make_update(f.ch(), &s2, 3, Amount::dsd(7), Amount::dsd(4), kA, kB); }) ==
        Errc::BalanceSumMismatch);
  CHECK(f.chain.state.channels.at(f.id).candidate == std::nullopt);
}

TEST_CASE("an update signature is not a close signature") {
  Fixture f;
  const auto s1 = channel::make_update(f.ch(), nullptr, 1, Amount::dsd(6), Amount::dsd(4), kA, kB);
  CHECK(error_of([&] { channel::cooperative_close(f.chain.state, s1); }) == Errc::BadSignature);
}

TEST_CASE("cooperative close credits the final split") {
  Fixture f;
  const Amount a0 = f.chain.state.balance_of(kA.address());
  const Amount b0 = f.chain.state.balance_of(kB.address());

  SignedState single;
  single.channel_id = f.id;
  single.nonce = 1;
  single.balance_a = Amount::dsd(6);
  single.balance_b = Amount::dsd(4);
  channel::sign_state(single, f.ch(), kA, Purpose::Close);
  CHECK(error_of([&] { channel::cooperative_close(f.chain.state, single); }) == Errc::MissingSignature);
  single.sig_b = KeyPair::from_name("mallory").sign(single.signing_bytes(Purpose::Close));
  CHECK(error_of([&] { channel::cooperative_close(f.chain.state, single); }) == Errc::BadSignature);

  const auto fin = close_signed(f.ch(), Amount::dsd(6), Amount::dsd(4), 3);
  channel::cooperative_close(f.chain.state, fin);
  CHECK(f.ch().status == Status::Closed);
  CHECK(f.chain.state.balance_of(kA.address()) == a0 + Amount::dsd(6));
  CHECK(f.chain.state.balance_of(kB.address()) == b0 + Amount::dsd(4));
  CHECK(f.chain.state.supply().channel_locks == Amount(0));
  CHECK(error_of([&] { channel::cooperative_close(f.chain.state, fin); }) == Errc::WrongChannel);
}

TEST_CASE("unilateral close starts the countdown") {
  Fixture f;
  const auto h = f.history(5);
  channel::unilateral_close(f.chain.state, f.id, kA.address(), h[4], std::nullopt, 40);
  CHECK(f.ch().status == Status::Closing);
  CHECK(f.ch().deadline_height == 60);
  CHECK(f.ch().candidate->nonce == 5);
  CHECK(error_of([&] { channel::unilateral_close(f.chain.state, f.id, kB.address(), h[3], std::nullopt, 41); }) ==
        Errc::WrongChannel);

  Fixture other(Amount::dsd(5), Amount::dsd(5), 2);
  CHECK(error_of([&] {
    channel::unilateral_close(other.chain.state, other.id, kA.address(), h[4], std::nullopt, 40);
  }) == Errc::WrongChannel);
  SignedState forged = h[4];
  forged.balance_a = forged.balance_a + Amount(1);
  forged.balance_b = forged.balance_b - Amount(1);
  Fixture third;
  forged.channel_id = third.id;
  CHECK(error_of([&] { channel::unilateral_close(third.chain.state, third.id, kA.address(), forged, std::nullopt, 1); }) ==
        Errc::BadSignature);
}

TEST_CASE("challenge with a higher nonce closes immediately") {
  Fixture f;
  const auto h = f.history(7);
  channel::unilateral_close(f.chain.state, f.id, kA.address(), h[4], std::nullopt, 100);
  CHECK(error_of([&] { channel::challenge(f.chain.state, f.id, kB.address(), h[4], std::nullopt, 101); }) ==
        Errc::NotBetter);
  CHECK(error_of([&] { channel::challenge(f.chain.state, f.id, kB.address(), h[6], std::nullopt, 120); }) ==
        Errc::TooLate);
  CHECK(error_of([&] { channel::challenge(f.chain.state, f.id, kA.address(), h[6], std::nullopt, 101); }) ==
        Errc::NotParty);
  const Amount b0 = f.chain.state.balance_of(kB.address());
  channel::challenge(f.chain.state, f.id, kB.address(), h[6], std::nullopt, 119);
  CHECK(f.ch().status == Status::Closed);
  CHECK(f.ch().settled_nonce == 7);
  CHECK(f.ch().final_split->second == h[6].balance_b);
  CHECK(f.chain.state.balance_of(kB.address()) == b0 + h[6].balance_b);
}

TEST_CASE("finalize after the deadline settles the candidate") {
  Fixture f;
  const auto h = f.history(3);
  channel::unilateral_close(f.chain.state, f.id, kB.address(), h[2], std::nullopt, 10);
  CHECK(error_of([&] { channel::finalize(f.chain.state, f.id, 29); }) == Errc::NotYet);
  channel::finalize(f.chain.state, f.id, 30);
  CHECK(f.ch().status == Status::Closed);
  CHECK(f.ch().settled_nonce == 3);
  CHECK(*f.ch().final_split == std::pair{h[2].balance_a, h[2].balance_b});
}

TEST_CASE("a channel without any signed state settles at its deposits") {
  Fixture f(Amount::dsd(7), Amount::dsd(3));
  f.history(9);  // off-chain only
  channel::unilateral_close(f.chain.state, f.id, kB.address(), std::nullopt, std::nullopt, 5);
  channel::finalize(f.chain.state, f.id, 25);
  CHECK(*f.ch().final_split == std::pair{Amount::dsd(7), Amount::dsd(3)});
  CHECK(f.ch().settled_nonce == 0);
}

TEST_CASE("settle runs templates and falls back on bad output") {
  const auto split = vm::templates::payment_split();
  const std::pair fallback{Amount::dsd(1), Amount::dsd(7)};
  const Amount total = Amount::dsd(8);
  const auto t = static_cast<std::int64_t>(total.base_units());
  CHECK(channel::settle(split, {t, 3, 4}, fallback, total) == std::pair{Amount::dsd(6), Amount::dsd(2)});
  CHECK(channel::settle(vm::assemble("FAIL"), {}, fallback, total) == fallback);
  CHECK(channel::settle(vm::assemble("PUSH 1\nPUSH 1\nSTOP"), {}, fallback, total) == fallback);
  CHECK(channel::settle(split, {t, 3, 0}, fallback, total) == fallback);
  CHECK(channel::settle(vm::assemble("PUSH 0\nBALANCE\nPUSH 0\nSTOP"), {}, fallback, total) == fallback);
}

TEST_CASE("hash-timelock candidate settles per its revealed preimage") {
  Fixture f;
  const auto htlc = vm::templates::hash_timelock();
  const std::int64_t total = static_cast<std::int64_t>(f.ch().total().base_units());
  const std::int64_t lock = ref_hash_word(1234);

  auto run = [&](std::int64_t preimage, const Address& closer) {
    Fixture g;
    const auto s = channel::make_update(g.ch(), nullptr, 1, Amount::dsd(5), Amount::dsd(5), kA, kB, htlc.hash(),
                                        {total, lock, preimage});
    CHECK(error_of([&] { channel::unilateral_close(g.chain.state, g.id, closer, s, std::nullopt, 0); }) ==
          Errc::MissingContract);
    channel::unilateral_close(g.chain.state, g.id, closer, s, htlc, 0);
    channel::finalize(g.chain.state, g.id, 20);
    return *g.ch().final_split;
  };
  CHECK(run(1234, kB.address()) == std::pair{Amount(0), Amount::dsd(10)});
  CHECK(run(4321, kA.address()) == std::pair{Amount::dsd(10), Amount(0)});
}

TEST_CASE("operations on disjoint channels commute") {
  TestChain chain;
  const KeyPair kc = KeyPair::from_name("carol"), kd = KeyPair::from_name("dave");
  const Hash256 ab = channel::open_channel(chain.state, kA.address(), kB.address(), Amount::dsd(4), Amount::dsd(4), 1, true);
  const Hash256 cd = channel::open_channel(chain.state, kc.address(), kd.address(), Amount::dsd(3), Amount::dsd(9), 1, true);
  const auto& chab = chain.state.channels.at(ab);
  const auto& chcd = chain.state.channels.at(cd);
  const auto u1 = channel::make_update(chab, nullptr, 1, Amount::dsd(2), Amount::dsd(6), kA, kB);
  const auto u2 = channel::make_update(chcd, nullptr, 1, Amount::dsd(10), Amount::dsd(2), kc, kd);
  SignedState fin = u2;
  fin.sig_a.clear();
  fin.sig_b.clear();
  channel::sign_state(fin, chcd, kc, Purpose::Close);
  channel::sign_state(fin, chcd, kd, Purpose::Close);

  std::vector<std::function<void(State&)>> ops{
      [&](State& s) { channel::unilateral_close(s, ab, kA.address(), u1, std::nullopt, 3); },
      [&](State& s) { channel::cooperative_close(s, fin); },
  };
  State x = chain.state, y = chain.state;
  ops[0](x);
  ops[1](x);
  ops[1](y);
  ops[0](y);
  CHECK(x.roots() == y.roots());
  CHECK(x.supply().balanced());
}

TEST_CASE("closed channels always split exactly their deposits") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Fixture f(Amount(1 + rng() % 1'000'000), Amount(rng() % 1'000'000));
    const std::uint64_t n = 1 + rng() % 6;
    std::vector<SignedState> h;
    for (std::uint64_t k = 1; k <= n; ++k) {
      const Amount a(rng() % (f.ch().total().base_units() + 1));
      h.push_back(channel::make_update(f.ch(), h.empty() ? nullptr : &h.back(), k, a, f.ch().total() - a, kA, kB));
    }
    const auto c = rng() % n;
    channel::unilateral_close(f.chain.state, f.id, kA.address(), h[c], std::nullopt, 0);
    if (c + 1 < n)
      channel::challenge(f.chain.state, f.id, kB.address(), h[n - 1], std::nullopt, 19);
    else
      channel::finalize(f.chain.state, f.id, 20);
    CHECK(f.ch().final_split->first + f.ch().final_split->second == f.ch().total());
    CHECK(f.ch().settled_nonce == n);
    CHECK(f.chain.state.supply().balanced());
  }
}
