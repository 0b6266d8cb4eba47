#include "dsdin/ledger.hpp"

#include "dsdin/codec.hpp"
#include "dsdin/error.hpp"

namespace dsdin {

Bytes Account::encode() const {
  Writer w;
  w.hash(address).u64(balance.base_units()).u64(counter).u64(freshness).u8(static_cast<std::uint8_t>(kind));
  w.boolean(code_hash.has_value());
  if (code_hash) w.hash(*code_hash);
  return std::move(w).take();
}

Account Account::decode(ByteView in) {
  Reader r(in);
  Account a;
  a.address = r.hash();
  a.balance = Amount(r.u64());
  a.counter = r.u64();
  a.freshness = r.u64();
  const auto kind = r.u8();
  if (kind > 1) throw Error(Errc::Decode, "account kind");
  a.kind = static_cast<AccountKind>(kind);
  if (r.boolean()) a.code_hash = r.hash();
  r.expect_done();
  if (a.kind == AccountKind::External && a.code_hash) throw Error(Errc::Decode, "external account with code");
  return a;
}

Bytes NameRecord::encode() const {
  Writer w;
  w.str(name).hash(target).hash(owner);
  return std::move(w).take();
}

NameRecord NameRecord::decode(ByteView in) {
  Reader r(in);
  NameRecord n;
  n.name = r.str();
  n.target = r.hash();
  n.owner = r.hash();
  r.expect_done();
  if (n.name.size() > kMaxNameBytes) throw Error(Errc::Decode, "name too long");
  return n;
}

namespace {

void encode_pow_fields(Writer& w, const BlockHeader& h) {
  w.u64(h.height)
      .hash(h.prev_hash)
      .hash(h.tx_root)
      .hash(h.account_root)
      .hash(h.name_root)
      .hash(h.wormhole_root)
      .hash(h.oracle_open_root)
      .hash(h.oracle_answer_root)
      .hash(h.proof_root)
      .hash(h.miner);
}

}  // namespace

void BlockHeader::encode(Writer& w) const {
  encode_pow_fields(w, *this);
  w.hash(entropy).u64(pow_nonce).u32(static_cast<std::uint32_t>(pow_cycle.size()));
  for (auto e : pow_cycle) w.u32(e);
}

Bytes BlockHeader::encode() const {
  Writer w;
  encode(w);
  return std::move(w).take();
}

BlockHeader BlockHeader::decode(Reader& r) {
  BlockHeader h;
  h.height = r.u64();
  h.prev_hash = r.hash();
  h.tx_root = r.hash();
  h.account_root = r.hash();
  h.name_root = r.hash();
  h.wormhole_root = r.hash();
  h.oracle_open_root = r.hash();
  h.oracle_answer_root = r.hash();
  h.proof_root = r.hash();
  h.miner = r.hash();
  h.entropy = r.hash();
  h.pow_nonce = r.u64();
  const auto n = r.count(4);
  h.pow_cycle.resize(n);
  for (auto& e : h.pow_cycle) e = r.u32();
  return h;
}

BlockHeader BlockHeader::decode(ByteView in) {
  Reader r(in);
  auto h = decode(r);
  r.expect_done();
  return h;
}

Hash256 BlockHeader::hash() const { return sha256(encode()); }

Hash256 BlockHeader::pow_hash() const {
  Writer w;
  encode_pow_fields(w, *this);
  return sha256(w.data());
}

Hash256 derive_entropy(const Hash256& prev_entropy, const Address& miner, std::uint64_t pow_nonce) {
  return Hasher().update(prev_entropy).update(miner).update_u64(pow_nonce).finish();
}

void validate_header(const BlockHeader& header, const std::optional<BlockHeader>& prev, const PowParams& params) {
  if (prev) {
    if (header.prev_hash != prev->hash()) throw Error(Errc::BadLink);
    if (header.height != prev->height + 1) throw Error(Errc::BadHeight);
  } else {
    if (!header.prev_hash.is_zero()) throw Error(Errc::BadLink, "genesis must have a zero prev_hash");
    if (header.height != 0) throw Error(Errc::BadHeight, "genesis must have height 0");
  }
  const Hash256 prev_entropy = prev ? prev->entropy : Hash256{};
  if (header.entropy != derive_entropy(prev_entropy, header.miner, header.pow_nonce))
    throw Error(Errc::BadPow, "entropy mismatch");
  if (!verify(header.pow_hash(), header.solution(), params)) throw Error(Errc::BadPow);
}

void mine_header(BlockHeader& header, const std::optional<BlockHeader>& prev, const PowParams& params,
                 std::uint64_t nonce_budget) {
  auto sol = solve(header.pow_hash(), params, nonce_budget);
  if (!sol) throw Error(Errc::PowNotFound, "height " + std::to_string(header.height));
  header.pow_nonce = sol->nonce;
  header.pow_cycle = std::move(sol->edges);
  header.entropy = derive_entropy(prev ? prev->entropy : Hash256{}, header.miner, header.pow_nonce);
}

MaintenanceCharge charge_maintenance(const Account& account, std::uint64_t current_height, Amount rate_per_block) {
  if (current_height < account.freshness) throw Error(Errc::BadHeight, "maintenance before freshness");
  MaintenanceCharge out{account, {}, {}};
  const std::uint64_t elapsed = current_height - account.freshness;
  const unsigned __int128 owed = static_cast<unsigned __int128>(rate_per_block.base_units()) * elapsed;
  const std::uint64_t bal = account.balance.base_units();
  if (owed >= bal) {
    out.collected = account.balance;
    const unsigned __int128 short_by = owed - bal;
    out.shortfall = Amount(short_by > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(short_by));
  } else {
    out.collected = Amount(static_cast<std::uint64_t>(owed));
  }
  out.account.balance = account.balance - out.collected;
  out.account.freshness = current_height;
  return out;
}

}  // namespace dsdin
