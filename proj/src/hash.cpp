#include "dsdin/hash.hpp"

#include <sodium.h>

#include <cstring>

#include "dsdin/error.hpp"

namespace dsdin {

namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  }
};

void ensure_sodium() { static const SodiumInit init; }

crypto_hash_sha256_state* as_state(std::array<std::uint8_t, 128>& raw) {
  static_assert(sizeof(crypto_hash_sha256_state) <= 128);
  return reinterpret_cast<crypto_hash_sha256_state*>(raw.data());
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

bool Hash256::is_zero() const noexcept {
  for (auto b : bytes)
    if (b != 0) return false;
  return true;
}

std::string Hash256::hex() const { return to_hex(view()); }

Hash256 Hash256::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw Error(Errc::Decode, "hash hex must be 64 characters");
  Bytes raw = dsdin::from_hex(hex);
  Hash256 h;
  std::memcpy(h.bytes.data(), raw.data(), 32);
  return h;
}

Hash256 Hash256::filled(std::uint8_t b) noexcept {
  Hash256 h;
  h.bytes.fill(b);
  return h;
}

Hasher::Hasher() {
  ensure_sodium();
  crypto_hash_sha256_init(as_state(state_));
}

Hasher& Hasher::update(ByteView data) {
  crypto_hash_sha256_update(as_state(state_), data.data(), data.size());
  return *this;
}

Hasher& Hasher::update_u64(std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 7; i >= 0; --i) {
    buf[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return update(ByteView(buf, 8));
}

Hasher& Hasher::update_str(std::string_view s) {
  return update(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

Hash256 Hasher::finish() {
  Hash256 out;
  crypto_hash_sha256_final(as_state(state_), out.bytes.data());
  return out;
}

Hash256 sha256(ByteView data) { return Hasher().update(data).finish(); }

Hash256 sha256(std::string_view data) { return Hasher().update_str(data).finish(); }

std::string to_hex(ByteView data) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(Errc::Decode, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = hex_digit(hex[2 * i]);
    int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::Decode, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

std::uint64_t hash_mod(const Hash256& h, std::uint64_t m) {
  if (m == 0) throw Error(Errc::BadFormat, "modulus must be positive");
  unsigned __int128 r = 0;
  for (auto b : h.bytes) r = ((r << 8) | b) % m;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t hash_prefix_u64(const Hash256& h) noexcept {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | h.bytes[i];
  return v;
}

}  // namespace dsdin
