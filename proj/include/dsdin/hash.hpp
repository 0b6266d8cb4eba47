#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsdin {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// 32-byte digest. Equality and ordering are byte-wise.
struct Hash256 {
  std::array<std::uint8_t, 32> bytes{};

  auto operator<=>(const Hash256&) const = default;

  bool is_zero() const noexcept;
  std::string hex() const;
  ByteView view() const noexcept { return {bytes.data(), bytes.size()}; }

  static Hash256 from_hex(std::string_view hex);
  static Hash256 filled(std::uint8_t b) noexcept;
};

// Account identifiers share the digest representation (public keys or
// derived contract keys).
using Address = Hash256;

/// Incremental SHA-256.
class Hasher {
 public:
  Hasher();
  Hasher& update(ByteView data);
  Hasher& update(const Hash256& h) { return update(h.view()); }
  Hasher& update_u64(std::uint64_t v);
  Hasher& update_str(std::string_view s);
  Hash256 finish();

 private:
  alignas(64) std::array<std::uint8_t, 128> state_{};
};

Hash256 sha256(ByteView data);
Hash256 sha256(std::string_view data);

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

/// Big-endian 256-bit integer value of the digest, reduced mod `m` (m > 0).
std::uint64_t hash_mod(const Hash256& h, std::uint64_t m);

/// First eight digest bytes as a big-endian integer.
std::uint64_t hash_prefix_u64(const Hash256& h) noexcept;

}  // namespace dsdin
