#pragma once

#include <array>
#include <string_view>

#include "dsdin/hash.hpp"

namespace dsdin {

/// Signature verification is pluggable; protocol code only sees this
/// interface. Signatures travel as opaque byte strings (empty = missing).
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual bool verify(const Address& signer, ByteView message, ByteView signature) const = 0;
};

/// Ed25519 (libsodium). Deterministic: same key and message give the same
/// signature.
class Ed25519Scheme final : public SignatureScheme {
 public:
  bool verify(const Address& signer, ByteView message, ByteView signature) const override;
};

const SignatureScheme& default_signature_scheme();

class KeyPair {
 public:
  static KeyPair from_seed(const Hash256& seed);
  /// Deterministic key for a human-readable identity (simulator / CLI).
  static KeyPair from_name(std::string_view name);

  const Address& address() const noexcept { return public_key_; }
  const Hash256& seed() const noexcept { return seed_; }
  Bytes sign(ByteView message) const;

 private:
  Hash256 seed_;
  Address public_key_;
  std::array<std::uint8_t, 64> secret_{};
};

}  // namespace dsdin
