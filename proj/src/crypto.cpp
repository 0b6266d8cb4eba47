#include "dsdin/crypto.hpp"

#include <sodium.h>

#include <string>

namespace dsdin {

bool Ed25519Scheme::verify(const Address& signer, ByteView message, ByteView signature) const {
  if (signature.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), signer.bytes.data()) == 0;
}

const SignatureScheme& default_signature_scheme() {
  static const Ed25519Scheme scheme;
  return scheme;
}

KeyPair KeyPair::from_seed(const Hash256& seed) {
  sha256(std::string_view{});  // initialises libsodium
  KeyPair kp;
  kp.seed_ = seed;
  crypto_sign_seed_keypair(kp.public_key_.bytes.data(), kp.secret_.data(), seed.bytes.data());
  return kp;
}

KeyPair KeyPair::from_name(std::string_view name) {
  return from_seed(sha256("dsdin-identity:" + std::string(name)));
}

Bytes KeyPair::sign(ByteView message) const {
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

}  // namespace dsdin
