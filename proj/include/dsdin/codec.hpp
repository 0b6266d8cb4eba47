#pragma once

// Canonical binary encoding: fixed field order, big-endian integers,
// u32-length-prefixed byte strings and sequences.

#include <cstdint>
#include <string>
#include <string_view>

#include "dsdin/error.hpp"
#include "dsdin/hash.hpp"

namespace dsdin {

class Writer {
 public:
  Writer() { out_.reserve(128); }

  Writer& u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
  }
  Writer& u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    return *this;
  }
  Writer& u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    return *this;
  }
  Writer& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Writer& boolean(bool v) { return u8(v ? 1 : 0); }
  Writer& hash(const Hash256& h) {
    out_.insert(out_.end(), h.bytes.begin(), h.bytes.end());
    return *this;
  }
  Writer& bytes(ByteView b) {
    u32(static_cast<std::uint32_t>(b.size()));
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
  }
  Writer& str(std::string_view s) {
    return bytes(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }
  Writer& raw(ByteView b) {
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
  }

  const Bytes& data() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  bool boolean() {
    auto v = u8();
    if (v > 1) throw Error(Errc::Decode, "boolean out of range");
    return v == 1;
  }
  Hash256 hash() {
    need(32);
    Hash256 h;
    for (auto& b : h.bytes) b = in_[pos_++];
    return h;
  }
  Bytes bytes() {
    auto n = u32();
    need(n);
    Bytes b(in_.begin() + pos_, in_.begin() + pos_ + n);
    pos_ += n;
    return b;
  }
  std::string str() {
    auto b = bytes();
    return std::string(b.begin(), b.end());
  }
  // Sequence length guard: each element needs at least `min_elem` bytes.
  std::uint32_t count(std::size_t min_elem = 1) {
    auto n = u32();
    if (min_elem > 0 && n > remaining() / min_elem) throw Error(Errc::Decode, "sequence length exceeds input");
    return n;
  }

  std::size_t remaining() const noexcept { return in_.size() - pos_; }
  bool done() const noexcept { return pos_ == in_.size(); }
  void expect_done() const {
    if (!done()) throw Error(Errc::Decode, "trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw Error(Errc::Decode, "truncated input");
  }

  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace dsdin
