#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "dsdin/error.hpp"

namespace dsdin {

/// Token quantity in base units. 1 DSD = 1,000,000 base units.
/// Arithmetic is exact; overflow and underflow throw instead of wrapping.
class Amount {
 public:
  static constexpr std::uint64_t kPerDsd = 1'000'000;

  constexpr Amount() = default;
  constexpr explicit Amount(std::uint64_t base_units) : v_(base_units) {}

  static constexpr Amount dsd(std::uint64_t whole) { return Amount(whole * kPerDsd); }

  constexpr std::uint64_t base_units() const noexcept { return v_; }
  constexpr bool is_zero() const noexcept { return v_ == 0; }

  constexpr auto operator<=>(const Amount&) const = default;

  Amount operator+(Amount o) const {
    std::uint64_t r;
    if (__builtin_add_overflow(v_, o.v_, &r)) throw Error(Errc::Overflow, "amount addition");
    return Amount(r);
  }
  Amount operator-(Amount o) const {
    if (o.v_ > v_) throw Error(Errc::Overflow, "amount underflow");
    return Amount(v_ - o.v_);
  }
  Amount operator*(std::uint64_t k) const {
    std::uint64_t r;
    if (__builtin_mul_overflow(v_, k, &r)) throw Error(Errc::Overflow, "amount multiplication");
    return Amount(r);
  }
  Amount& operator+=(Amount o) { return *this = *this + o; }
  Amount& operator-=(Amount o) { return *this = *this - o; }

  /// Subtraction floored at zero.
  Amount saturating_sub(Amount o) const noexcept { return Amount(o.v_ > v_ ? 0 : v_ - o.v_); }

  std::string str() const { return std::to_string(v_); }

 private:
  std::uint64_t v_ = 0;
};

inline Amount min(Amount a, Amount b) { return a < b ? a : b; }

}  // namespace dsdin
