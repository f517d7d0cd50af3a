#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace coxforge {

// Non-negative integer extended with infinity. Bond labels, girths,
// diameters and graph distances all live here; infinity compares above
// every finite value.
class ExtInt {
 public:
  constexpr ExtInt() : v_(0) {}
  constexpr ExtInt(long long v) : v_(v) {}
  static constexpr ExtInt infinity() { return ExtInt(kInf, Tag{}); }

  constexpr bool is_infinite() const { return v_ == kInf; }
  constexpr bool is_finite() const { return v_ != kInf; }
  // Meaningful only when finite.
  constexpr long long value() const { return v_; }

  // Saturating arithmetic: infinity absorbs.
  constexpr ExtInt plus(long long d) const {
    return is_infinite() ? *this : ExtInt(v_ + d);
  }
  constexpr ExtInt times(long long k) const {
    return is_infinite() ? *this : ExtInt(v_ * k);
  }

  friend constexpr bool operator==(ExtInt a, ExtInt b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(ExtInt a, ExtInt b) { return a.v_ != b.v_; }
  friend constexpr bool operator<(ExtInt a, ExtInt b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(ExtInt a, ExtInt b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>(ExtInt a, ExtInt b) { return a.v_ > b.v_; }
  friend constexpr bool operator>=(ExtInt a, ExtInt b) { return a.v_ >= b.v_; }

  std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

 private:
  struct Tag {};
  constexpr ExtInt(long long v, Tag) : v_(v) {}
  static constexpr long long kInf = std::numeric_limits<long long>::max();
  long long v_;
};

}  // namespace coxforge
