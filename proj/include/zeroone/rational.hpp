#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "zeroone/errors.hpp"

namespace zeroone {

/// Exact rational with int64 numerator/denominator and 128-bit intermediates.
///
/// Every probability handled exactly here has denominator bounded by the
/// enumeration cap (1e8), far inside the representable range; if a computation
/// ever leaves it, the narrowing check throws RationalOverflowError instead of
/// returning a wrong value.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rat(std::int64_t num, std::int64_t den) { assign(num, den); }

  static Rat from_count(std::uint64_t hits, std::uint64_t total) {
    return Rat(narrow(static_cast<__int128>(hits)), narrow(static_cast<__int128>(total)));
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw RationalOverflowError("rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }

  Rat abs() const { return num_ < 0 ? Rat(-num_, den_) : *this; }

 private:
  using i128 = __int128;

  static std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
      throw RationalOverflowError("rational arithmetic overflowed 64-bit components");
    }
    return static_cast<std::int64_t>(v);
  }

  static Rat make(i128 num, i128 den) {
    if (den == 0) throw RationalOverflowError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 g = gcd128(a, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    Rat r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void assign(std::int64_t num, std::int64_t den) {
    *this = make(num, den);
  }

  std::int64_t num_;
  std::int64_t den_;
};

/// Exact binomial coefficient; throws TooLargeError past the uint64 range.
inline std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 result = 1;
  for (unsigned j = 1; j <= k; ++j) {
    result = result * (n - k + j) / j;  // exact: C(n-k+j, j) is integral
    if (result > UINT64_MAX) throw TooLargeError("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace zeroone
