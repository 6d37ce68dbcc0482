#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace cantor {

using BigInt = boost::multiprecision::cpp_int;

/// Exact dyadic rational n / 2^e with arbitrary-precision numerator.
///
/// Canonical form invariant: e == 0, or n is odd, or (n == 0 and e == 0).
/// Every operation is exact; there is no rounding anywhere in this type.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long long n) : num_(n) {}  // NOLINT: implicit integers are convenient
  Dyadic(BigInt numerator, unsigned exponent);

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1); }
  // 2^{-i}
  static Dyadic pow2_neg(unsigned i) { return Dyadic(BigInt(1), i); }

  const BigInt& numerator() const { return num_; }
  unsigned exponent() const { return exp_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return exp_ == 0; }

  Dyadic operator-() const;
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  Dyadic halved() const;
  Dyadic abs() const;
  // value * 2^k (k may be negative)
  Dyadic times_pow2(long k) const;

  // Total order consistent with rational value.
  int compare(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const { return compare(o) == 0; }
  std::strong_ordering operator<=>(const Dyadic& o) const {
    int c = compare(o);
    return c < 0   ? std::strong_ordering::less
           : c > 0 ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }

  // Lowest-terms fraction with power-of-two denominator: "3/4", "-1/8", "2".
  std::string to_fraction() const;
  // Exact decimal expansion (always finite for dyadics): "0.75".
  std::string to_decimal() const;

  // Accepts "3", "-3/4", "1/2^5" and exact decimals like "0.125".
  // Throws ParseError on malformed text or non-dyadic values.
  static Dyadic parse(std::string_view text);

 private:
  void canonicalize();

  BigInt num_ = 0;
  unsigned exp_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& d);

}  // namespace cantor
