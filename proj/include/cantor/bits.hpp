#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace cantor {

/// Finite binary string sigma over {0,1}; the generator of the cylinder
/// [[sigma]]. Stored as '0'/'1' characters so renders are free.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::string_view s);

  static BitString zeros(size_t n) { return raw(std::string(n, '0')); }
  static BitString ones(size_t n) { return raw(std::string(n, '1')); }
  static BitString run(int bit, size_t n) {
    return raw(std::string(n, bit ? '1' : '0'));
  }
  // The n-bit string whose bits spell `value` big-endian, so that
  // from_index(v, n) for v = 0..2^n-1 enumerates {0,1}^n in lexicographic
  // order. Requires n <= 63.
  static BitString from_index(uint64_t value, size_t n);

  size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int bit(size_t i) const { return bits_[i] == '1' ? 1 : 0; }

  void push_back(int b) { bits_.push_back(b ? '1' : '0'); }
  void append_run(int b, size_t n) { bits_.append(n, b ? '1' : '0'); }
  void append(const BitString& o) { bits_ += o.bits_; }

  BitString prefix(size_t n) const;
  BitString extended(int b) const;

  // sigma <= tau in the prefix order
  bool is_prefix_of(const BitString& tau) const;
  // one of the two is a prefix of the other
  bool comparable(const BitString& tau) const {
    return is_prefix_of(tau) || tau.is_prefix_of(*this);
  }

  BitString operator+(const BitString& o) const {
    return raw(bits_ + o.bits_);
  }

  // Lexicographic over the characters; '0' < '1' gives the natural order.
  auto operator<=>(const BitString& o) const = default;

  const std::string& str() const { return bits_; }

 private:
  static BitString raw(std::string s) {
    BitString b;
    b.bits_ = std::move(s);
    return b;
  }
  std::string bits_;
};

// First index at which a and b disagree; min(|a|,|b|) when one extends the
// other.
size_t first_mismatch(const BitString& a, const BitString& b);

// Order by length first, then lexicographically. Used for audit reports so
// that output is grouped by depth.
bool depth_lex_less(const BitString& a, const BitString& b);

std::ostream& operator<<(std::ostream& os, const BitString& b);

/// Eventually periodic infinite sequence: `prefix` then `tail` repeating
/// forever (tail nonempty). This is the canonical decidable stand-in for an
/// element of Cantor space; equality and prefix extraction are exact.
class BitPattern {
 public:
  // Canonicalizes: the tail is reduced to its primitive period and the
  // prefix is shrunk while its last bit matches the rotating tail, so two
  // patterns denote the same sequence iff their canonical parts are equal.
  BitPattern(BitString prefix, BitString tail);

  static BitPattern constant(int b) {
    return BitPattern(BitString(), BitString::run(b, 1));
  }
  // sigma followed by b forever
  static BitPattern eventually(BitString sigma, int b) {
    return BitPattern(std::move(sigma), BitString::run(b, 1));
  }
  // "101+10" = 101 then 10 repeating; "+0" = all zeros.
  static BitPattern parse(std::string_view text);

  int bit(size_t i) const;
  BitString first(size_t n) const;
  BitPattern with_flipped(size_t pos) const;

  const BitString& prefix() const { return prefix_; }
  const BitString& tail() const { return tail_; }

  bool operator==(const BitPattern& o) const {
    return prefix_ == o.prefix_ && tail_ == o.tail_;
  }
  // Deterministic order for maps/reports (canonical parts, prefix first).
  bool operator<(const BitPattern& o) const {
    if (prefix_ != o.prefix_) return prefix_ < o.prefix_;
    return tail_ < o.tail_;
  }

  std::string render() const { return prefix_.str() + "+" + tail_.str(); }

 private:
  BitString prefix_;
  BitString tail_;
};

// First index where the two sequences differ; nullopt when equal.
std::optional<size_t> first_difference(const BitPattern& a,
                                       const BitPattern& b);

std::ostream& operator<<(std::ostream& os, const BitPattern& p);

}  // namespace cantor
