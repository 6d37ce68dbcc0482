#include "cantor/bits.hpp"

#include <numeric>
#include <ostream>

#include "cantor/error.hpp"

namespace cantor {

BitString::BitString(std::string_view s) {
  bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw ParseError("bit string may contain only 0/1, got '" +
                       std::string(s) + "'");
    }
    bits_.push_back(c);
  }
}

BitString BitString::from_index(uint64_t value, size_t n) {
  if (n > 63) throw GuardError("from_index limited to 63 bits");
  std::string s(n, '0');
  for (size_t i = 0; i < n; ++i) {
    if ((value >> (n - 1 - i)) & 1u) s[i] = '1';
  }
  return raw(std::move(s));
}

BitString BitString::prefix(size_t n) const {
  if (n >= bits_.size()) return *this;
  return raw(bits_.substr(0, n));
}

BitString BitString::extended(int b) const {
  BitString r = *this;
  r.push_back(b);
  return r;
}

bool BitString::is_prefix_of(const BitString& tau) const {
  return bits_.size() <= tau.bits_.size() &&
         tau.bits_.compare(0, bits_.size(), bits_) == 0;
}

size_t first_mismatch(const BitString& a, const BitString& b) {
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a.str()[i] != b.str()[i]) return i;
  }
  return n;
}

bool depth_lex_less(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::ostream& operator<<(std::ostream& os, const BitString& b) {
  return os << (b.empty() ? "(empty)" : b.str());
}

namespace {

// Smallest d dividing |w| such that w is d-periodic.
size_t primitive_period(const std::string& w) {
  for (size_t d = 1; d <= w.size(); ++d) {
    if (w.size() % d != 0) continue;
    bool ok = true;
    for (size_t i = d; i < w.size() && ok; ++i) {
      ok = w[i] == w[i - d];
    }
    if (ok) return d;
  }
  return w.size();
}

}  // namespace

BitPattern::BitPattern(BitString prefix, BitString tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  if (tail_.empty()) throw DomainError("pattern tail must be nonempty");
  std::string t = tail_.str();
  t.resize(primitive_period(t));
  std::string p = prefix_.str();
  // Absorb the prefix into the period: p·(t)^w == p'·(t')^w with p' shorter
  // whenever p ends with the bit the rotated tail would supply.
  while (!p.empty() && p.back() == t.back()) {
    p.pop_back();
    t = std::string(1, t.back()) + t.substr(0, t.size() - 1);
  }
  prefix_ = BitString(p);
  tail_ = BitString(t);
}

BitPattern BitPattern::parse(std::string_view text) {
  size_t plus = text.find('+');
  if (plus == std::string_view::npos) {
    throw ParseError("pattern must be '<prefix>+<tail>', got '" +
                     std::string(text) + "'");
  }
  BitString p{text.substr(0, plus)};
  BitString t{text.substr(plus + 1)};
  if (t.empty()) throw ParseError("pattern tail must be nonempty");
  return BitPattern(std::move(p), std::move(t));
}

int BitPattern::bit(size_t i) const {
  if (i < prefix_.size()) return prefix_.bit(i);
  return tail_.bit((i - prefix_.size()) % tail_.size());
}

BitString BitPattern::first(size_t n) const {
  std::string s;
  s.reserve(n);
  for (size_t i = 0; i < n; ++i) s.push_back(bit(i) ? '1' : '0');
  return BitString(s);
}

BitPattern BitPattern::with_flipped(size_t pos) const {
  size_t keep = std::max(prefix_.size(), pos + 1);
  // Round the expanded prefix up so the tail still starts in phase.
  while ((keep - prefix_.size()) % tail_.size() != 0) ++keep;
  std::string p = first(keep).str();
  p[pos] = p[pos] == '0' ? '1' : '0';
  return BitPattern(BitString(p), tail_);
}

std::optional<size_t> first_difference(const BitPattern& a,
                                       const BitPattern& b) {
  if (a == b) return std::nullopt;
  size_t bound = std::max(a.prefix().size(), b.prefix().size()) +
                 std::lcm(a.tail().size(), b.tail().size());
  for (size_t i = 0; i < bound; ++i) {
    if (a.bit(i) != b.bit(i)) return i;
  }
  // Canonical forms differ, so the sequences must differ within the bound.
  throw DomainError("pattern canonicalization is inconsistent");
}

std::ostream& operator<<(std::ostream& os, const BitPattern& p) {
  return os << p.render();
}

}  // namespace cantor
