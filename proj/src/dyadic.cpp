#include "cantor/dyadic.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor {

namespace mp = boost::multiprecision;

Dyadic::Dyadic(BigInt numerator, unsigned exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  canonicalize();
}

void Dyadic::canonicalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && (num_ & 1) == 0) {
    num_ >>= 1;
    --exp_;
  }
}

Dyadic Dyadic::operator-() const {
  Dyadic r;
  r.num_ = -num_;
  r.exp_ = exp_;
  return r;
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  unsigned e = std::max(exp_, o.exp_);
  BigInt n = (num_ << (e - exp_)) + (o.num_ << (e - o.exp_));
  return Dyadic(std::move(n), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
  return Dyadic(num_ * o.num_, exp_ + o.exp_);
}

Dyadic Dyadic::halved() const {
  if (num_ == 0) return Dyadic();
  Dyadic r;
  r.num_ = num_;
  r.exp_ = exp_ + 1;
  r.canonicalize();
  return r;
}

Dyadic Dyadic::abs() const { return is_negative() ? -*this : *this; }

Dyadic Dyadic::times_pow2(long k) const {
  if (num_ == 0) return Dyadic();
  if (k >= 0) {
    long shift_down = std::min<long>(k, exp_);
    return Dyadic(num_ << (k - shift_down),
                  exp_ - static_cast<unsigned>(shift_down));
  }
  return Dyadic(num_, exp_ + static_cast<unsigned>(-k));
}

int Dyadic::compare(const Dyadic& o) const {
  unsigned e = std::max(exp_, o.exp_);
  BigInt a = num_ << (e - exp_);
  BigInt b = o.num_ << (e - o.exp_);
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

std::string Dyadic::to_fraction() const {
  std::ostringstream os;
  os << num_;
  if (exp_ > 0) os << "/" << (BigInt(1) << exp_);
  return os.str();
}

std::string Dyadic::to_decimal() const {
  if (exp_ == 0) {
    std::ostringstream os;
    os << num_;
    return os.str();
  }
  // n / 2^e = n * 5^e / 10^e, so the expansion has exactly e fraction digits.
  BigInt scaled = num_;
  for (unsigned i = 0; i < exp_; ++i) scaled *= 5;
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::ostringstream os;
  os << scaled;
  std::string digits = os.str();
  if (digits.size() <= exp_) {
    digits.insert(0, exp_ + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - exp_, ".");
  if (neg) digits.insert(0, "-");
  return digits;
}

namespace {

BigInt parse_bigint(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer");
  size_t pos = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (pos == text.size()) throw ParseError("sign without digits");
  // Digit-by-digit to sidestep cpp_int's base prefixes (leading 0 = octal).
  BigInt v = 0;
  for (size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError("bad digit in '" + std::string(text) + "'");
    }
    v = v * 10 + (text[i] - '0');
  }
  return text[0] == '-' ? -v : v;
}

// Returns e with d == 2^e, or throws.
unsigned log2_exact(const BigInt& d) {
  if (d <= 0) throw ParseError("denominator must be positive");
  BigInt v = d;
  unsigned e = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++e;
  }
  if (v != 1) throw ParseError("denominator is not a power of two");
  return e;
}

}  // namespace

Dyadic Dyadic::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty dyadic literal");
  size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    BigInt n = parse_bigint(text.substr(0, slash));
    std::string_view den = text.substr(slash + 1);
    unsigned e = 0;
    if (den.rfind("2^", 0) == 0) {
      BigInt k = parse_bigint(den.substr(2));
      if (k < 0 || k > 1000000) throw ParseError("exponent out of range");
      e = static_cast<unsigned>(k);
    } else {
      e = log2_exact(parse_bigint(den));
    }
    return Dyadic(std::move(n), e);
  }
  size_t dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string whole(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (frac.empty()) throw ParseError("missing fraction digits");
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += '0';
    BigInt scaled = parse_bigint(whole + frac);
    if (neg && scaled > 0) scaled = -scaled;
    // value = scaled / 10^k; dyadic iff 5^k divides scaled
    BigInt five = 1;
    for (size_t i = 0; i < frac.size(); ++i) five *= 5;
    if (scaled % five != 0) {
      throw ParseError("'" + std::string(text) + "' is not a dyadic rational");
    }
    return Dyadic(scaled / five, static_cast<unsigned>(frac.size()));
  }
  return Dyadic(parse_bigint(text), 0);
}

std::ostream& operator<<(std::ostream& os, const Dyadic& d) {
  return os << d.to_fraction();
}

}  // namespace cantor
