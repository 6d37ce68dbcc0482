#include <doctest.h>

#include <random>

#include "cantor/dyadic.hpp"
#include "cantor/error.hpp"

using cantor::BigInt;
using cantor::Dyadic;

namespace {

bool canonical(const Dyadic& d) {
  if (d.exponent() == 0) return true;
  if (d.numerator() == 0) return false;  // zero must carry exponent 0
  return (d.numerator() & 1) != 0;
}

Dyadic random_dyadic(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-2000, 2000);
  std::uniform_int_distribution<unsigned> exp(0, 12);
  return Dyadic(BigInt(num(rng)), exp(rng));
}

}  // namespace

TEST_CASE("basic arithmetic") {
  CHECK(Dyadic::parse("1/2") + Dyadic::parse("1/4") == Dyadic::parse("3/4"));
  Dyadic z = Dyadic::parse("3/4") * Dyadic::zero();
  CHECK(z.is_zero());
  CHECK(z.exponent() == 0);

  Dyadic h = Dyadic::one();
  for (unsigned i = 1; i <= 20; ++i) {
    h = h.halved();
    CHECK(h == Dyadic::pow2_neg(i));
    CHECK(h.numerator() == 1);
    CHECK(h.exponent() == i);
  }
}

TEST_CASE("addition round trip and canonical form") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Dyadic a = random_dyadic(rng);
    Dyadic b = random_dyadic(rng);
    CHECK((a + b) - b == a);
    CHECK(canonical(a + b));
    CHECK(canonical(a - b));
    CHECK(canonical(a * b));
    CHECK(canonical(a.halved()));
  }
}

TEST_CASE("compare agrees with cross-multiplied integers") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    Dyadic a = random_dyadic(rng);
    Dyadic b = random_dyadic(rng);
    BigInt lhs = a.numerator() << b.exponent();
    BigInt rhs = b.numerator() << a.exponent();
    int expected = lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
    CHECK(a.compare(b) == expected);
  }
}

TEST_CASE("rendering") {
  CHECK(Dyadic::parse("3/4").to_fraction() == "3/4");
  CHECK(Dyadic::parse("-1/8").to_fraction() == "-1/8");
  CHECK(Dyadic(2).to_fraction() == "2");
  CHECK(Dyadic::parse("3/4").to_decimal() == "0.75");
  CHECK(Dyadic::parse("-1/8").to_decimal() == "-0.125");
  CHECK(Dyadic(5).to_decimal() == "5");
}

TEST_CASE("parsing") {
  CHECK(Dyadic::parse("0.75") == Dyadic(BigInt(3), 2));
  CHECK(Dyadic::parse("1/2^5") == Dyadic::pow2_neg(5));
  CHECK(Dyadic::parse("-6/4") == Dyadic(BigInt(-3), 1));
  CHECK(Dyadic::parse("17") == Dyadic(17));
  CHECK_THROWS_AS(Dyadic::parse("0.1"), cantor::ParseError);
  CHECK_THROWS_AS(Dyadic::parse("1/3"), cantor::ParseError);
  CHECK_THROWS_AS(Dyadic::parse("abc"), cantor::ParseError);
  CHECK_THROWS_AS(Dyadic::parse(""), cantor::ParseError);

  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    Dyadic a = random_dyadic(rng);
    CHECK(Dyadic::parse(a.to_fraction()) == a);
    CHECK(Dyadic::parse(a.to_decimal()) == a);
  }
}

TEST_CASE("times_pow2") {
  Dyadic v = Dyadic::parse("3/8");
  CHECK(v.times_pow2(3) == Dyadic(3));
  CHECK(v.times_pow2(-2) == Dyadic::parse("3/32"));
  CHECK(v.times_pow2(4) == Dyadic(6));
  CHECK(Dyadic::zero().times_pow2(5).is_zero());
}
