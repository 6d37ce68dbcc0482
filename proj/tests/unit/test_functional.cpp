#include <doctest.h>

#include <map>
#include <random>

#include "cantor/error.hpp"
#include "cantor/functional.hpp"
#include "cantor/schedule.hpp"
#include "cantor/tally.hpp"

using namespace cantor;

namespace {

// Random monotone functional as an explicit truth table on {0,1}^<=depth:
// each child appends 0..2 random bits to its parent's output.
TTFunctional random_table(std::mt19937_64& rng, size_t depth,
                          std::map<BitString, BitString>* table_out) {
  std::map<BitString, BitString> table;
  table[BitString()] = BitString();
  for (size_t len = 1; len <= depth; ++len) {
    for (uint64_t v = 0; v < (uint64_t{1} << len); ++v) {
      BitString rho = BitString::from_index(v, len);
      BitString out = table[rho.prefix(len - 1)];
      size_t extra = rng() % 3;
      for (size_t i = 0; i < extra; ++i) out.push_back(rng() & 1);
      table[rho] = out;
    }
  }
  // use bound read off the table: least length where every node has n
  // output bits
  size_t min_leaf = SIZE_MAX;
  for (uint64_t v = 0; v < (uint64_t{1} << depth); ++v) {
    min_leaf = std::min(min_leaf, table[BitString::from_index(v, depth)].size());
  }
  std::vector<size_t> use_values;
  for (size_t n = 1; n <= min_leaf; ++n) {
    size_t len = 0;
    for (size_t cand = 0; cand <= depth; ++cand) {
      bool ok = true;
      for (uint64_t v = 0; v < (uint64_t{1} << cand) && ok; ++v) {
        ok = table[BitString::from_index(v, cand)].size() >= n;
      }
      if (ok) {
        len = cand;
        break;
      }
    }
    use_values.push_back(len);
  }
  if (use_values.empty()) use_values.push_back(depth);
  std::vector<std::pair<BitString, BitString>> rows(table.begin(), table.end());
  if (table_out) *table_out = table;
  return table_functional("random-table", std::move(rows), std::move(use_values));
}

}  // namespace

TEST_CASE("tt_apply on builtins") {
  CHECK(tt_apply(identity_functional(), BitString{"0110"}) ==
        BitString{"0110"});
  CHECK(tt_apply(constant_functional(BitPattern::parse("+0")),
                 BitString{"1011"}) == BitString{"0000"});
  CHECK(tt_apply(project_even(), BitString{"10"}) == BitString{"1"});
  CHECK(tt_apply(project_even(), BitString{"1011"}) == BitString{"11"});
}

TEST_CASE("tt_apply rejects non-monotone steps") {
  TTFunctional bad(
      "flipper",
      [](const BitString& rho) {
        // flips its first answer once the input grows
        return rho.size() < 2 ? BitString{"0"} : BitString{"1"};
      },
      [](size_t n) { return n; });
  CHECK_THROWS_AS(tt_apply(bad, BitString{"0110"}), DomainError);
}

TEST_CASE("induced measure of builtins") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    size_t len = rng() % 10;
    BitString sigma = BitString::from_index(rng() & ((1u << len) - 1), len);
    CHECK(induced_measure_full(identity_functional(), sigma) ==
          lebesgue(sigma));
  }
  TTFunctional to_zero = constant_functional(BitPattern::parse("+0"));
  CHECK(induced_measure_full(to_zero, BitString{"000"}) == Dyadic::one());
  CHECK(induced_measure_full(to_zero, BitString{"01"}).is_zero());
  CHECK(induced_measure_full(project_even(), BitString{"1"}) ==
        Dyadic::parse("1/2"));
}

TEST_CASE("pruned exploration matches full enumeration") {
  MutationSchedule sched =
      MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip 0\n");
  std::vector<TTFunctional> suite = {
      identity_functional(), constant_functional(BitPattern::parse("10+01")),
      project_even(), make_phi_a(sched).tt(), make_psi(sched).tt()};
  std::mt19937_64 rng(31);
  for (const auto& phi : suite) {
    for (int i = 0; i < 40; ++i) {
      size_t len = rng() % 8;
      BitString sigma = BitString::from_index(rng() & ((1u << len) - 1), len);
      CHECK(induced_measure_full(phi, sigma) ==
            induced_measure_pruned(phi, sigma));
    }
  }
}

TEST_CASE("induced measure mass conservation and additivity") {
  MutationSchedule sched =
      MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip 0\n");
  std::vector<TTFunctional> suite = {
      identity_functional(), constant_functional(BitPattern::parse("+0")),
      project_even(), make_phi_a(sched).tt()};
  for (const auto& phi : suite) {
    for (size_t k = 0; k <= 6; ++k) {
      Dyadic sum;
      for (uint64_t v = 0; v < (uint64_t{1} << k); ++v) {
        sum += induced_measure_pruned(phi, BitString::from_index(v, k));
      }
      CHECK(sum == Dyadic::one());
    }
    for (uint64_t v = 0; v < (1u << 5); ++v) {
      BitString sigma = BitString::from_index(v, 5);
      CHECK(induced_measure_pruned(phi, sigma) ==
            induced_measure_pruned(phi, sigma.extended(0)) +
                induced_measure_pruned(phi, sigma.extended(1)));
    }
  }
}

TEST_CASE("random truth tables agree with direct preimage counting") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    size_t depth = 4 + rng() % 4;  // <= 7
    std::map<BitString, BitString> table;
    TTFunctional phi = random_table(rng, depth, &table);
    auto verify = tt_verify(phi, depth);
    CHECK(verify.pass());
    for (int i = 0; i < 10; ++i) {
      size_t use_cap = phi.use_bound(1);
      (void)use_cap;
      size_t len = rng() % 3;
      BitString sigma = BitString::from_index(rng() & ((1u << len) - 1), len);
      size_t u = phi.use_bound(sigma.size());
      // independent counting straight off the table
      uint64_t count = 0;
      for (uint64_t v = 0; v < (uint64_t{1} << u); ++v) {
        if (sigma.is_prefix_of(table[BitString::from_index(v, u)])) ++count;
      }
      CHECK(induced_measure_full(phi, sigma) ==
            Dyadic(BigInt(count), static_cast<unsigned>(u)));
    }
  }
}

TEST_CASE("tt_verify verdicts") {
  CHECK(tt_verify(identity_functional(), 6).pass());
  CHECK(tt_verify(project_even(), 6).pass());

  TTFunctional flipper(
      "flipper",
      [](const BitString& rho) {
        return rho.size() < 2 ? BitString{"0"} : BitString{"1"};
      },
      [](size_t n) { return n; });
  auto rep = tt_verify(flipper, 4);
  CHECK(!rep.pass());
  CHECK(!rep.monotone_ok);

  TTFunctional lazy(
      "lazy", [](const BitString&) { return BitString(); },
      [](size_t n) { return n; });
  auto rep2 = tt_verify(lazy, 4);
  CHECK(!rep2.use_bound_ok);

  TTFunctional shrinking_use(
      "shrinking-use", [](const BitString& rho) { return rho; },
      [](size_t n) { return n > 2 ? 1 : n; });
  CHECK(!tt_verify(shrinking_use, 4).use_nondecreasing);

  MutationSchedule sched =
      MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip 0\n");
  CHECK(tt_verify(make_phi_a(sched).tt(), 10).pass());
  CHECK(tt_verify(make_psi(sched).tt(), 10).pass());
}

TEST_CASE("composition") {
  TTFunctional twice = compose(project_even(), project_even());
  // (project . project)(X)(n) = X(4n)
  CHECK(twice.use_bound(1) == 4);
  CHECK(tt_apply(twice, BitString{"10000000"}) == BitString{"10"});
  CHECK(tt_verify(twice, 8).pass());
}

TEST_CASE("table file parsing") {
  const char* text =
      "use: 1 2\n"
      "table:\n"
      "e -> e\n"
      "0 -> 1\n"
      "1 -> 0\n"
      "00 -> 11\n"
      "01 -> 10\n"
      "10 -> 01\n"
      "11 -> 00\n";
  TTFunctional phi = parse_functional_file("negate", text);
  CHECK(tt_apply(phi, BitString{"01"}) == BitString{"10"});
  CHECK(phi.use_bound(2) == 2);
  CHECK(phi.use_bound(4) == 4);  // extrapolated
  CHECK(tt_verify(phi, 2).pass());
  CHECK(induced_measure_full(phi, BitString{"1"}) == Dyadic::parse("1/2"));
  CHECK_THROWS_AS(parse_functional_file("bad", "table:\n0 oops 1\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_functional_file("bad", "use: 3 2\ntable:\n"),
                  ParseError);
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(induced_measure_full(project_even(), BitString::zeros(20), 24),
                  GuardError);
  CHECK_THROWS_AS(tt_verify(identity_functional(), 40), GuardError);
}
