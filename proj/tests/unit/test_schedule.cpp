#include <doctest.h>

#include <random>

#include "cantor/error.hpp"
#include "cantor/schedule.hpp"

#include "../support/generators.hpp"

using namespace cantor;

namespace {

MutationSchedule one_event() {
  return MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip 0\n");
}

MutationSchedule two_events() {
  return MutationSchedule::parse(
      "schedule\nbase: +0\nstage 1: flip 0\nstage 2: flip 3 5\n");
}

}  // namespace

TEST_CASE("schedule parsing and approximants") {
  MutationSchedule s = two_events();
  CHECK(s.horizon() == 2);
  CHECK(s.approximant(0) == BitPattern::parse("+0"));
  CHECK(s.approximant(1) == BitPattern::parse("1+0"));
  CHECK(s.approximant(2).first(7) == BitString{"1001010"});
  CHECK(s.limit() == s.approximant(2));
  CHECK(s.max_flip_position() == 5);
  CHECK_THROWS_AS(s.approximant(3), DomainError);

  CHECK_THROWS_AS(MutationSchedule::parse("base: +0\n"), ParseError);
  CHECK_THROWS_AS(MutationSchedule::parse("schedule\n"), ParseError);
  CHECK_THROWS_AS(
      MutationSchedule::parse("schedule\nbase: +0\nstage 0: flip 1\n"),
      ParseError);
  CHECK_THROWS_AS(
      MutationSchedule::parse(
          "schedule\nbase: +0\nstage 2: flip 1\nstage 1: flip 0\n"),
      ParseError);
  CHECK_THROWS_AS(
      MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip\n"),
      ParseError);
  // stages may skip numbers; the un-evented stage repeats its predecessor
  MutationSchedule gap = MutationSchedule::parse(
      "schedule\nbase: +0\nstage 1: flip 0\nstage 3: flip 1\n");
  CHECK(gap.horizon() == 3);
  CHECK(gap.approximant(1) == gap.approximant(2));
}

TEST_CASE("theta stage search") {
  MutationSchedule s = one_event();
  CHECK(theta(s, BitPattern::parse("1+0"), 1) == TallyValue::finite(1));
  for (size_t n : {0u, 1u, 3u, 8u}) {
    CHECK(theta(s, BitPattern::parse("+0"), n) == TallyValue::finite(0));
  }
  CHECK(theta(s, BitPattern::parse("01+0"), 2) == TallyValue::infinite());
  CHECK(theta(s, BitString{"01"}, 2) == TallyValue::infinite());
  CHECK_THROWS_AS(theta(s, BitString{"0"}, 2), DomainError);
  // theta(X, 0) is always 0: the empty prefix matches stage 0
  CHECK(theta(s, BitPattern::parse("+1"), 0) == TallyValue::finite(0));
}

TEST_CASE("classify_input three cases") {
  MutationSchedule s = two_events();
  // an intermediate stage: theta settles at that stage index
  CaseLabel c1 = classify_input(s, s.approximant(1));
  CHECK(c1.kind == CaseLabel::Kind::StageMatch);
  CHECK(c1.stage == 1);
  CHECK(c1.point == 1);

  CaseLabel c2 = classify_input(s, BitPattern::parse("01+0"));
  CHECK(c2.kind == CaseLabel::Kind::OffSchedule);
  CHECK(c2.point == 2);

  CaseLabel c3 = classify_input(s, s.limit());
  CHECK(c3.kind == CaseLabel::Kind::LimitMatch);

  // the base of a one-event schedule settles immediately
  CaseLabel c0 = classify_input(one_event(), BitPattern::parse("+0"));
  CHECK(c0.kind == CaseLabel::Kind::StageMatch);
  CHECK(c0.stage == 0);
  CHECK(c0.point == 0);

  // cancelling flips: the limit equals the base; the limit reading wins
  MutationSchedule cancel = MutationSchedule::parse(
      "schedule\nbase: +0\nstage 1: flip 0\nstage 2: flip 0\n");
  CHECK(classify_input(cancel, BitPattern::parse("+0")).kind ==
        CaseLabel::Kind::LimitMatch);
}

TEST_CASE("stage-match inputs have eventually constant theta") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    MutationSchedule s = testgen::random_schedule(rng, 4, 6);
    for (uint64_t st = 0; st < s.horizon(); ++st) {
      CaseLabel c = classify_input(s, s.approximant(st));
      if (c.kind != CaseLabel::Kind::StageMatch) {
        // a stage equal to the limit classifies as the limit
        CHECK(s.approximant(st) == s.limit());
        continue;
      }
      size_t check_to = c.point + s.max_flip_position() + 8;
      TallyValue settled = theta(s, s.approximant(st), c.point);
      CHECK(settled == TallyValue::finite(c.stage));
      for (size_t n = c.point; n <= check_to; ++n) {
        CHECK(theta(s, s.approximant(st), n) == settled);
      }
      if (c.point > 0) {
        CHECK(theta(s, s.approximant(st), c.point - 1) != settled);
      }
    }
  }
}

TEST_CASE("off-schedule inputs get a certified infinite with monotone refutation") {
  std::mt19937_64 rng(43);
  int found = 0;
  for (int trial = 0; trial < 400; ++trial) {
    MutationSchedule s = testgen::random_schedule(rng, 4, 6);
    BitPattern x = testgen::random_pattern(rng, 4, 3);
    CaseLabel c = classify_input(s, x);
    if (c.kind != CaseLabel::Kind::OffSchedule) continue;
    ++found;
    CHECK(c.point <= s.max_flip_position() + 1 +
                         std::max(s.base().prefix().size() +
                                      s.base().tail().size(),
                                  x.prefix().size() + x.tail().size()) +
                         8);
    CHECK(theta(s, x, c.point) == TallyValue::infinite());
    if (c.point > 0) CHECK(theta(s, x, c.point - 1) != TallyValue::infinite());
    for (size_t n = c.point; n <= c.point + 6; ++n) {
      CHECK(theta(s, x, n) == TallyValue::infinite());
    }
  }
  CHECK(found > 100);
}

TEST_CASE("limit theta equals last change stage and is nondecreasing") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    MutationSchedule s = testgen::random_schedule(rng, 4, 6);
    const BitPattern& limit = s.limit();
    uint64_t prev = 0;
    for (size_t n = 0; n <= s.max_flip_position() + 4; ++n) {
      TallyValue t = theta(s, limit, n);
      REQUIRE(t.is_finite());
      // nondecreasing in n
      CHECK(prev <= t.value);
      prev = t.value;
      // equals the least stage from which A_s agrees with the limit on n bits
      uint64_t expect = 0;
      for (uint64_t st = 0; st <= s.horizon(); ++st) {
        if (s.approximant(st).first(n) == limit.first(n)) {
          expect = st;
          break;
        }
      }
      CHECK(t.value == expect);
    }
  }
}

TEST_CASE("tally value rendering") {
  CHECK(TallyValue::finite(3).render() == "3");
  CHECK(TallyValue::infinite().render() == "inf");
  CHECK(TallyValue::unknown(64).render() == "unknown@64");
}
