#include <doctest.h>

#include <random>

#include "cantor/functional.hpp"
#include "cantor/lattice.hpp"
#include "cantor/measure.hpp"
#include "cantor/schedule.hpp"
#include "cantor/tally.hpp"

#include "../support/generators.hpp"

// The OpenMP kernels must produce the same bytes as their serial reference
// twins, whatever the thread count.

using namespace cantor;

TEST_CASE("preimage counting") {
  std::mt19937_64 rng(113);
  MutationSchedule sched = testgen::random_schedule(rng, 3, 5);
  std::vector<TTFunctional> suite = {identity_functional(), project_even(),
                                     make_phi_a(sched).tt()};
  for (const auto& phi : suite) {
    for (int i = 0; i < 25; ++i) {
      size_t len = rng() % 9;
      BitString sigma =
          BitString::from_index(rng() & ((uint64_t{1} << len) - 1), len);
      CHECK(induced_measure_full(phi, sigma, 24, Exec::Serial) ==
            induced_measure_full(phi, sigma, 24, Exec::Parallel));
    }
  }
}

TEST_CASE("additivity audit reports") {
  MutationSchedule sched =
      MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip 0\n");
  auto tally = tally_measure_oracle(sched, TallyFunctional::Mode::Phi);
  for (const auto& mu : {lebesgue_measure(), tally}) {
    auto a = check_additivity(mu, 7, 12, Exec::Serial);
    auto b = check_additivity(mu, 7, 12, Exec::Parallel);
    CHECK(a.to_text() == b.to_text());
  }
}

TEST_CASE("atom scans") {
  MutationSchedule sched =
      MutationSchedule::parse("schedule\nbase: +0\nstage 1: flip 0\n");
  auto tally = tally_measure_oracle(sched, TallyFunctional::Mode::Phi);
  auto a = atom_candidates(tally, 8, Dyadic::parse("1/32"), Exec::Serial);
  auto b = atom_candidates(tally, 8, Dyadic::parse("1/32"), Exec::Parallel);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sigma == b[i].sigma);
    CHECK(a[i].mass == b[i].mass);
  }
}

TEST_CASE("functional contract audits") {
  std::mt19937_64 rng(127);
  MutationSchedule sched = testgen::random_schedule(rng, 4, 6);
  for (const auto& phi : {project_even(), make_psi(sched).tt()}) {
    CHECK(tt_verify(phi, 8, Exec::Serial).to_text() ==
          tt_verify(phi, 8, Exec::Parallel).to_text());
  }
}

TEST_CASE("lattice kernels") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 10; ++trial) {
    auto maybe = testgen::try_random_lattice(rng, 2 + rng() % 5, "r");
    if (!maybe) continue;
    auto a = check_distributive(*maybe, Exec::Serial);
    auto b = check_distributive(*maybe, Exec::Parallel);
    CHECK(a.to_text(*maybe) == b.to_text(*maybe));
  }
  for (int trial = 0; trial < 6; ++trial) {
    auto poset = testgen::random_poset(rng, 4, 0.35);
    FiniteLattice l = testgen::downset_lattice(poset, "p");
    SetSystem s = build_set_system(l);
    CHECK(verify_set_system_iso(l, s, Exec::Serial).to_text() ==
          verify_set_system_iso(l, s, Exec::Parallel).to_text());
    CHECK(lr_profiles(l, s, Exec::Serial).to_csv(l) ==
          lr_profiles(l, s, Exec::Parallel).to_csv(l));
  }
}
