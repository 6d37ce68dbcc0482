#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cantor/bits.hpp"
#include "cantor/dyadic.hpp"
#include "cantor/functional.hpp"
#include "cantor/measure.hpp"
#include "cantor/mltest.hpp"
#include "cantor/schedule.hpp"

namespace cantor {

enum class Tri { Holds, Fails, NeedMoreInput };

/// Decidable stage predicate Theta(X, n, s), evaluated on a finite input
/// prefix. Once decided on a prefix the verdict is stable under extension;
/// NeedMoreInput asks the driver for a longer prefix.
class ThetaPredicate {
 public:
  using EvalFn = std::function<Tri(const BitString&, uint64_t, uint64_t)>;
  // refutation_horizon(n): a stage H such that if Theta(X,n,s) fails for all
  // s <= H it fails for every s; nullopt when no such certificate exists
  // (open-ended searches can then only return Unknown, never Infinite).
  using HorizonFn = std::function<std::optional<uint64_t>(uint64_t)>;

  ThetaPredicate(std::string name, EvalFn eval, HorizonFn horizon);

  const std::string& name() const { return name_; }
  Tri eval(const BitString& prefix, uint64_t n, uint64_t s) const;
  std::optional<uint64_t> refutation_horizon(uint64_t n) const;

 private:
  std::string name_;
  std::shared_ptr<const EvalFn> eval_;
  std::shared_ptr<const HorizonFn> horizon_;
};

// Theta(X,n,s) holds iff X|n = A_s|n.
ThetaPredicate schedule_predicate(const MutationSchedule& sched);

/// Stage oracle for reduction-style predicates: Gamma_s(X)(k) converges
/// monotonically in s (once converged the value is fixed).
struct StageProbe {
  enum class State { Converged, Diverged, NeedMoreInput };
  State state = State::Diverged;
  int value = 0;
  static StageProbe converged(int v) { return {State::Converged, v}; }
  static StageProbe diverged() { return {State::Diverged, 0}; }
  static StageProbe need_more() { return {State::NeedMoreInput, 0}; }
};

class StageOracle {
 public:
  using Fn = std::function<StageProbe(const BitString&, uint64_t, uint64_t)>;
  // settle(k): stage by which position k's fate (converge or never) is
  // final; nullopt when unknown.
  using SettleFn = std::function<std::optional<uint64_t>(uint64_t)>;

  StageOracle(std::string name, Fn probe, SettleFn settle);
  const std::string& name() const { return name_; }
  StageProbe probe(const BitString& prefix, uint64_t k, uint64_t s) const;
  std::optional<uint64_t> settle_stage(uint64_t k) const;

 private:
  std::string name_;
  std::shared_ptr<const Fn> probe_;
  std::shared_ptr<const SettleFn> settle_;
};

// Gamma_s(X)(k) = X(k) once s > k (stage s has revealed positions below s).
StageOracle identity_read_oracle();
// Identity read except position `k` never converges.
StageOracle diverge_at_oracle(uint64_t k);

// Theta(X,n,s) holds iff every k < n has Gamma_s(X)(k) converged and equal
// to B_s(k). Rejects Gamma inconsistency (a converged value changing)
// with DomainError as the stages are scanned.
ThetaPredicate gamma_predicate(const StageOracle& gamma,
                               const MutationSchedule& b_sched);

// Theta(X,n,s) holds iff some k < s has [[X|k]] contained in stage(n,s).
// Staged tests are open-ended enumerations, so this predicate never
// certifies Infinite (capture facts only).
ThetaPredicate test_predicate(const StagedTest& test);

// theta(X, n) driven by a predicate: least s with Theta(X,n,s), scanning
// s <= budget; Infinite when every stage up to the refutation horizon
// failed; Unknown(budget) otherwise.
TallyValue theta_of(const ThetaPredicate& theta, const BitPattern& x,
                    uint64_t n, uint64_t budget);

/// Tally output: unary blocks and their rendering. Rendering follows
/// 1^{t_0} 0 1^{t_1} 0 ...; the first Infinite block is absorbing and fills
/// the rest of the requested length; Unknown stops rendering.
struct TallyOutput {
  std::vector<TallyValue> blocks;
  BitString rendered;
  bool hit_infinite = false;
  bool hit_unknown = false;
  std::string to_text() const;
};

TallyOutput tally_output(const ThetaPredicate& theta, const BitPattern& x,
                         size_t n_blocks, uint64_t budget, size_t render_len);

/// Tally functional compiled from a mutation schedule.
/// Phi mode: blocks 1^{theta(X,n)} separated by single 0s.
/// Psi mode: the joined input Z = X (+) Y (even bits drive theta, odd bits
/// fill) renders y_n^{theta(X,n)} 0 per block, an Infinite block yielding a
/// (y_n)^omega tail; with Y = 1^omega this reproduces Phi mode bit for bit.
class TallyFunctional {
 public:
  enum class Mode { Phi, Psi };

  TallyFunctional(MutationSchedule sched, Mode mode);

  Mode mode() const { return mode_; }
  const MutationSchedule& schedule() const { return sched_; }
  const TTFunctional& tt() const { return tt_; }

  // Longest output prefix committed by the finite input prefix, capped.
  BitString committed(const BitString& rho, size_t cap_bits) const;
  // When the input prefix already forces the whole output point (an
  // Infinite block with known fill), that point.
  std::optional<BitPattern> resolved_point(const BitString& rho) const;

  TallyOutput output(const BitPattern& input, size_t n_blocks,
                     size_t render_len) const;

 private:
  MutationSchedule sched_;
  Mode mode_;
  TTFunctional tt_;
};

TallyFunctional make_phi_a(const MutationSchedule& sched);
TallyFunctional make_psi(const MutationSchedule& sched);

/// Region decomposition of the induced measure at a finite depth.
/// Escape entries are certified atoms (a whole input cylinder maps onto one
/// eventually-constant point). Tracking entries carry the residual mass of
/// the still-tracking cylinder around a stage sequence; in phi mode their
/// pattern is the stage's (eventually periodic) output, in psi mode only
/// the committed output prefix is known. Masses always sum to exactly 1,
/// and for every sigma with |sigma| <= depth the entries reproduce
/// mu(sigma) exactly.
struct DecompositionEntry {
  enum class Kind { Escape, Tracking };
  Kind kind = Kind::Escape;
  std::optional<BitPattern> pattern;  // escape + phi tracking
  BitString committed;                // output prefix shared by the region
  Dyadic mass;
  uint64_t stage = 0;  // tracking: least matching stage
  std::string key() const;
};

struct AtomDecomposition {
  TallyFunctional::Mode mode = TallyFunctional::Mode::Phi;
  size_t depth = 0;  // effective depth (>= separation depth)
  std::vector<DecompositionEntry> entries;  // sorted by key
  Dyadic total() const;
  std::string to_text() const;  // sorted "pattern<TAB>mass" lines
};

AtomDecomposition tally_decomposition(const MutationSchedule& sched,
                                      TallyFunctional::Mode mode, size_t depth,
                                      size_t node_guard = size_t{1} << 22);

// The induced measure as an exact oracle (pruned preimage exploration,
// identical to full enumeration where both are feasible).
MeasureOracle tally_measure_oracle(const MutationSchedule& sched,
                                   TallyFunctional::Mode mode,
                                   size_t guard_bits = kDefaultGuardBits);

// Joined sequences and schedules (round-robin interleaving: position
// k*n + j holds component j's bit n).
BitPattern join_patterns(const std::vector<BitPattern>& parts);
BitPattern split_component(const BitPattern& joined, size_t arity, size_t j);
MutationSchedule join_schedules(const std::vector<MutationSchedule>& parts);

// Binds set-system terms (lists of basic indices) to per-basic schedules
// and returns the uniform mix of the induced tally measures.
MeasureOracle bind_term_measures(
    const std::vector<std::vector<unsigned>>& terms,
    const std::map<unsigned, MutationSchedule>& schedules,
    size_t guard_bits = kDefaultGuardBits);

}  // namespace cantor
