#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cantor/exec.hpp"

namespace cantor {

/// Finite lattice: validated partial order with total meet/join tables,
/// unique top and bottom, and the derived cover relation. Immutable after
/// construction.
class FiniteLattice {
 public:
  // File format:
  //   lattice <name>
  //   elements: 0 a b 1
  //   covers: 0<a 0<b a<1 b<1
  // Relation pairs generate the order; redundant pairs are fine. Rejects
  // non-posets, posets without unique top/bottom, and posets where some
  // pair lacks a meet or join (with a witness pair).
  static FiniteLattice parse(std::string_view text);
  // leq[a][b] must already be reflexive-transitive-antisymmetric.
  static FiniteLattice from_order(std::string name,
                                  std::vector<std::string> element_names,
                                  std::vector<std::vector<bool>> leq);

  const std::string& name() const { return name_; }
  size_t size() const { return names_.size(); }
  const std::vector<std::string>& element_names() const { return names_; }
  const std::string& element_name(size_t a) const { return names_[a]; }
  std::optional<size_t> index_of(std::string_view name) const;

  bool leq(size_t a, size_t b) const { return leq_[a][b]; }
  size_t meet(size_t a, size_t b) const { return meet_[a][b]; }
  size_t join(size_t a, size_t b) const { return join_[a][b]; }
  size_t top() const { return top_; }
  size_t bottom() const { return bottom_; }
  const std::vector<size_t>& upper_covers(size_t a) const {
    return upper_covers_[a];
  }

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<size_t>> meet_, join_;
  std::vector<std::vector<size_t>> upper_covers_;
  size_t top_ = 0, bottom_ = 0;
};

struct DistributivityReport {
  bool distributive = true;
  // First violating triple (a,b,c) with a^(bvc) != (a^b)v(a^c).
  std::optional<std::array<size_t, 3>> witness_triple;
  // Five elements forming an M3 or N5 sublattice, when found.
  std::optional<std::array<size_t, 5>> sublattice;
  std::string sublattice_kind;  // "M3" / "N5" / ""
  bool methods_agree = true;
  std::string to_text(const FiniteLattice& l) const;
};

// Distributivity checked two independent ways (triple identity and M3/N5
// sublattice scan); the report records both and whether they agree.
DistributivityReport check_distributive(const FiniteLattice& l,
                                        Exec exec = Exec::Parallel);

// level[top] = 1; level(a) = 1 + max level of upper covers. Verifies
// gradedness (every upper cover one level up) and throws DomainError with a
// witness when it fails.
std::vector<unsigned> compute_levels(const FiniteLattice& l);

struct MeetClassification {
  // Valid for non-top elements; top is excluded by convention.
  std::vector<bool> meet_irreducible;
};

// Classifies each non-top element, computed definitionally (some a,b > c
// with a^b = c) and via the upper-cover count; throws DomainError if the
// two methods ever disagree (internal bug detector).
MeetClassification classify_meet_irreducible(const FiniteLattice& l);

/// A term of the construction: one basic sequence or a join of them.
struct SequenceTerm {
  std::vector<unsigned> basics;  // sorted, deduplicated; join iff size >= 2

  bool is_basic() const { return basics.size() == 1; }
  std::string render() const;  // "A0", "A0+A2"
  auto operator<=>(const SequenceTerm&) const = default;
};

/// The set-system assignment element -> set of terms, with the bookkeeping
/// the profile argument needs.
struct SetSystem {
  std::vector<std::vector<SequenceTerm>> assignment;  // per element, sorted
  std::vector<size_t> origin;  // basic index -> element where it first appears
  std::vector<unsigned> level_two_basics;
  std::vector<unsigned> meet_irreducible_basics;
  unsigned basic_count = 0;

  const std::vector<SequenceTerm>& terms_of(size_t element) const {
    return assignment[element];
  }
  // Sorted "element: {A0, A0+A2}" lines.
  std::string render(const FiniteLattice& l) const;
};

// Runs the level-by-level construction. Requires a distributive graded
// lattice (gated internally). Meet-reducible elements take the union over
// all upper covers, asserting pairwise-union consistency; meet-irreducible
// elements extend their unique cover's set with a fresh term.
SetSystem build_set_system(const FiniteLattice& l);

struct IsoReport {
  size_t pairs_checked = 0;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
  std::string to_text() const;
};

// For all pairs: a <= b iff S_a >= S_b; S_{a^b} = S_a u S_b;
// S_{avb} = S_a n S_b; and all assigned sets are distinct.
IsoReport verify_set_system_iso(const FiniteLattice& l, const SetSystem& s,
                                Exec exec = Exec::Parallel);

struct LRProfile {
  std::vector<unsigned> j;      // still-random level-two basics
  std::vector<unsigned> k;      // still-random meet-irreducible basics
  std::vector<unsigned> k_hat;  // k minus the join-poisoned indices
  size_t element = 0;
  std::vector<SequenceTerm> profile;
};

struct ProfileReport {
  std::vector<LRProfile> profiles;  // in (J,K) bitmask order
  bool totality = true;
  bool surjectivity = true;
  bool monotonicity = true;
  bool empty_j_rule = true;
  std::vector<std::string> violations;
  size_t realized_count = 0;  // distinct profile sets

  bool pass() const {
    return totality && surjectivity && monotonicity && empty_j_rule;
  }
  std::string to_csv(const FiniteLattice& l) const;
};

// Enumerates every (J, K) over the level-two / meet-irreducible basics,
// computes K-hat and the profile element, and checks totality,
// surjectivity, monotonicity and the J = empty collapse.
ProfileReport lr_profiles(const FiniteLattice& l, const SetSystem& s,
                          Exec exec = Exec::Parallel,
                          unsigned basics_guard = 20);

// Machine-readable recipe (JSON): the k terms assigned to the bottom
// element, the uniform weight 1/k with its dyadic-approximation note, and
// per-term schedule placeholders with the interleaving plan for joins.
std::string emit_measure_recipe(const FiniteLattice& l, const SetSystem& s);

}  // namespace cantor
