#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cantor/bits.hpp"

namespace cantor {

/// Value of a tally search: the least matching stage, a certified "no stage
/// ever matches", or a budget-truncated open search.
struct TallyValue {
  enum class Kind { Finite, Infinite, Unknown };

  Kind kind = Kind::Unknown;
  uint64_t value = 0;  // stage for Finite, exhausted budget for Unknown

  static TallyValue finite(uint64_t s) { return {Kind::Finite, s}; }
  static TallyValue infinite() { return {Kind::Infinite, 0}; }
  static TallyValue unknown(uint64_t budget) { return {Kind::Unknown, budget}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_infinite() const { return kind == Kind::Infinite; }
  bool is_unknown() const { return kind == Kind::Unknown; }

  bool operator==(const TallyValue&) const = default;
  std::string render() const;
};

struct MutationEvent {
  uint64_t stage = 0;            // declared stage number, >= 1
  std::vector<size_t> flips;     // nonempty, sorted 0-based bit positions
};

/// Finite-change approximation (A_s)_{s<=T}: an eventually periodic base
/// A_0 mutated by finitely many bit-flip events. The limit A is A_T.
/// Immutable after construction; all queries are pure.
class MutationSchedule {
 public:
  MutationSchedule(BitPattern base, std::vector<MutationEvent> events);

  // Line-oriented format:
  //   schedule
  //   base: +0
  //   stage 1: flip 0
  //   stage 2: flip 3 5
  // Stage numbers are strictly increasing; flips are 0-based positions.
  static MutationSchedule parse(std::string_view text);

  uint64_t horizon() const { return horizon_; }  // T
  const BitPattern& base() const { return approximants_.front(); }
  const BitPattern& approximant(uint64_t s) const;  // A_s, s <= T
  const BitPattern& limit() const { return approximants_.back(); }
  const std::vector<MutationEvent>& events() const { return events_; }
  size_t max_flip_position() const { return max_flip_; }

  // Least n separating every pair of distinct approximant sequences
  // (0 when all stages coincide). Every A_s agrees with A_s' on a prefix of
  // this length only if they are equal as sequences.
  size_t separation_depth() const { return separation_depth_; }

  std::string render() const;

 private:
  std::vector<MutationEvent> events_;
  std::vector<BitPattern> approximants_;  // index = stage
  uint64_t horizon_ = 0;
  size_t max_flip_ = 0;
  size_t separation_depth_ = 0;
};

// theta(X, n): least s <= T with X|n = A_s|n, else Infinite (the stage set
// is finite, so Infinite is certified). Throws DomainError when the string
// form is shorter than n.
TallyValue theta(const MutationSchedule& sched, const BitString& x, size_t n);
TallyValue theta(const MutationSchedule& sched, const BitPattern& x, size_t n);

/// classify_input verdicts.
struct CaseLabel {
  enum class Kind {
    StageMatch,  // X = A_s for some s < T: theta is eventually constant
    OffSchedule, // X differs from every A_s: theta hits a certified Infinite
    LimitMatch,  // X = A_T, the schedule's limit
  };
  Kind kind;
  uint64_t stage = 0;       // StageMatch: least s with X = A_s
  size_t point = 0;         // StageMatch: least n from which theta is constant
                            // OffSchedule: least n with theta = Infinite
  std::string render() const;
};

// Requires X eventually periodic so equality against each A_s is decidable.
CaseLabel classify_input(const MutationSchedule& sched, const BitPattern& x);

}  // namespace cantor
