#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cantor/bits.hpp"
#include "cantor/dyadic.hpp"
#include "cantor/measure.hpp"
#include "cantor/schedule.hpp"

namespace cantor {

/// Stage-wise test: component i enumerated as a growing union of cylinders,
/// stage(i, s) = generators added at stages <= s. The declared kind (ML /
/// Schnorr / generalized) is a claim that check_bound audits, never assumes.
class StagedTest {
 public:
  enum class Kind { ML, Schnorr, Generalized };

  // Line-oriented format; "i s: sigma1 sigma2 ..." adds generators at stage
  // s of component i. Omitted (i,s) pairs inherit prior stages. Optional
  // header lines "kind: ml|schnorr|generalized" and "horizon: N|open".
  static StagedTest parse(std::string_view text);

  static StagedTest make(Kind kind, std::optional<uint64_t> horizon,
                         std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>>
                             additions,
                         std::string name = "test");

  // Builtins used across the suite.
  // U_{i,s} = [[0^i]] at every stage.
  static StagedTest zeros(uint64_t components);
  // Component n empty until stage n+1, then [[0^{n+1}]] (so the containment
  //  certificate needs k = n+1 < s, first certifiable at s = n+2).
  static StagedTest zeros_late(uint64_t components);
  // U_{i,s} = [[0^{i-1}]] for i >= 1: violates the ML bound everywhere.
  static StagedTest inflated(uint64_t components);
  // Component i adds [[0^i 1 0^j]] at stage j+1: mass 2^{-i}(1 - 2^{-s})
  // rising to the Schnorr target.
  static StagedTest geometric(uint64_t components, uint64_t stages);

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  std::optional<uint64_t> horizon() const { return horizon_; }
  uint64_t max_component() const;

  CylinderSet stage(uint64_t i, uint64_t s) const;

 private:
  std::string name_ = "test";
  Kind kind_ = Kind::ML;
  std::optional<uint64_t> horizon_;
  // component -> additions (stage, generator), sorted by stage
  std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> additions_;
};

struct BoundVerdict {
  uint64_t i = 0;
  uint64_t s = 0;
  Dyadic mass;
  Dyadic bound;    // 2^{-i}
  bool pass = true;
  Dyadic gap;      // Schnorr: bound - mass (>= 0 when pass)
};

struct BoundReport {
  StagedTest::Kind kind = StagedTest::Kind::ML;
  std::vector<BoundVerdict> verdicts;     // ML/Schnorr: per stage s' <= s
  std::vector<Dyadic> tail_masses;        // generalized: mu(U_{i', s}) for i' <= i
  bool nonincreasing = true;              // generalized
  bool below_target = true;               // generalized: last mass <= target
  Dyadic target;
  bool pass = true;
  std::string to_text() const;
};

// Audits the declared bound of `test` under mu at component i, stage s.
// ML: mass <= 2^{-i} at every stage s' <= s. Schnorr: additionally reports
// the gap trend. Generalized: masses for components 0..i at stage s must be
// nonincreasing and end below `target` (default 2^{-i}).
BoundReport check_bound(const StagedTest& test, const MeasureOracle& mu,
                        uint64_t i, uint64_t s, unsigned precision = 16,
                        std::optional<Dyadic> target = std::nullopt);

// Least stage s <= budget at which some prefix cylinder of X is contained in
// stage(n, s); Unknown(budget) otherwise. Monotone in budget.
TallyValue capture_stage(const StagedTest& test, const BitPattern& x,
                         uint64_t n, uint64_t budget);

struct CoverageReport {
  bool pass = true;
  std::vector<std::string> violations;
  std::string to_text() const;
};

// Coverage monotonicity: every generator of stage(i,s) is covered by a
// prefix-or-equal generator in stage(i,s') for s < s'.
CoverageReport audit_coverage_monotone(const StagedTest& test,
                                       uint64_t components, uint64_t stages);

}  // namespace cantor
