#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cantor/bits.hpp"
#include "cantor/dyadic.hpp"
#include "cantor/exec.hpp"

namespace cantor {

/// A computable measure given as an approximation procedure
/// (sigma, i) -> dyadic with |mu(sigma) - answer| <= 2^{-i}.
///
/// `exact` marks oracles whose answers are the true values for every i
/// (tt-induced measures, Lebesgue, point masses). The contract itself is
/// audited by check_additivity / the bound checks, never assumed.
///
/// Oracles must be safe for concurrent evaluation; the approximation
/// function is required to be pure in (sigma, i).
class MeasureOracle {
 public:
  using Fn = std::function<Dyadic(const BitString&, unsigned)>;

  MeasureOracle() = default;
  MeasureOracle(std::string name, Fn approx, bool exact);

  const std::string& name() const { return name_; }
  bool exact() const { return exact_; }

  // Raw oracle answer (may be slightly negative for inexact oracles).
  Dyadic eval_raw(const BitString& sigma, unsigned i) const;
  // Answer clamped at 0; `clamped`, when given, records that the clamp fired.
  Dyadic eval(const BitString& sigma, unsigned i, bool* clamped = nullptr) const;

 private:
  std::string name_;
  std::shared_ptr<const Fn> approx_;
  bool exact_ = false;
};

// lambda(sigma) = 2^{-|sigma|}
Dyadic lebesgue(const BitString& sigma);
MeasureOracle lebesgue_measure();

// Point mass at the sequence `atom`.
MeasureOracle point_mass(const BitPattern& atom);

// rho = alpha*mu + (1-alpha)*nu. alpha must be a dyadic in [0,1]; operands
// are queried at precision i+2 so the total error stays below 2^{-i}.
MeasureOracle convex_sum(const MeasureOracle& mu, const MeasureOracle& nu,
                         const Dyadic& alpha);

// (1/k) * sum of the parts. Exact when k is a power of two and all parts are
// exact; otherwise answers are rounded to 2^{-(i+1)} with operand precision
// i+2, keeping the total error below 2^{-i}.
MeasureOracle uniform_mix(std::vector<MeasureOracle> parts);

/// Finite union of cylinders, kept as a prefix-free antichain of generators.
class CylinderSet {
 public:
  CylinderSet() = default;
  // Sorts and drops generators that extend another one.
  static CylinderSet from_generators(std::vector<BitString> gens);

  const std::vector<BitString>& generators() const { return gens_; }
  bool empty() const { return gens_.empty(); }

  // [[sigma]] subset of this set, i.e. some generator is a prefix of sigma.
  bool contains_cylinder(const BitString& sigma) const;

  // Sum of generator measures. Exact oracles give exact values; for inexact
  // oracles the per-generator precision is raised so the sum is within
  // 2^{-i}.
  Dyadic measure(const MeasureOracle& mu, unsigned i) const;

 private:
  std::vector<BitString> gens_;
};

struct AdditivityEntry {
  BitString sigma;
  Dyadic deviation;  // |mu(sigma) - mu(sigma0) - mu(sigma1)| at the audit precision
};

struct AdditivityReport {
  unsigned depth = 0;
  unsigned precision = 0;
  bool exact_oracle = false;
  size_t nodes_checked = 0;
  Dyadic tolerance;       // 0 for exact oracles, 3*2^{-(i+2)} otherwise
  Dyadic max_deviation;
  std::vector<AdditivityEntry> flagged;  // depth-lex order

  bool pass() const { return flagged.empty(); }
  std::string to_text() const;
};

// Checks mu(sigma) = mu(sigma0) + mu(sigma1) for every |sigma| < depth.
// Violations are report entries, never exceptions.
AdditivityReport check_additivity(const MeasureOracle& mu, unsigned depth,
                                  unsigned i, Exec exec = Exec::Parallel);

struct AtomCandidate {
  BitString sigma;
  Dyadic mass;
};

// All sigma of length `depth` with mu(sigma) >= delta, with their masses,
// in lexicographic order. Exact oracles decide the threshold exactly; for
// inexact oracles the precision is pushed below delta/4 and a value landing
// in the undecidable band raises PrecisionError.
std::vector<AtomCandidate> atom_candidates(const MeasureOracle& mu,
                                           unsigned depth, const Dyadic& delta,
                                           Exec exec = Exec::Parallel);

// "sigma<TAB>value<TAB>precision" line.
std::string measure_report_line(const BitString& sigma, const Dyadic& value,
                                unsigned precision);

}  // namespace cantor
