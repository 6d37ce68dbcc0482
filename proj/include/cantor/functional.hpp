#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cantor/bits.hpp"
#include "cantor/dyadic.hpp"
#include "cantor/exec.hpp"
#include "cantor/measure.hpp"

namespace cantor {

constexpr size_t kDefaultGuardBits = 24;

/// Truth-table functional: a monotone prefix-to-prefix map together with an
/// explicit use bound making totality effective. use_bound(n) is an input
/// length guaranteeing n output bits.
///
/// step must be pure in the input prefix; induced-measure kernels evaluate
/// it concurrently.
class TTFunctional {
 public:
  using StepFn = std::function<BitString(const BitString&)>;
  using UseFn = std::function<size_t(size_t)>;

  TTFunctional() = default;
  TTFunctional(std::string name, StepFn step, UseFn use);

  const std::string& name() const { return name_; }
  BitString step(const BitString& rho) const;
  size_t use_bound(size_t n) const;

 private:
  std::string name_;
  std::shared_ptr<const StepFn> step_;
  std::shared_ptr<const UseFn> use_;
};

// The longest output prefix determined by rho. Cross-checks the answer
// against cached shorter-prefix answers and throws DomainError when the
// functional is caught violating monotonicity.
BitString tt_apply(const TTFunctional& phi, const BitString& rho);

TTFunctional identity_functional();
TTFunctional constant_functional(const BitPattern& target);
// Phi(X)(n) = X(2n), use_bound(n) = 2n.
TTFunctional project_even();
// Apply `first`, then `then`: use(n) = first.use(then.use(n)).
TTFunctional compose(const TTFunctional& first, const TTFunctional& then);

// Explicit finite truth table. Text format, one entry per line:
//   use: <n0> <n1> ...        (use_bound values for n = 1,2,...; last repeats
//                              with the same increment)
//   table:
//   rho -> tau
// plus builtin names handled by parse_functional_spec.
TTFunctional table_functional(const std::string& name,
                              std::vector<std::pair<BitString, BitString>> rows,
                              std::vector<size_t> use_values);
TTFunctional parse_functional_file(const std::string& name,
                                   std::string_view text);

// lambda_Phi(sigma) by full preimage enumeration over {0,1}^u with
// u = use_bound(|sigma|): exactly |{rho : sigma <= step(rho)}| * 2^{-u}.
// Throws GuardError when u exceeds guard_bits.
Dyadic induced_measure_full(const TTFunctional& phi, const BitString& sigma,
                            size_t guard_bits = kDefaultGuardBits,
                            Exec exec = Exec::Parallel);

// Same value by pruned exploration of the input tree; must agree with the
// full enumeration bit for bit (tested). Useful when use bounds are large.
Dyadic induced_measure_pruned(const TTFunctional& phi, const BitString& sigma,
                              size_t guard_bits = kDefaultGuardBits);

// lambda_Phi packaged as an exact MeasureOracle.
MeasureOracle induced_measure_oracle(const TTFunctional& phi,
                                     size_t guard_bits = kDefaultGuardBits,
                                     Exec exec = Exec::Parallel);

struct TTVerifyReport {
  size_t depth = 0;
  size_t nodes_checked = 0;
  bool monotone_ok = true;
  bool use_bound_ok = true;
  bool use_nondecreasing = true;
  std::vector<std::string> violations;

  bool pass() const {
    return monotone_ok && use_bound_ok && use_nondecreasing;
  }
  std::string to_text() const;
};

// Validates the TTFunctional contract to `depth`: parent/child monotonicity
// on every node (which covers all prefix pairs by transitivity), the
// use-bound guarantee for every n with use_bound(n) <= depth, and that the
// use bound is nondecreasing.
TTVerifyReport tt_verify(const TTFunctional& phi, size_t depth,
                         Exec exec = Exec::Parallel);

}  // namespace cantor
