#include "cantor/functional.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor {

TTFunctional::TTFunctional(std::string name, StepFn step, UseFn use)
    : name_(std::move(name)),
      step_(std::make_shared<const StepFn>(std::move(step))),
      use_(std::make_shared<const UseFn>(std::move(use))) {}

BitString TTFunctional::step(const BitString& rho) const {
  if (!step_) throw DomainError("empty functional");
  return (*step_)(rho);
}

size_t TTFunctional::use_bound(size_t n) const {
  if (!use_) throw DomainError("empty functional");
  return (*use_)(n);
}

BitString tt_apply(const TTFunctional& phi, const BitString& rho) {
  BitString out = phi.step(rho);
  // Spot-check monotonicity against shorter prefixes of the same input.
  for (size_t cut : {rho.size() / 2, rho.size() == 0 ? 0 : rho.size() - 1}) {
    if (cut >= rho.size()) continue;
    BitString shorter = phi.step(rho.prefix(cut));
    if (!shorter.is_prefix_of(out)) {
      throw DomainError("functional '" + phi.name() +
                        "' violates monotonicity at input " + rho.str() +
                        " (cut " + std::to_string(cut) + ")");
    }
  }
  return out;
}

TTFunctional identity_functional() {
  return TTFunctional(
      "identity", [](const BitString& rho) { return rho; },
      [](size_t n) { return n; });
}

TTFunctional constant_functional(const BitPattern& target) {
  return TTFunctional(
      "constant:" + target.render(),
      [target](const BitString& rho) { return target.first(rho.size()); },
      [](size_t n) { return n; });
}

TTFunctional project_even() {
  return TTFunctional(
      "project-even",
      [](const BitString& rho) {
        BitString out;
        for (size_t i = 0; 2 * i < rho.size(); ++i) out.push_back(rho.bit(2 * i));
        return out;
      },
      [](size_t n) { return 2 * n; });
}

TTFunctional compose(const TTFunctional& first, const TTFunctional& then) {
  std::string name = then.name() + "(" + first.name() + ")";
  return TTFunctional(
      name,
      [first, then](const BitString& rho) { return then.step(first.step(rho)); },
      [first, then](size_t n) { return first.use_bound(then.use_bound(n)); });
}

TTFunctional table_functional(
    const std::string& name,
    std::vector<std::pair<BitString, BitString>> rows,
    std::vector<size_t> use_values) {
  if (use_values.empty()) throw ParseError("table functional needs a use line");
  for (size_t i = 1; i < use_values.size(); ++i) {
    if (use_values[i] < use_values[i - 1]) {
      throw ParseError("declared use bound must be nondecreasing");
    }
  }
  auto table = std::make_shared<std::map<BitString, BitString>>();
  for (auto& [rho, tau] : rows) (*table)[rho] = tau;
  auto use = [use_values](size_t n) -> size_t {
    if (n == 0) return 0;
    if (n <= use_values.size()) return use_values[n - 1];
    // Extrapolate with the last increment so the bound stays total.
    size_t last = use_values.back();
    size_t step = use_values.size() >= 2
                      ? use_values.back() - use_values[use_values.size() - 2]
                      : std::max<size_t>(use_values.back(), 1);
    return last + step * (n - use_values.size());
  };
  auto step = [table](const BitString& rho) {
    // Longest committed output: the table answer for the longest listed
    // prefix of rho.
    BitString best;
    for (size_t len = 0; len <= rho.size(); ++len) {
      auto it = table->find(rho.prefix(len));
      if (it != table->end()) best = it->second;
    }
    return best;
  };
  return TTFunctional(name, std::move(step), std::move(use));
}

TTFunctional parse_functional_file(const std::string& name,
                                   std::string_view text) {
  std::vector<std::pair<BitString, BitString>> rows;
  std::vector<size_t> use_values;
  std::istringstream in{std::string(text)};
  std::string line;
  bool in_table = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "use:") {
      size_t v;
      while (ls >> v) use_values.push_back(v);
      continue;
    }
    if (tok == "table:") {
      in_table = true;
      continue;
    }
    if (!in_table) throw ParseError("unexpected token '" + tok + "'");
    std::string arrow, tau;
    if (!(ls >> arrow) || arrow != "->" || !(ls >> tau)) {
      throw ParseError("table rows look like 'rho -> tau', got '" + line + "'");
    }
    rows.emplace_back(tok == "e" ? BitString() : BitString(tok),
                      tau == "e" ? BitString() : BitString(tau));
  }
  return table_functional(name, std::move(rows), std::move(use_values));
}

namespace {

size_t checked_use(const TTFunctional& phi, size_t n, size_t guard_bits) {
  size_t u = phi.use_bound(n);
  if (u > guard_bits) {
    throw GuardError("use bound " + std::to_string(u) + " for " +
                     std::to_string(n) + " output bits exceeds guard " +
                     std::to_string(guard_bits) + " (raise --guard-bits)");
  }
  return u;
}

}  // namespace

Dyadic induced_measure_full(const TTFunctional& phi, const BitString& sigma,
                            size_t guard_bits, Exec exec) {
  size_t u = checked_use(phi, sigma.size(), guard_bits);
  uint64_t total = uint64_t{1} << u;
  uint64_t count = 0;
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(+ : count) schedule(static)
    for (long long v = 0; v < static_cast<long long>(total); ++v) {
      BitString rho = BitString::from_index(static_cast<uint64_t>(v), u);
      if (sigma.is_prefix_of(phi.step(rho))) ++count;
    }
  } else {
    for (uint64_t v = 0; v < total; ++v) {
      BitString rho = BitString::from_index(v, u);
      if (sigma.is_prefix_of(phi.step(rho))) ++count;
    }
  }
  return Dyadic(BigInt(count), static_cast<unsigned>(u));
}

namespace {

Dyadic pruned_walk(const TTFunctional& phi, const BitString& sigma,
                   const BitString& rho, size_t max_depth) {
  BitString out = phi.step(rho);
  if (sigma.is_prefix_of(out)) {
    return Dyadic::pow2_neg(static_cast<unsigned>(rho.size()));
  }
  if (!out.is_prefix_of(sigma)) return Dyadic::zero();
  if (rho.size() >= max_depth) {
    throw GuardError("pruned preimage walk exceeded depth " +
                     std::to_string(max_depth));
  }
  return pruned_walk(phi, sigma, rho.extended(0), max_depth) +
         pruned_walk(phi, sigma, rho.extended(1), max_depth);
}

}  // namespace

Dyadic induced_measure_pruned(const TTFunctional& phi, const BitString& sigma,
                              size_t guard_bits) {
  // By |rho| = use_bound(|sigma|) every branch has resolved, so the walk
  // never needs to go deeper than the full enumeration would.
  size_t u = checked_use(phi, sigma.size(), guard_bits);
  return pruned_walk(phi, sigma, BitString(), u);
}

MeasureOracle induced_measure_oracle(const TTFunctional& phi,
                                     size_t guard_bits, Exec exec) {
  return MeasureOracle(
      "induced:" + phi.name(),
      [phi, guard_bits, exec](const BitString& sigma, unsigned) {
        return induced_measure_full(phi, sigma, guard_bits, exec);
      },
      /*exact=*/true);
}

std::string TTVerifyReport::to_text() const {
  std::ostringstream os;
  os << "tt-verify depth=" << depth << " nodes=" << nodes_checked
     << " monotone=" << (monotone_ok ? "ok" : "VIOLATED")
     << " use-bound=" << (use_bound_ok ? "ok" : "VIOLATED")
     << " use-nondecreasing=" << (use_nondecreasing ? "ok" : "VIOLATED")
     << "\n";
  for (const auto& v : violations) os << v << "\n";
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

TTVerifyReport tt_verify(const TTFunctional& phi, size_t depth, Exec exec) {
  if (depth > kDefaultGuardBits) {
    throw GuardError("tt_verify guarded at depth " +
                     std::to_string(kDefaultGuardBits));
  }
  TTVerifyReport rep;
  rep.depth = depth;

  for (size_t n = 1; n <= depth; ++n) {
    if (phi.use_bound(n) < phi.use_bound(n - 1)) {
      rep.use_nondecreasing = false;
      rep.violations.push_back("use_bound decreases at n=" + std::to_string(n));
    }
  }

  // Largest n whose use bound is within reach of a given input length.
  // Capped so that a bogus constant use bound cannot loop forever.
  auto guaranteed_bits = [&phi](size_t len) {
    size_t n = 0;
    while (n < 4096 && phi.use_bound(n + 1) <= len) ++n;
    return n;
  };
  std::vector<size_t> guarantee(depth + 1);
  for (size_t len = 0; len <= depth; ++len) guarantee[len] = guaranteed_bits(len);

  size_t total = (size_t{2} << depth) - 1;  // nodes of length 0..depth
  rep.nodes_checked = total;
  std::vector<std::string> slots(total);

  auto node_sigma = [](size_t idx) {
    size_t len = 0;
    size_t level_start = 0;
    while (level_start + (size_t{1} << len) <= idx) {
      level_start += size_t{1} << len;
      ++len;
    }
    return BitString::from_index(idx - level_start, len);
  };
  auto check_node = [&](size_t idx) {
    BitString rho = node_sigma(idx);
    BitString out = phi.step(rho);
    std::ostringstream bad;
    if (out.size() < guarantee[rho.size()]) {
      bad << "use-bound violation at " << rho << ": got " << out.size()
          << " bits, use bound promises " << guarantee[rho.size()] << "; ";
    }
    if (rho.size() < depth) {
      for (int b : {0, 1}) {
        if (!out.is_prefix_of(phi.step(rho.extended(b)))) {
          bad << "monotonicity violation at " << rho << " -> "
              << rho.extended(b) << "; ";
        }
      }
    }
    slots[idx] = bad.str();
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
      check_node(static_cast<size_t>(idx));
    }
  } else {
    for (size_t idx = 0; idx < total; ++idx) check_node(idx);
  }

  for (size_t idx = 0; idx < total; ++idx) {
    if (slots[idx].empty()) continue;
    if (slots[idx].find("monotonicity") != std::string::npos) {
      rep.monotone_ok = false;
    }
    if (slots[idx].find("use-bound") != std::string::npos) {
      rep.use_bound_ok = false;
    }
    rep.violations.push_back(slots[idx]);
  }
  return rep;
}

}  // namespace cantor
