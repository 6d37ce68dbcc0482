#include "cantor/measure.hpp"

#include <algorithm>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor {

MeasureOracle::MeasureOracle(std::string name, Fn approx, bool exact)
    : name_(std::move(name)),
      approx_(std::make_shared<const Fn>(std::move(approx))),
      exact_(exact) {}

Dyadic MeasureOracle::eval_raw(const BitString& sigma, unsigned i) const {
  if (!approx_) throw OracleError("empty measure oracle");
  return (*approx_)(sigma, i);
}

Dyadic MeasureOracle::eval(const BitString& sigma, unsigned i,
                           bool* clamped) const {
  Dyadic v = eval_raw(sigma, i);
  if (v.is_negative()) {
    if (clamped) *clamped = true;
    return Dyadic::zero();
  }
  if (clamped) *clamped = false;
  return v;
}

Dyadic lebesgue(const BitString& sigma) {
  return Dyadic::pow2_neg(static_cast<unsigned>(sigma.size()));
}

MeasureOracle lebesgue_measure() {
  return MeasureOracle(
      "lebesgue", [](const BitString& sigma, unsigned) { return lebesgue(sigma); },
      /*exact=*/true);
}

MeasureOracle point_mass(const BitPattern& atom) {
  return MeasureOracle(
      "point:" + atom.render(),
      [atom](const BitString& sigma, unsigned) {
        return atom.first(sigma.size()) == sigma ? Dyadic::one()
                                                 : Dyadic::zero();
      },
      /*exact=*/true);
}

MeasureOracle convex_sum(const MeasureOracle& mu, const MeasureOracle& nu,
                         const Dyadic& alpha) {
  if (alpha.is_negative() || Dyadic::one() < alpha) {
    throw DomainError("convex_sum weight must lie in [0,1], got " +
                      alpha.to_fraction());
  }
  Dyadic beta = Dyadic::one() - alpha;
  bool exact = mu.exact() && nu.exact();
  std::string name =
      "convex(" + alpha.to_fraction() + "," + mu.name() + "," + nu.name() + ")";
  return MeasureOracle(
      name,
      [mu, nu, alpha, beta](const BitString& sigma, unsigned i) {
        // alpha*2^{-(i+2)} + (1-alpha)*2^{-(i+2)} <= 2^{-(i+1)} < 2^{-i}
        return alpha * mu.eval_raw(sigma, i + 2) +
               beta * nu.eval_raw(sigma, i + 2);
      },
      exact);
}

MeasureOracle uniform_mix(std::vector<MeasureOracle> parts) {
  if (parts.empty()) throw DomainError("uniform_mix needs at least one part");
  size_t k = parts.size();
  bool k_dyadic = (k & (k - 1)) == 0;
  bool exact = k_dyadic;
  std::string name = "mix(";
  for (size_t j = 0; j < k; ++j) {
    if (!parts[j].exact()) exact = false;
    name += (j ? "," : "") + parts[j].name();
  }
  name += ")";
  auto shared = std::make_shared<std::vector<MeasureOracle>>(std::move(parts));
  return MeasureOracle(
      name,
      [shared, k, k_dyadic](const BitString& sigma, unsigned i) {
        Dyadic sum;
        for (const auto& part : *shared) sum += part.eval_raw(sigma, i + 2);
        if (k_dyadic) {
          Dyadic v = sum;
          for (size_t t = 1; t < k; t <<= 1) v = v.halved();
          return v;
        }
        // Round sum/k to the 2^{-(i+1)} grid. Rounding error < 2^{-(i+1)},
        // operand error <= 2^{-(i+2)}, total < 2^{-i}.
        Dyadic scaled = sum.times_pow2(static_cast<long>(i) + 1);
        BigInt q = scaled.numerator() / (BigInt(k) << scaled.exponent());
        return Dyadic(q, 0).times_pow2(-(static_cast<long>(i) + 1));
      },
      exact);
}

CylinderSet CylinderSet::from_generators(std::vector<BitString> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  CylinderSet out;
  for (const auto& g : gens) {
    // In sorted order a strict extension follows its prefix immediately.
    if (!out.gens_.empty() && out.gens_.back().is_prefix_of(g)) continue;
    out.gens_.push_back(g);
  }
  return out;
}

bool CylinderSet::contains_cylinder(const BitString& sigma) const {
  return std::any_of(gens_.begin(), gens_.end(), [&](const BitString& g) {
    return g.is_prefix_of(sigma);
  });
}

Dyadic CylinderSet::measure(const MeasureOracle& mu, unsigned i) const {
  if (gens_.empty()) return Dyadic::zero();
  unsigned extra = 0;
  while ((size_t{1} << extra) < gens_.size()) ++extra;
  Dyadic sum;
  for (const auto& g : gens_) sum += mu.eval_raw(g, i + extra);
  return sum;
}

std::string AdditivityReport::to_text() const {
  std::ostringstream os;
  os << "additivity depth=" << depth << " precision=" << precision
     << " nodes=" << nodes_checked << " tolerance=" << tolerance.to_fraction()
     << " max_deviation=" << max_deviation.to_fraction() << "\n";
  for (const auto& e : flagged) {
    os << "violation\t" << e.sigma << "\t" << e.deviation.to_fraction() << "\n";
  }
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

Dyadic additivity_deviation(const MeasureOracle& mu, const BitString& sigma,
                            unsigned p) {
  Dyadic v = mu.eval_raw(sigma, p) - mu.eval_raw(sigma.extended(0), p) -
             mu.eval_raw(sigma.extended(1), p);
  return v.abs();
}

}  // namespace

AdditivityReport check_additivity(const MeasureOracle& mu, unsigned depth,
                                  unsigned i, Exec exec) {
  if (depth < 1) throw DomainError("additivity audit needs depth >= 1");
  if (depth > 24) throw GuardError("additivity audit guarded at depth 24");
  AdditivityReport rep;
  rep.depth = depth;
  rep.precision = i;
  rep.exact_oracle = mu.exact();
  unsigned p = i + 2;
  rep.tolerance =
      mu.exact() ? Dyadic::zero() : Dyadic(3) * Dyadic::pow2_neg(p);

  // One slot per node of the full binary tree below `depth`, in depth-lex
  // order, so the parallel and serial paths fill identical reports.
  size_t total = (size_t{1} << depth) - 1;
  std::vector<Dyadic> devs(total);
  rep.nodes_checked = total;

  auto node_sigma = [](size_t idx) {
    size_t len = 0;
    size_t level_start = 0;
    while (level_start + (size_t{1} << len) <= idx) {
      level_start += size_t{1} << len;
      ++len;
    }
    return BitString::from_index(idx - level_start, len);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx) {
      devs[static_cast<size_t>(idx)] =
          additivity_deviation(mu, node_sigma(static_cast<size_t>(idx)), p);
    }
  } else {
    for (size_t idx = 0; idx < total; ++idx) {
      devs[idx] = additivity_deviation(mu, node_sigma(idx), p);
    }
  }

  for (size_t idx = 0; idx < total; ++idx) {
    if (rep.max_deviation < devs[idx]) rep.max_deviation = devs[idx];
    if (rep.tolerance < devs[idx]) {
      rep.flagged.push_back({node_sigma(idx), devs[idx]});
    }
  }
  return rep;
}

std::vector<AtomCandidate> atom_candidates(const MeasureOracle& mu,
                                           unsigned depth, const Dyadic& delta,
                                           Exec exec) {
  if (!(Dyadic::zero() < delta)) {
    throw DomainError("atom threshold delta must be positive");
  }
  if (depth > 24) throw GuardError("atom scan guarded at depth 24");

  // Precision for inexact oracles: 2^{-p} <= delta/4.
  unsigned p = 0;
  if (!mu.exact()) {
    while (Dyadic(delta).halved().halved() < Dyadic::pow2_neg(p) && p < 512) {
      ++p;
    }
  }
  Dyadic err = mu.exact() ? Dyadic::zero() : Dyadic::pow2_neg(p);

  size_t total = size_t{1} << depth;
  std::vector<Dyadic> masses(total);
  auto eval_at = [&](size_t v) {
    return mu.eval(BitString::from_index(v, depth), p);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long v = 0; v < static_cast<long long>(total); ++v) {
      masses[static_cast<size_t>(v)] = eval_at(static_cast<size_t>(v));
    }
  } else {
    for (size_t v = 0; v < total; ++v) masses[v] = eval_at(v);
  }

  std::vector<AtomCandidate> out;
  for (size_t v = 0; v < total; ++v) {
    const Dyadic& m = masses[v];
    if (mu.exact()) {
      if (!(m < delta)) out.push_back({BitString::from_index(v, depth), m});
      continue;
    }
    // Certainly above: m - err >= delta. Certainly below: m + err < delta.
    if (!(m - err < delta)) {
      out.push_back({BitString::from_index(v, depth), m});
    } else if (!(m + err < delta)) {
      throw PrecisionError("cannot decide threshold for cylinder " +
                           BitString::from_index(v, depth).str() +
                           " at precision 2^-" + std::to_string(p));
    }
  }
  return out;
}

std::string measure_report_line(const BitString& sigma, const Dyadic& value,
                                unsigned precision) {
  std::ostringstream os;
  os << (sigma.empty() ? "e" : sigma.str()) << "\t" << value.to_fraction()
     << "\t2^-" << precision;
  return os.str();
}

}  // namespace cantor
