#include "cantor/mltest.hpp"

#include <algorithm>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor {

namespace {

StagedTest::Kind parse_kind(const std::string& word) {
  if (word == "ml") return StagedTest::Kind::ML;
  if (word == "schnorr") return StagedTest::Kind::Schnorr;
  if (word == "generalized") return StagedTest::Kind::Generalized;
  throw ParseError("unknown test kind '" + word + "'");
}

}  // namespace

StagedTest StagedTest::parse(std::string_view text) {
  std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> additions;
  Kind kind = Kind::ML;
  std::optional<uint64_t> horizon;
  bool horizon_set = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "kind:") {
      std::string word;
      if (!(ls >> word)) throw ParseError("kind: needs a value");
      kind = parse_kind(word);
      continue;
    }
    if (tok == "horizon:") {
      std::string word;
      if (!(ls >> word)) throw ParseError("horizon: needs a value");
      horizon_set = true;
      if (word != "open") horizon = std::stoull(word);
      continue;
    }
    // "i s: sigma sigma ..."
    uint64_t i = 0, s = 0;
    try {
      i = std::stoull(tok);
    } catch (...) {
      throw ParseError("unexpected test line '" + line + "'");
    }
    std::string stok;
    if (!(ls >> stok)) throw ParseError("test line needs 'i s: ...'");
    if (!stok.empty() && stok.back() == ':') stok.pop_back();
    try {
      s = std::stoull(stok);
    } catch (...) {
      throw ParseError("bad stage in test line '" + line + "'");
    }
    std::string gen;
    while (ls >> gen) {
      additions[i].emplace_back(s, gen == "e" ? BitString() : BitString(gen));
    }
  }
  uint64_t max_stage = 0;
  for (auto& [i, adds] : additions) {
    std::stable_sort(adds.begin(), adds.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [s, g] : adds) max_stage = std::max(max_stage, s);
  }
  if (!horizon_set) horizon = max_stage;
  return make(kind, horizon, std::move(additions));
}

StagedTest StagedTest::make(
    Kind kind, std::optional<uint64_t> horizon,
    std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> additions,
    std::string name) {
  StagedTest t;
  t.kind_ = kind;
  t.horizon_ = horizon;
  t.additions_ = std::move(additions);
  t.name_ = std::move(name);
  for (auto& [i, adds] : t.additions_) {
    std::stable_sort(adds.begin(), adds.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return t;
}

StagedTest StagedTest::zeros(uint64_t components) {
  std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> adds;
  for (uint64_t i = 0; i <= components; ++i) {
    adds[i].emplace_back(0, BitString::zeros(i));
  }
  return make(Kind::Schnorr, 0, std::move(adds), "zeros");
}

StagedTest StagedTest::zeros_late(uint64_t components) {
  std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> adds;
  for (uint64_t i = 0; i <= components; ++i) {
    adds[i].emplace_back(i + 1, BitString::zeros(i + 1));
  }
  return make(Kind::ML, components + 1, std::move(adds), "zeros-late");
}

StagedTest StagedTest::inflated(uint64_t components) {
  std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> adds;
  for (uint64_t i = 0; i <= components; ++i) {
    adds[i].emplace_back(0, BitString::zeros(i == 0 ? 0 : i - 1));
  }
  return make(Kind::ML, 0, std::move(adds), "inflated");
}

StagedTest StagedTest::geometric(uint64_t components, uint64_t stages) {
  // Stage j+1 of component i adds the cylinder 0^j 1 0^i: pairwise disjoint
  // (the position of the first 1 differs), mass 2^{-(i+1+j)}, so stage s
  // holds 2^{-i}(1 - 2^{-s}) rising to the Schnorr target.
  std::map<uint64_t, std::vector<std::pair<uint64_t, BitString>>> adds;
  for (uint64_t i = 0; i <= components; ++i) {
    for (uint64_t j = 0; j < stages; ++j) {
      BitString g = BitString::zeros(j);
      g.push_back(1);
      g.append_run(0, i);
      adds[i].emplace_back(j + 1, std::move(g));
    }
  }
  return make(Kind::Schnorr, stages, std::move(adds), "geometric");
}

uint64_t StagedTest::max_component() const {
  return additions_.empty() ? 0 : additions_.rbegin()->first;
}

CylinderSet StagedTest::stage(uint64_t i, uint64_t s) const {
  auto it = additions_.find(i);
  if (it == additions_.end()) return CylinderSet();
  std::vector<BitString> gens;
  for (const auto& [at, g] : it->second) {
    if (at <= s) gens.push_back(g);
  }
  return CylinderSet::from_generators(std::move(gens));
}

std::string BoundReport::to_text() const {
  std::ostringstream os;
  switch (kind) {
    case StagedTest::Kind::ML:
      os << "kind=ml\n";
      for (const auto& v : verdicts) {
        os << "i=" << v.i << " s=" << v.s << " mass=" << v.mass.to_fraction()
           << " bound=" << v.bound.to_fraction() << " "
           << (v.pass ? "ok" : "VIOLATION") << "\n";
      }
      break;
    case StagedTest::Kind::Schnorr:
      os << "kind=schnorr\n";
      for (const auto& v : verdicts) {
        os << "i=" << v.i << " s=" << v.s << " mass=" << v.mass.to_fraction()
           << " bound=" << v.bound.to_fraction()
           << " gap=" << v.gap.to_fraction() << " "
           << (v.pass ? "ok" : "VIOLATION") << "\n";
      }
      break;
    case StagedTest::Kind::Generalized:
      os << "kind=generalized target=" << target.to_fraction() << "\n";
      for (size_t i = 0; i < tail_masses.size(); ++i) {
        os << "i=" << i << " mass=" << tail_masses[i].to_fraction() << "\n";
      }
      os << "nonincreasing=" << (nonincreasing ? "yes" : "NO")
         << " below-target=" << (below_target ? "yes" : "NO") << "\n";
      break;
  }
  os << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

BoundReport check_bound(const StagedTest& test, const MeasureOracle& mu,
                        uint64_t i, uint64_t s, unsigned precision,
                        std::optional<Dyadic> target) {
  BoundReport rep;
  rep.kind = test.kind();
  if (!mu.exact()) {
    // The margin must beat the approximation error decisively.
    precision = std::max(precision, static_cast<unsigned>(i + 8));
  }
  switch (test.kind()) {
    case StagedTest::Kind::ML:
    case StagedTest::Kind::Schnorr: {
      Dyadic bound = Dyadic::pow2_neg(static_cast<unsigned>(i));
      for (uint64_t stage = 0; stage <= s; ++stage) {
        BoundVerdict v;
        v.i = i;
        v.s = stage;
        v.bound = bound;
        v.mass = test.stage(i, stage).measure(mu, precision);
        if (mu.exact()) {
          v.pass = !(bound < v.mass);
        } else {
          Dyadic err = Dyadic::pow2_neg(precision);
          if (!(bound < v.mass + err)) {
            v.pass = true;  // true mass <= approx + err <= bound
          } else if (bound < v.mass - err) {
            v.pass = false;  // true mass >= approx - err > bound
          } else {
            throw PrecisionError("bound check undecidable at precision 2^-" +
                                 std::to_string(precision));
          }
        }
        v.gap = bound - v.mass;
        if (!v.pass) rep.pass = false;
        rep.verdicts.push_back(std::move(v));
      }
      break;
    }
    case StagedTest::Kind::Generalized: {
      rep.target = target.value_or(Dyadic::pow2_neg(static_cast<unsigned>(i)));
      for (uint64_t comp = 0; comp <= i; ++comp) {
        rep.tail_masses.push_back(test.stage(comp, s).measure(mu, precision));
      }
      for (size_t k = 1; k < rep.tail_masses.size(); ++k) {
        if (rep.tail_masses[k - 1] < rep.tail_masses[k]) {
          rep.nonincreasing = false;
        }
      }
      if (!rep.tail_masses.empty() && rep.target < rep.tail_masses.back()) {
        rep.below_target = false;
      }
      rep.pass = rep.nonincreasing && rep.below_target;
      break;
    }
  }
  return rep;
}

TallyValue capture_stage(const StagedTest& test, const BitPattern& x,
                         uint64_t n, uint64_t budget) {
  for (uint64_t s = 0; s <= budget; ++s) {
    for (const auto& g : test.stage(n, s).generators()) {
      if (x.first(g.size()) == g) return TallyValue::finite(s);
    }
  }
  return TallyValue::unknown(budget);
}

std::string CoverageReport::to_text() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v << "\n";
  os << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

CoverageReport audit_coverage_monotone(const StagedTest& test,
                                       uint64_t components, uint64_t stages) {
  CoverageReport rep;
  for (uint64_t i = 0; i <= components; ++i) {
    for (uint64_t s = 0; s < stages; ++s) {
      CylinderSet now = test.stage(i, s);
      CylinderSet later = test.stage(i, s + 1);
      for (const auto& g : now.generators()) {
        if (!later.contains_cylinder(g)) {
          rep.pass = false;
          std::ostringstream os;
          os << "component " << i << ": generator " << g << " at stage " << s
             << " uncovered at stage " << (s + 1);
          rep.violations.push_back(os.str());
        }
      }
    }
  }
  return rep;
}

}  // namespace cantor
