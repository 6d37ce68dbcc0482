#include "cantor/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cantor/error.hpp"

namespace cantor {

namespace {

nlohmann::json to_json_basics(const std::vector<unsigned>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (unsigned b : v) arr.push_back(b);
  return arr;
}

}  // namespace

FiniteLattice FiniteLattice::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string name = "lattice";
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> relations;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "lattice") {
      if (ls >> tok) name = tok;
      continue;
    }
    if (tok == "elements:") {
      while (ls >> tok) elements.push_back(tok);
      continue;
    }
    if (tok == "covers:") {
      while (ls >> tok) {
        size_t lt = tok.find('<');
        if (lt == std::string::npos || lt == 0 || lt + 1 == tok.size()) {
          throw ParseError("cover pairs look like a<b, got '" + tok + "'");
        }
        relations.emplace_back(tok.substr(0, lt), tok.substr(lt + 1));
      }
      continue;
    }
    throw ParseError("unexpected lattice line '" + line + "'");
  }
  if (elements.empty()) throw ParseError("lattice file needs an elements: line");
  {
    std::set<std::string> seen;
    for (const auto& e : elements) {
      if (!seen.insert(e).second) {
        throw ParseError("duplicate element '" + e + "'");
      }
    }
  }
  size_t n = elements.size();
  auto idx = [&](const std::string& e) -> size_t {
    auto it = std::find(elements.begin(), elements.end(), e);
    if (it == elements.end()) {
      throw ParseError("unknown element '" + e + "' in covers");
    }
    return static_cast<size_t>(it - elements.begin());
  };

  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& [lo, hi] : relations) leq[idx(lo)][idx(hi)] = true;
  // Reflexive-transitive closure (Warshall).
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (!leq[i][k]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (leq[k][j]) leq[i][j] = true;
      }
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i != j && leq[i][j] && leq[j][i]) {
        throw ParseError("relation cycle through '" + elements[i] + "' and '" +
                         elements[j] + "'");
      }
    }
  }
  return from_order(std::move(name), std::move(elements), std::move(leq));
}

FiniteLattice FiniteLattice::from_order(std::string name,
                                        std::vector<std::string> element_names,
                                        std::vector<std::vector<bool>> leq) {
  FiniteLattice l;
  l.name_ = std::move(name);
  l.names_ = std::move(element_names);
  l.leq_ = std::move(leq);
  size_t n = l.names_.size();

  auto all_below = [&](size_t t) {
    for (size_t x = 0; x < n; ++x) {
      if (!l.leq_[x][t]) return false;
    }
    return true;
  };
  auto all_above = [&](size_t b) {
    for (size_t x = 0; x < n; ++x) {
      if (!l.leq_[b][x]) return false;
    }
    return true;
  };
  std::optional<size_t> top, bottom;
  for (size_t x = 0; x < n; ++x) {
    if (all_below(x)) top = x;
    if (all_above(x)) bottom = x;
  }
  if (!top) {
    // Witness: two maximal elements.
    std::vector<size_t> maximal;
    for (size_t x = 0; x < n; ++x) {
      bool has_above = false;
      for (size_t y = 0; y < n; ++y) {
        if (y != x && l.leq_[x][y]) has_above = true;
      }
      if (!has_above) maximal.push_back(x);
    }
    std::string w;
    for (size_t m : maximal) w += " " + l.names_[m];
    throw ParseError("not a lattice: no top element (maximal:" + w + ")");
  }
  if (!bottom) {
    throw ParseError("not a lattice: no bottom element");
  }
  l.top_ = *top;
  l.bottom_ = *bottom;

  l.meet_.assign(n, std::vector<size_t>(n, 0));
  l.join_.assign(n, std::vector<size_t>(n, 0));
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      std::optional<size_t> m;
      for (size_t c = 0; c < n; ++c) {
        if (l.leq_[c][a] && l.leq_[c][b]) {
          if (!m || l.leq_[*m][c]) m = c;
        }
      }
      // Greatest lower bound must dominate every common lower bound.
      for (size_t c = 0; c < n; ++c) {
        if (l.leq_[c][a] && l.leq_[c][b] && !l.leq_[c][*m]) {
          throw ParseError("not a lattice: '" + l.names_[a] + "' and '" +
                           l.names_[b] + "' have no meet");
        }
      }
      l.meet_[a][b] = *m;
      std::optional<size_t> j;
      for (size_t c = 0; c < n; ++c) {
        if (l.leq_[a][c] && l.leq_[b][c]) {
          if (!j || l.leq_[c][*j]) j = c;
        }
      }
      for (size_t c = 0; c < n; ++c) {
        if (l.leq_[a][c] && l.leq_[b][c] && !l.leq_[*j][c]) {
          throw ParseError("not a lattice: '" + l.names_[a] + "' and '" +
                           l.names_[b] + "' have no join");
        }
      }
      l.join_[a][b] = *j;
    }
  }

  l.upper_covers_.assign(n, {});
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (a == b || !l.leq_[a][b]) continue;
      bool covers = true;
      for (size_t c = 0; c < n; ++c) {
        if (c != a && c != b && l.leq_[a][c] && l.leq_[c][b]) covers = false;
      }
      if (covers) l.upper_covers_[a].push_back(b);
    }
  }
  return l;
}

std::optional<size_t> FiniteLattice::index_of(std::string_view name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::string DistributivityReport::to_text(const FiniteLattice& l) const {
  std::ostringstream os;
  if (distributive) {
    os << "distributive\n";
  } else {
    os << "not distributive\n";
    if (witness_triple) {
      const auto& w = *witness_triple;
      os << "witness triple: a=" << l.element_name(w[0])
         << " b=" << l.element_name(w[1]) << " c=" << l.element_name(w[2])
         << "\n";
    }
    if (sublattice) {
      os << "sublattice " << sublattice_kind << ":";
      for (size_t e : *sublattice) os << " " << l.element_name(e);
      os << "\n";
    }
  }
  os << "methods-agree: " << (methods_agree ? "yes" : "NO") << "\n";
  return os.str();
}

namespace {

bool triple_violates(const FiniteLattice& l, size_t a, size_t b, size_t c) {
  return l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c));
}

// Encodes an M3 witness {m,x,y,z,j} from a triple of pairwise incomparable
// elements with common meet and join.
std::optional<std::array<size_t, 5>> m3_at(const FiniteLattice& l, size_t x,
                                           size_t y, size_t z) {
  if (l.leq(x, y) || l.leq(y, x) || l.leq(x, z) || l.leq(z, x) ||
      l.leq(y, z) || l.leq(z, y)) {
    return std::nullopt;
  }
  size_t m = l.meet(x, y);
  if (l.meet(x, z) != m || l.meet(y, z) != m) return std::nullopt;
  size_t j = l.join(x, y);
  if (l.join(x, z) != j || l.join(y, z) != j) return std::nullopt;
  return std::array<size_t, 5>{m, x, y, z, j};
}

// Encodes an N5 witness {m,a,c,b,j} from a < c and b incomparable to both
// with a^b = c^b and avb = cvb.
std::optional<std::array<size_t, 5>> n5_at(const FiniteLattice& l, size_t a,
                                           size_t c, size_t b) {
  if (a == c || !l.leq(a, c)) return std::nullopt;
  if (l.leq(b, a) || l.leq(a, b) || l.leq(b, c) || l.leq(c, b)) {
    return std::nullopt;
  }
  if (l.meet(a, b) != l.meet(c, b)) return std::nullopt;
  if (l.join(a, b) != l.join(c, b)) return std::nullopt;
  return std::array<size_t, 5>{l.meet(a, b), a, c, b, l.join(a, b)};
}

}  // namespace

DistributivityReport check_distributive(const FiniteLattice& l, Exec exec) {
  DistributivityReport rep;
  size_t n = l.size();
  size_t cube = n * n * n;
  const size_t kNone = static_cast<size_t>(-1);

  // Method 1: the distributive identity over all triples; minimal violating
  // flat index keeps the witness deterministic across thread counts.
  size_t first_triple = kNone;
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(min : first_triple) schedule(static)
    for (long long f = 0; f < static_cast<long long>(cube); ++f) {
      size_t a = static_cast<size_t>(f) / (n * n);
      size_t b = (static_cast<size_t>(f) / n) % n;
      size_t c = static_cast<size_t>(f) % n;
      if (triple_violates(l, a, b, c)) {
        first_triple = std::min(first_triple, static_cast<size_t>(f));
      }
    }
  } else {
    for (size_t f = 0; f < cube && first_triple == kNone; ++f) {
      if (triple_violates(l, f / (n * n), (f / n) % n, f % n)) first_triple = f;
    }
  }

  // Method 2: M3/N5 sublattice scan over ordered triples.
  size_t first_sub = kNone;
  int sub_kind = 0;  // 1 = M3, 2 = N5
  std::array<size_t, 5> sub_witness{};
  auto probe_sub = [&](size_t f) -> std::optional<std::pair<int, std::array<size_t, 5>>> {
    size_t x = f / (n * n), y = (f / n) % n, z = f % n;
    if (x < y && y < z) {
      if (auto m3 = m3_at(l, x, y, z)) return std::make_pair(1, *m3);
    }
    if (auto n5 = n5_at(l, x, y, z)) return std::make_pair(2, *n5);
    return std::nullopt;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(min : first_sub) schedule(static)
    for (long long f = 0; f < static_cast<long long>(cube); ++f) {
      if (probe_sub(static_cast<size_t>(f))) {
        first_sub = std::min(first_sub, static_cast<size_t>(f));
      }
    }
  } else {
    for (size_t f = 0; f < cube && first_sub == kNone; ++f) {
      if (probe_sub(f)) first_sub = f;
    }
  }
  if (first_sub != kNone) {
    auto hit = probe_sub(first_sub);
    sub_kind = hit->first;
    sub_witness = hit->second;
  }

  rep.distributive = first_triple == kNone;
  if (first_triple != kNone) {
    rep.witness_triple = {first_triple / (n * n), (first_triple / n) % n,
                          first_triple % n};
  }
  if (first_sub != kNone) {
    rep.sublattice = sub_witness;
    rep.sublattice_kind = sub_kind == 1 ? "M3" : "N5";
  }
  rep.methods_agree = (first_triple == kNone) == (first_sub == kNone);
  if (!rep.methods_agree) {
    throw DomainError("distributivity methods disagree on '" + l.name() + "'");
  }
  return rep;
}

std::vector<unsigned> compute_levels(const FiniteLattice& l) {
  size_t n = l.size();
  // Process from the top down: fewer elements above means earlier.
  std::vector<size_t> above(n, 0);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      if (b != a && l.leq(a, b)) ++above[a];
    }
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return above[a] < above[b]; });

  std::vector<unsigned> level(n, 0);
  for (size_t a : order) {
    if (a == l.top()) {
      level[a] = 1;
      continue;
    }
    unsigned best = 0;
    for (size_t b : l.upper_covers(a)) best = std::max(best, level[b]);
    level[a] = best + 1;
  }
  for (size_t a = 0; a < n; ++a) {
    if (a == l.top()) continue;
    for (size_t b : l.upper_covers(a)) {
      if (level[b] != level[a] - 1) {
        throw DomainError("grading violation: " + l.element_name(a) +
                          " (level " + std::to_string(level[a]) +
                          ") covered by " + l.element_name(b) + " (level " +
                          std::to_string(level[b]) + ")");
      }
    }
  }
  return level;
}

MeetClassification classify_meet_irreducible(const FiniteLattice& l) {
  size_t n = l.size();
  MeetClassification out;
  out.meet_irreducible.assign(n, false);
  for (size_t c = 0; c < n; ++c) {
    if (c == l.top()) continue;
    // Definitional: some a,b > c with a^b = c.
    bool reducible_def = false;
    for (size_t a = 0; a < n && !reducible_def; ++a) {
      if (a == c || !l.leq(c, a)) continue;
      for (size_t b = 0; b < n; ++b) {
        if (b == c || b == a || !l.leq(c, b)) continue;
        if (l.meet(a, b) == c) {
          reducible_def = true;
          break;
        }
      }
    }
    bool reducible_covers = l.upper_covers(c).size() >= 2;
    if (reducible_def != reducible_covers) {
      throw DomainError("meet-irreducibility methods disagree at '" +
                        l.element_name(c) + "'");
    }
    out.meet_irreducible[c] = !reducible_def;
  }
  return out;
}

std::string SequenceTerm::render() const {
  std::string s;
  for (size_t i = 0; i < basics.size(); ++i) {
    if (i) s += "+";
    s += "A" + std::to_string(basics[i]);
  }
  return s;
}

std::string SetSystem::render(const FiniteLattice& l) const {
  // Sorted by element name for determinism.
  std::vector<size_t> order(l.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return l.element_name(a) < l.element_name(b);
  });
  std::ostringstream os;
  for (size_t e : order) {
    os << l.element_name(e) << ": {";
    for (size_t i = 0; i < assignment[e].size(); ++i) {
      os << (i ? ", " : "") << assignment[e][i].render();
    }
    os << "}\n";
  }
  return os.str();
}

namespace {

std::vector<SequenceTerm> sorted_union(const std::vector<SequenceTerm>& a,
                                       const std::vector<SequenceTerm>& b) {
  std::vector<SequenceTerm> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<unsigned> components_of(const std::vector<SequenceTerm>& terms) {
  std::vector<unsigned> out;
  for (const auto& t : terms) {
    out.insert(out.end(), t.basics.begin(), t.basics.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SetSystem build_set_system(const FiniteLattice& l) {
  DistributivityReport dist = check_distributive(l, Exec::Serial);
  if (!dist.distributive) {
    std::string w;
    if (dist.witness_triple) {
      const auto& t = *dist.witness_triple;
      w = " (witness triple " + l.element_name(t[0]) + "," +
          l.element_name(t[1]) + "," + l.element_name(t[2]) + ")";
    }
    throw DomainError("lattice '" + l.name() + "' is not distributive" + w);
  }
  std::vector<unsigned> level = compute_levels(l);
  MeetClassification cls = classify_meet_irreducible(l);

  unsigned max_level = *std::max_element(level.begin(), level.end());
  SetSystem s;
  s.assignment.assign(l.size(), {});
  unsigned next_basic = 0;

  for (unsigned lev = 2; lev <= max_level; ++lev) {
    // Elements within a level in identifier order.
    std::vector<size_t> members;
    for (size_t a = 0; a < l.size(); ++a) {
      if (level[a] == lev) members.push_back(a);
    }
    std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
      return l.element_name(a) < l.element_name(b);
    });

    for (size_t a : members) {
      const auto& covers = l.upper_covers(a);
      if (cls.meet_irreducible[a]) {
        if (covers.size() != 1) {
          throw DomainError("meet-irreducible element with " +
                            std::to_string(covers.size()) + " covers");
        }
        const auto& base = s.assignment[covers[0]];
        unsigned fresh = next_basic++;
        SequenceTerm term;
        term.basics = components_of(base);
        term.basics.push_back(fresh);
        std::sort(term.basics.begin(), term.basics.end());
        s.origin.push_back(a);
        if (base.empty()) {
          s.level_two_basics.push_back(fresh);
        } else {
          s.meet_irreducible_basics.push_back(fresh);
        }
        s.assignment[a] = sorted_union(base, {term});
      } else {
        // Union over all upper covers, with the pairwise consistency the
        // construction's well-definedness argument promises.
        std::vector<SequenceTerm> result = s.assignment[covers[0]];
        for (size_t i = 1; i < covers.size(); ++i) {
          result = sorted_union(result, s.assignment[covers[i]]);
        }
        for (size_t i = 0; i < covers.size(); ++i) {
          for (size_t j = i + 1; j < covers.size(); ++j) {
            if (l.meet(covers[i], covers[j]) != a) {
              throw DomainError("cover pair whose meet is not the element");
            }
            auto pair_union = sorted_union(s.assignment[covers[i]],
                                           s.assignment[covers[j]]);
            if (pair_union != result) {
              throw DomainError(
                  "union inconsistency at '" + l.element_name(a) +
                  "' between covers '" + l.element_name(covers[i]) +
                  "' and '" + l.element_name(covers[j]) + "'");
            }
          }
        }
        s.assignment[a] = std::move(result);
      }
    }
  }
  s.basic_count = next_basic;
  return s;
}

std::string IsoReport::to_text() const {
  std::ostringstream os;
  os << "pairs-checked: " << pairs_checked << "\n";
  for (const auto& v : violations) os << v << "\n";
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

IsoReport verify_set_system_iso(const FiniteLattice& l, const SetSystem& s,
                                Exec exec) {
  size_t n = l.size();
  IsoReport rep;
  rep.pairs_checked = n * n;
  std::vector<std::string> slots(n * n);

  auto check_pair = [&](size_t f) {
    size_t a = f / n, b = f % n;
    std::ostringstream bad;
    const auto& sa = s.assignment[a];
    const auto& sb = s.assignment[b];
    bool superset =
        std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
    if (l.leq(a, b) != superset) {
      bad << "order mismatch: " << l.element_name(a) << " <= "
          << l.element_name(b) << " is " << (l.leq(a, b) ? "true" : "false")
          << " but S-containment is " << (superset ? "true" : "false") << "; ";
    }
    if (s.assignment[l.meet(a, b)] != sorted_union(sa, sb)) {
      bad << "meet mismatch at (" << l.element_name(a) << ","
          << l.element_name(b) << "); ";
    }
    std::vector<SequenceTerm> inter;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::back_inserter(inter));
    if (s.assignment[l.join(a, b)] != inter) {
      bad << "join mismatch at (" << l.element_name(a) << ","
          << l.element_name(b) << "); ";
    }
    slots[f] = bad.str();
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long f = 0; f < static_cast<long long>(n * n); ++f) {
      check_pair(static_cast<size_t>(f));
    }
  } else {
    for (size_t f = 0; f < n * n; ++f) check_pair(f);
  }
  for (const auto& slot : slots) {
    if (!slot.empty()) rep.violations.push_back(slot);
  }

  std::map<std::vector<SequenceTerm>, size_t> seen;
  for (size_t a = 0; a < n; ++a) {
    auto [it, fresh] = seen.emplace(s.assignment[a], a);
    if (!fresh) {
      rep.violations.push_back("assignments of " + l.element_name(it->second) +
                               " and " + l.element_name(a) + " coincide");
    }
  }
  return rep;
}

namespace {

std::vector<unsigned> mask_subset(const std::vector<unsigned>& universe,
                                  uint64_t mask) {
  std::vector<unsigned> out;
  for (size_t i = 0; i < universe.size(); ++i) {
    if ((mask >> i) & 1u) out.push_back(universe[i]);
  }
  return out;
}

}  // namespace

std::string ProfileReport::to_csv(const FiniteLattice& l) const {
  std::ostringstream os;
  os << "J,K,Khat,element,profile\n";
  auto render_set = [](const std::vector<unsigned>& v) {
    std::string s = "{";
    for (size_t i = 0; i < v.size(); ++i) {
      s += (i ? " " : "") + std::string("A") + std::to_string(v[i]);
    }
    return s + "}";
  };
  for (const auto& p : profiles) {
    os << render_set(p.j) << "," << render_set(p.k) << ","
       << render_set(p.k_hat) << "," << l.element_name(p.element) << ",\"{";
    for (size_t i = 0; i < p.profile.size(); ++i) {
      os << (i ? ", " : "") << p.profile[i].render();
    }
    os << "}\"\n";
  }
  os << "verdicts: totality=" << (totality ? "pass" : "fail")
     << " surjectivity=" << (surjectivity ? "pass" : "fail")
     << " monotonicity=" << (monotonicity ? "pass" : "fail")
     << " empty-J=" << (empty_j_rule ? "pass" : "fail")
     << " realized=" << realized_count << "\n";
  return os.str();
}

ProfileReport lr_profiles(const FiniteLattice& l, const SetSystem& s,
                          Exec exec, unsigned basics_guard) {
  const auto& ju = s.level_two_basics;
  const auto& ku = s.meet_irreducible_basics;
  if (ju.size() + ku.size() > basics_guard) {
    throw GuardError("profile enumeration over " +
                     std::to_string(ju.size() + ku.size()) +
                     " basics exceeds guard " + std::to_string(basics_guard));
  }
  size_t jn = size_t{1} << ju.size();
  size_t kn = size_t{1} << ku.size();
  size_t total = jn * kn;

  ProfileReport rep;
  rep.profiles.resize(total);

  // S_{a_i} >= S_{a_l} precomputed over (meet-irreducible i, level-two l).
  std::vector<std::vector<bool>> dominates(
      ku.size(), std::vector<bool>(ju.size(), false));
  for (size_t ki = 0; ki < ku.size(); ++ki) {
    const auto& si = s.assignment[s.origin[ku[ki]]];
    for (size_t li = 0; li < ju.size(); ++li) {
      const auto& sl = s.assignment[s.origin[ju[li]]];
      dominates[ki][li] =
          std::includes(si.begin(), si.end(), sl.begin(), sl.end());
    }
  }

  auto element_of = [&](uint64_t jm, uint64_t km, std::vector<unsigned>* khat_out)
      -> size_t {
    std::vector<unsigned> khat;
    for (size_t ki = 0; ki < ku.size(); ++ki) {
      if (!((km >> ki) & 1u)) continue;
      bool poisoned = false;
      for (size_t li = 0; li < ju.size() && !poisoned; ++li) {
        if (!((jm >> li) & 1u) && dominates[ki][li]) poisoned = true;
      }
      if (!poisoned) khat.push_back(ku[ki]);
    }
    size_t element = l.top();  // empty meet
    for (size_t li = 0; li < ju.size(); ++li) {
      if ((jm >> li) & 1u) element = l.meet(element, s.origin[ju[li]]);
    }
    for (unsigned b : khat) element = l.meet(element, s.origin[b]);
    if (khat_out) *khat_out = std::move(khat);
    return element;
  };

  auto fill_row = [&](size_t f) {
    uint64_t jm = f / kn;
    uint64_t km = f % kn;
    LRProfile p;
    p.j = mask_subset(ju, jm);
    p.k = mask_subset(ku, km);
    p.element = element_of(jm, km, &p.k_hat);
    p.profile = s.assignment[p.element];
    rep.profiles[f] = std::move(p);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long f = 0; f < static_cast<long long>(total); ++f) {
      fill_row(static_cast<size_t>(f));
    }
  } else {
    for (size_t f = 0; f < total; ++f) fill_row(f);
  }

  // Verdicts.
  std::vector<bool> realized(l.size(), false);
  std::set<std::vector<SequenceTerm>> distinct;
  for (const auto& p : rep.profiles) {
    realized[p.element] = true;
    distinct.insert(p.profile);
  }
  rep.realized_count = distinct.size();
  for (size_t e = 0; e < l.size(); ++e) {
    if (!realized[e]) {
      rep.surjectivity = false;
      rep.violations.push_back("element " + l.element_name(e) +
                               " realized by no (J,K)");
    }
  }
  // Monotonicity via single-bit extensions (transitivity covers the rest).
  for (size_t f = 0; f < total; ++f) {
    uint64_t jm = f / kn, km = f % kn;
    size_t base = rep.profiles[f].element;
    for (size_t li = 0; li < ju.size(); ++li) {
      if ((jm >> li) & 1u) continue;
      size_t g = (jm | (uint64_t{1} << li)) * kn + km;
      if (!l.leq(rep.profiles[g].element, base)) {
        rep.monotonicity = false;
        rep.violations.push_back("monotonicity fails at row " +
                                 std::to_string(f) + " extending J");
      }
    }
    for (size_t ki = 0; ki < ku.size(); ++ki) {
      if ((km >> ki) & 1u) continue;
      size_t g = jm * kn + (km | (uint64_t{1} << ki));
      if (!l.leq(rep.profiles[g].element, base)) {
        rep.monotonicity = false;
        rep.violations.push_back("monotonicity fails at row " +
                                 std::to_string(f) + " extending K");
      }
    }
  }
  for (size_t km = 0; km < kn; ++km) {
    if (rep.profiles[km].element != l.top()) {
      rep.empty_j_rule = false;
      rep.violations.push_back("J=empty does not collapse to top at K row " +
                               std::to_string(km));
    }
  }
  return rep;
}

std::string emit_measure_recipe(const FiniteLattice& l, const SetSystem& s) {
  const auto& bottom_terms = s.assignment[l.bottom()];
  size_t k = bottom_terms.size();
  nlohmann::json doc;
  doc["lattice"] = l.name();
  doc["count"] = k;
  bool dyadic = k > 0 && (k & (k - 1)) == 0;
  doc["weight"] = {
      {"numerator", 1},
      {"denominator", k},
      {"dyadic", dyadic},
      {"approximation",
       dyadic ? "exact at every precision"
              : "floor(sum*2^{i+1}/k)/2^{i+1} with operands at precision i+2"},
  };
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : bottom_terms) {
    nlohmann::json entry;
    entry["term"] = t.render();
    entry["basics"] = to_json_basics(t.basics);
    entry["schedule"] = nullptr;  // placeholder: bind one file per basic
    terms.push_back(entry);
  }
  doc["terms"] = terms;
  nlohmann::json bindings = nlohmann::json::object();
  for (unsigned b = 0; b < s.basic_count; ++b) {
    bindings["A" + std::to_string(b)] = nullptr;
  }
  doc["bindings"] = bindings;
  doc["interleaving"] =
      "round-robin: joined position arity*n+j holds bit n of component j "
      "(components sorted by basic index)";
  return doc.dump(2) + "\n";
}

}  // namespace cantor
