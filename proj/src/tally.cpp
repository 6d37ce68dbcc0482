#include "cantor/tally.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor {

ThetaPredicate::ThetaPredicate(std::string name, EvalFn eval, HorizonFn horizon)
    : name_(std::move(name)),
      eval_(std::make_shared<const EvalFn>(std::move(eval))),
      horizon_(std::make_shared<const HorizonFn>(std::move(horizon))) {}

Tri ThetaPredicate::eval(const BitString& prefix, uint64_t n, uint64_t s) const {
  return (*eval_)(prefix, n, s);
}

std::optional<uint64_t> ThetaPredicate::refutation_horizon(uint64_t n) const {
  return (*horizon_)(n);
}

ThetaPredicate schedule_predicate(const MutationSchedule& sched) {
  auto shared = std::make_shared<const MutationSchedule>(sched);
  return ThetaPredicate(
      "schedule",
      [shared](const BitString& prefix, uint64_t n, uint64_t s) {
        if (prefix.size() < n) return Tri::NeedMoreInput;
        uint64_t stage = std::min(s, shared->horizon());
        return shared->approximant(stage).first(n) == prefix.prefix(n)
                   ? Tri::Holds
                   : Tri::Fails;
      },
      [shared](uint64_t) -> std::optional<uint64_t> {
        return shared->horizon();
      });
}

StageOracle::StageOracle(std::string name, Fn probe, SettleFn settle)
    : name_(std::move(name)),
      probe_(std::make_shared<const Fn>(std::move(probe))),
      settle_(std::make_shared<const SettleFn>(std::move(settle))) {}

StageProbe StageOracle::probe(const BitString& prefix, uint64_t k,
                              uint64_t s) const {
  return (*probe_)(prefix, k, s);
}

std::optional<uint64_t> StageOracle::settle_stage(uint64_t k) const {
  return (*settle_)(k);
}

StageOracle identity_read_oracle() {
  return StageOracle(
      "identity-read",
      [](const BitString& prefix, uint64_t k, uint64_t s) {
        if (s <= k) return StageProbe::diverged();
        if (prefix.size() <= k) return StageProbe::need_more();
        return StageProbe::converged(prefix.bit(k));
      },
      [](uint64_t k) -> std::optional<uint64_t> { return k + 1; });
}

StageOracle diverge_at_oracle(uint64_t bad) {
  return StageOracle(
      "diverge-at:" + std::to_string(bad),
      [bad](const BitString& prefix, uint64_t k, uint64_t s) {
        if (k == bad) return StageProbe::diverged();
        if (s <= k) return StageProbe::diverged();
        if (prefix.size() <= k) return StageProbe::need_more();
        return StageProbe::converged(prefix.bit(k));
      },
      [bad](uint64_t k) -> std::optional<uint64_t> {
        return k == bad ? 0 : k + 1;
      });
}

ThetaPredicate gamma_predicate(const StageOracle& gamma,
                               const MutationSchedule& b_sched) {
  auto b = std::make_shared<const MutationSchedule>(b_sched);
  auto g = std::make_shared<const StageOracle>(gamma);
  return ThetaPredicate(
      "gamma(" + gamma.name() + ")",
      [g, b](const BitString& prefix, uint64_t n, uint64_t s) {
        const BitPattern& bs = b->approximant(std::min(s, b->horizon()));
        for (uint64_t k = 0; k < n; ++k) {
          StageProbe cur = g->probe(prefix, k, s);
          if (cur.state == StageProbe::State::NeedMoreInput) {
            return Tri::NeedMoreInput;
          }
          if (s >= 1) {
            StageProbe prev = g->probe(prefix, k, s - 1);
            if (prev.state == StageProbe::State::Converged &&
                (cur.state != StageProbe::State::Converged ||
                 cur.value != prev.value)) {
              throw DomainError("stage oracle '" + g->name() +
                                "' changed a converged value at k=" +
                                std::to_string(k) + ", s=" + std::to_string(s));
            }
          }
          if (cur.state != StageProbe::State::Converged) return Tri::Fails;
          if (cur.value != bs.bit(k)) return Tri::Fails;
        }
        return Tri::Holds;
      },
      [g, b](uint64_t n) -> std::optional<uint64_t> {
        uint64_t h = b->horizon();
        for (uint64_t k = 0; k < n; ++k) {
          auto st = g->settle_stage(k);
          if (!st) return std::nullopt;
          h = std::max(h, *st);
        }
        return h;
      });
}

ThetaPredicate test_predicate(const StagedTest& test) {
  auto t = std::make_shared<const StagedTest>(test);
  return ThetaPredicate(
      "test(" + test.name() + ")",
      [t](const BitString& prefix, uint64_t n, uint64_t s) {
        bool undecided = false;
        for (const auto& gen : t->stage(n, s).generators()) {
          if (gen.size() >= s) continue;  // the witness needs k < s
          if (gen.is_prefix_of(prefix)) return Tri::Holds;
          if (prefix.is_prefix_of(gen)) undecided = true;
        }
        return undecided ? Tri::NeedMoreInput : Tri::Fails;
      },
      // Staged tests are open-ended enumerations: no refutation certificate.
      [](uint64_t) -> std::optional<uint64_t> { return std::nullopt; });
}

TallyValue theta_of(const ThetaPredicate& theta, const BitPattern& x,
                    uint64_t n, uint64_t budget) {
  std::optional<uint64_t> horizon = theta.refutation_horizon(n);
  uint64_t scan_to = budget;
  if (horizon && *horizon < budget) scan_to = *horizon;
  size_t len = std::max<size_t>(n, 8);
  BitString prefix = x.first(len);
  for (uint64_t s = 0; s <= scan_to; ++s) {
    Tri v = theta.eval(prefix, n, s);
    while (v == Tri::NeedMoreInput) {
      if (len >= (size_t{1} << 16)) {
        throw GuardError("predicate input demand exceeds guard");
      }
      len *= 2;
      prefix = x.first(len);
      v = theta.eval(prefix, n, s);
    }
    if (v == Tri::Holds) return TallyValue::finite(s);
  }
  if (horizon && scan_to >= *horizon) return TallyValue::infinite();
  return TallyValue::unknown(budget);
}

std::string TallyOutput::to_text() const {
  std::ostringstream os;
  os << "blocks:";
  for (const auto& b : blocks) os << " " << b.render();
  os << "\nrendered: " << (rendered.empty() ? "(empty)" : rendered.str())
     << "\n";
  if (hit_infinite) os << "tail: all-" << '1' << " (absorbing infinite block)\n";
  if (hit_unknown) os << "tail: unknown (budget exhausted)\n";
  return os.str();
}

TallyOutput tally_output(const ThetaPredicate& theta, const BitPattern& x,
                         size_t n_blocks, uint64_t budget, size_t render_len) {
  TallyOutput out;
  for (size_t n = 0; n < n_blocks; ++n) {
    TallyValue t = theta_of(theta, x, n, budget);
    out.blocks.push_back(t);
    if (t.is_unknown()) {
      out.hit_unknown = true;
      break;
    }
    if (t.is_infinite()) {
      out.hit_infinite = true;
      if (out.rendered.size() < render_len) {
        out.rendered.append_run(1, render_len - out.rendered.size());
      }
      break;
    }
    out.rendered.append_run(1, t.value);
    out.rendered.push_back(0);
  }
  return out;
}

namespace {

struct Commit {
  BitString out;
  bool resolved = false;  // hit an Infinite block with known fill
  int fill = 1;
};

// Output bits committed by the finite (phi: plain, psi: joined) prefix rho.
// Block n needs theta on X|n; psi additionally needs the fill bit Y(n) for
// nonempty blocks and for the absorbing tail.
Commit commit_blocks(const MutationSchedule& sched, TallyFunctional::Mode mode,
                     const BitString& rho) {
  Commit c;
  if (mode == TallyFunctional::Mode::Phi) {
    for (size_t n = 0; n <= rho.size(); ++n) {
      TallyValue t = theta(sched, rho.prefix(n), n);
      if (t.is_infinite()) {
        c.resolved = true;
        c.fill = 1;
        return c;
      }
      c.out.append_run(1, static_cast<size_t>(t.value));
      c.out.push_back(0);
    }
    return c;
  }
  // Psi: even positions drive theta, odd positions fill the blocks.
  size_t x_avail = (rho.size() + 1) / 2;
  BitString x;
  for (size_t i = 0; 2 * i < rho.size(); ++i) x.push_back(rho.bit(2 * i));
  for (size_t n = 0; n <= x_avail; ++n) {
    TallyValue t = theta(sched, x.prefix(n), n);
    if (t.is_infinite()) {
      if (rho.size() < 2 * n + 2) return c;  // tail fill still unread
      c.resolved = true;
      c.fill = rho.bit(2 * n + 1);
      return c;
    }
    if (t.value == 0) {
      c.out.push_back(0);  // separator only; no fill bit consumed
      continue;
    }
    if (rho.size() < 2 * n + 2) return c;  // fill bit still unread
    c.out.append_run(rho.bit(2 * n + 1), static_cast<size_t>(t.value));
    c.out.push_back(0);
  }
  return c;
}

size_t commit_cap(uint64_t horizon, size_t input_len) {
  return (input_len + 2) * (static_cast<size_t>(horizon) + 2) + 2;
}

}  // namespace

TallyFunctional::TallyFunctional(MutationSchedule sched, Mode mode)
    : sched_(std::move(sched)), mode_(mode) {
  auto shared = std::make_shared<const MutationSchedule>(sched_);
  uint64_t horizon = sched_.horizon();
  std::string name = (mode == Mode::Phi ? "tally-phi[" : "tally-psi[") +
                     sched_.base().render() + ",T=" +
                     std::to_string(horizon) + "]";
  auto step = [shared, mode, horizon](const BitString& rho) {
    Commit c = commit_blocks(*shared, mode, rho);
    size_t cap = commit_cap(horizon, rho.size());
    if (c.resolved && c.out.size() < cap) {
      c.out.append_run(c.fill, cap - c.out.size());
    }
    return c.out.size() > cap ? c.out.prefix(cap) : c.out;
  };
  auto use = [mode](size_t n) {
    return mode == Mode::Phi ? n : 2 * n + 2;
  };
  tt_ = TTFunctional(name, std::move(step), std::move(use));
}

BitString TallyFunctional::committed(const BitString& rho,
                                     size_t cap_bits) const {
  Commit c = commit_blocks(sched_, mode_, rho);
  if (c.resolved && c.out.size() < cap_bits) {
    c.out.append_run(c.fill, cap_bits - c.out.size());
  }
  return c.out.size() > cap_bits ? c.out.prefix(cap_bits) : c.out;
}

std::optional<BitPattern> TallyFunctional::resolved_point(
    const BitString& rho) const {
  Commit c = commit_blocks(sched_, mode_, rho);
  if (!c.resolved) return std::nullopt;
  return BitPattern::eventually(c.out, c.fill);
}

TallyOutput TallyFunctional::output(const BitPattern& input, size_t n_blocks,
                                    size_t render_len) const {
  TallyOutput out;
  BitPattern x = mode_ == Mode::Psi ? split_component(input, 2, 0) : input;
  std::optional<BitPattern> y;
  if (mode_ == Mode::Psi) y = split_component(input, 2, 1);
  for (size_t n = 0; n < n_blocks; ++n) {
    TallyValue t = theta(sched_, x, n);
    out.blocks.push_back(t);
    int fill = y ? y->bit(n) : 1;
    if (t.is_infinite()) {
      out.hit_infinite = true;
      if (out.rendered.size() < render_len) {
        out.rendered.append_run(fill, render_len - out.rendered.size());
      }
      break;
    }
    out.rendered.append_run(fill, static_cast<size_t>(t.value));
    out.rendered.push_back(0);
  }
  return out;
}

TallyFunctional make_phi_a(const MutationSchedule& sched) {
  return TallyFunctional(sched, TallyFunctional::Mode::Phi);
}

TallyFunctional make_psi(const MutationSchedule& sched) {
  return TallyFunctional(sched, TallyFunctional::Mode::Psi);
}

std::string DecompositionEntry::key() const {
  if (pattern) {
    return (kind == Kind::Escape ? "a:" : "t:") + pattern->render();
  }
  return "t:" + committed.str() + "+?";
}

Dyadic AtomDecomposition::total() const {
  Dyadic sum;
  for (const auto& e : entries) sum += e.mass;
  return sum;
}

std::string AtomDecomposition::to_text() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    if (e.pattern) {
      os << e.pattern->render();
    } else {
      os << e.committed.str() << "+?";
    }
    os << "\t" << e.mass.to_fraction() << "\n";
  }
  return os.str();
}

namespace {

// Eventually periodic output of the phi-mode functional on input A_s:
// finitely many settling blocks, then (1^c 0) repeating where c is the least
// stage index of the sequence [A_s].
BitPattern stage_output_pattern(const MutationSchedule& sched, uint64_t s) {
  const BitPattern& x = sched.approximant(s);
  uint64_t c = 0;
  while (!(sched.approximant(c) == x)) ++c;
  size_t stable_from = 0;
  for (uint64_t e = 0; e < c; ++e) {
    auto d = first_difference(x, sched.approximant(e));
    stable_from = std::max(stable_from, *d + 1);
  }
  BitString prefix;
  for (size_t n = 0; n < stable_from; ++n) {
    TallyValue t = theta(sched, x, n);
    prefix.append_run(1, static_cast<size_t>(t.value));
    prefix.push_back(0);
  }
  BitString tail = BitString::ones(static_cast<size_t>(c));
  tail.push_back(0);
  return BitPattern(std::move(prefix), std::move(tail));
}

struct Explorer {
  const MutationSchedule& sched;
  const TallyFunctional& fn;
  TallyFunctional::Mode mode;
  size_t leaf_depth;   // input-tree depth of tracking leaves (joined for psi)
  size_t node_guard;
  size_t nodes = 0;
  std::map<std::string, DecompositionEntry> merged;

  void add(DecompositionEntry e) {
    auto [it, fresh] = merged.emplace(e.key(), e);
    if (!fresh) {
      it->second.mass += e.mass;
      it->second.stage = std::min(it->second.stage, e.stage);
    }
  }

  std::vector<uint64_t> survivors(const BitString& rho) const {
    size_t xlen =
        mode == TallyFunctional::Mode::Phi ? rho.size() : (rho.size() + 1) / 2;
    BitString x;
    if (mode == TallyFunctional::Mode::Phi) {
      x = rho;
    } else {
      for (size_t i = 0; 2 * i < rho.size(); ++i) x.push_back(rho.bit(2 * i));
    }
    std::vector<uint64_t> out;
    for (uint64_t s = 0; s <= sched.horizon(); ++s) {
      if (sched.approximant(s).first(xlen) == x) out.push_back(s);
    }
    return out;
  }

  void walk(const BitString& rho) {
    if (++nodes > node_guard) {
      throw GuardError("decomposition tree guard exceeded (" +
                       std::to_string(node_guard) + " nodes)");
    }
    if (auto pt = fn.resolved_point(rho)) {
      DecompositionEntry e;
      e.kind = DecompositionEntry::Kind::Escape;
      e.pattern = *pt;
      e.committed = pt->first(rho.size() + 1);
      e.mass = Dyadic::pow2_neg(static_cast<unsigned>(rho.size()));
      add(std::move(e));
      return;
    }
    std::vector<uint64_t> live = survivors(rho);
    if (!live.empty() && rho.size() >= leaf_depth) {
      DecompositionEntry e;
      e.kind = DecompositionEntry::Kind::Tracking;
      e.stage = live.front();
      e.mass = Dyadic::pow2_neg(static_cast<unsigned>(rho.size()));
      e.committed = fn.committed(rho, rho.size() + 2);
      if (mode == TallyFunctional::Mode::Phi) {
        e.pattern = stage_output_pattern(sched, live.front());
      }
      add(std::move(e));
      return;
    }
    // Either still splitting, or (psi) an escape whose tail fill bit is a
    // level or two below.
    walk(rho.extended(0));
    walk(rho.extended(1));
  }
};

}  // namespace

AtomDecomposition tally_decomposition(const MutationSchedule& sched,
                                      TallyFunctional::Mode mode, size_t depth,
                                      size_t node_guard) {
  size_t d_eff = std::max<size_t>({depth, sched.separation_depth(), 1});
  TallyFunctional fn(sched, mode);
  Explorer ex{sched, fn, mode,
              mode == TallyFunctional::Mode::Phi ? d_eff : 2 * d_eff,
              node_guard};
  ex.walk(BitString());
  AtomDecomposition out;
  out.mode = mode;
  out.depth = d_eff;
  for (auto& [key, e] : ex.merged) out.entries.push_back(std::move(e));
  return out;
}

MeasureOracle tally_measure_oracle(const MutationSchedule& sched,
                                   TallyFunctional::Mode mode,
                                   size_t guard_bits) {
  auto fn = std::make_shared<const TallyFunctional>(sched, mode);
  return MeasureOracle(
      fn->tt().name(),
      [fn, guard_bits](const BitString& sigma, unsigned) {
        return induced_measure_pruned(fn->tt(), sigma, guard_bits);
      },
      /*exact=*/true);
}

BitPattern join_patterns(const std::vector<BitPattern>& parts) {
  if (parts.empty()) throw DomainError("join of zero patterns");
  size_t arity = parts.size();
  size_t max_prefix = 0;
  size_t period = 1;
  for (const auto& p : parts) {
    max_prefix = std::max(max_prefix, p.prefix().size());
    period = std::lcm(period, p.tail().size());
    if (period > (size_t{1} << 16)) throw GuardError("join period too large");
  }
  auto bit_at = [&](size_t i) { return parts[i % arity].bit(i / arity); };
  BitString prefix, tail;
  for (size_t i = 0; i < arity * max_prefix; ++i) prefix.push_back(bit_at(i));
  for (size_t i = arity * max_prefix; i < arity * (max_prefix + period); ++i) {
    tail.push_back(bit_at(i));
  }
  return BitPattern(std::move(prefix), std::move(tail));
}

BitPattern split_component(const BitPattern& joined, size_t arity, size_t j) {
  if (j >= arity) throw DomainError("component index out of range");
  size_t zp = joined.prefix().size();
  size_t zt = joined.tail().size();
  size_t k0 = 0;
  while (j + k0 * arity < zp) ++k0;
  size_t period = zt / std::gcd(zt, arity);
  BitString prefix, tail;
  for (size_t k = 0; k < k0; ++k) prefix.push_back(joined.bit(j + k * arity));
  for (size_t k = 0; k < period; ++k) {
    tail.push_back(joined.bit(j + (k0 + k) * arity));
  }
  return BitPattern(std::move(prefix), std::move(tail));
}

MutationSchedule join_schedules(const std::vector<MutationSchedule>& parts) {
  if (parts.empty()) throw DomainError("join of zero schedules");
  size_t arity = parts.size();
  std::vector<BitPattern> bases;
  for (const auto& p : parts) bases.push_back(p.base());
  BitPattern base = join_patterns(bases);
  std::map<uint64_t, std::vector<size_t>> flips;
  for (size_t j = 0; j < arity; ++j) {
    for (const auto& e : parts[j].events()) {
      for (size_t p : e.flips) flips[e.stage].push_back(p * arity + j);
    }
  }
  std::vector<MutationEvent> events;
  for (auto& [stage, positions] : flips) {
    std::sort(positions.begin(), positions.end());
    events.push_back({stage, std::move(positions)});
  }
  return MutationSchedule(std::move(base), std::move(events));
}

MeasureOracle bind_term_measures(
    const std::vector<std::vector<unsigned>>& terms,
    const std::map<unsigned, MutationSchedule>& schedules, size_t guard_bits) {
  if (terms.empty()) throw DomainError("no terms to bind");
  std::vector<MeasureOracle> parts;
  for (const auto& term : terms) {
    if (term.empty()) throw DomainError("empty term");
    std::vector<MutationSchedule> subs;
    for (unsigned b : term) {
      auto it = schedules.find(b);
      if (it == schedules.end()) {
        throw DomainError("no schedule bound for basic " + std::to_string(b));
      }
      subs.push_back(it->second);
    }
    MutationSchedule sched = subs.size() == 1 ? subs.front() : join_schedules(subs);
    parts.push_back(
        tally_measure_oracle(sched, TallyFunctional::Mode::Phi, guard_bits));
  }
  return uniform_mix(std::move(parts));
}

}  // namespace cantor
