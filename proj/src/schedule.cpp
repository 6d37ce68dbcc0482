#include "cantor/schedule.hpp"

#include <algorithm>
#include <sstream>

#include "cantor/error.hpp"

namespace cantor {

std::string TallyValue::render() const {
  switch (kind) {
    case Kind::Finite:
      return std::to_string(value);
    case Kind::Infinite:
      return "inf";
    case Kind::Unknown:
      return "unknown@" + std::to_string(value);
  }
  return "?";
}

MutationSchedule::MutationSchedule(BitPattern base,
                                   std::vector<MutationEvent> events)
    : events_(std::move(events)) {
  uint64_t prev = 0;
  for (const auto& e : events_) {
    if (e.stage == 0) throw ParseError("event stages start at 1");
    if (e.stage <= prev) throw ParseError("stages must be strictly increasing");
    if (e.flips.empty()) throw ParseError("event flip set must be nonempty");
    prev = e.stage;
    for (size_t p : e.flips) max_flip_ = std::max(max_flip_, p);
  }
  horizon_ = events_.empty() ? 0 : events_.back().stage;

  approximants_.reserve(horizon_ + 1);
  approximants_.push_back(base);
  size_t next_event = 0;
  for (uint64_t s = 1; s <= horizon_; ++s) {
    BitPattern current = approximants_.back();
    if (next_event < events_.size() && events_[next_event].stage == s) {
      for (size_t p : events_[next_event].flips) {
        current = current.with_flipped(p);
      }
      ++next_event;
    }
    approximants_.push_back(std::move(current));
  }

  for (size_t a = 0; a + 1 < approximants_.size(); ++a) {
    for (size_t b = a + 1; b < approximants_.size(); ++b) {
      if (auto d = first_difference(approximants_[a], approximants_[b])) {
        separation_depth_ = std::max(separation_depth_, *d + 1);
      }
    }
  }
}

const BitPattern& MutationSchedule::approximant(uint64_t s) const {
  if (s >= approximants_.size()) {
    throw DomainError("stage " + std::to_string(s) + " beyond horizon " +
                      std::to_string(horizon_));
  }
  return approximants_[s];
}

MutationSchedule MutationSchedule::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<BitPattern> base;
  std::vector<MutationEvent> events;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "schedule") {
      saw_header = true;
      continue;
    }
    if (tok == "base:") {
      std::string pat;
      if (!(ls >> pat)) throw ParseError("base: needs a pattern");
      base = BitPattern::parse(pat);
      continue;
    }
    if (tok == "stage") {
      uint64_t s;
      std::string colon_stage, flip;
      if (!(ls >> colon_stage)) throw ParseError("stage needs a number");
      if (!colon_stage.empty() && colon_stage.back() == ':') {
        colon_stage.pop_back();
      }
      try {
        s = std::stoull(colon_stage);
      } catch (...) {
        throw ParseError("bad stage number '" + colon_stage + "'");
      }
      if (!(ls >> flip) || flip != "flip") {
        throw ParseError("stage line looks like 'stage N: flip P ...'");
      }
      MutationEvent ev;
      ev.stage = s;
      size_t p;
      while (ls >> p) ev.flips.push_back(p);
      std::sort(ev.flips.begin(), ev.flips.end());
      ev.flips.erase(std::unique(ev.flips.begin(), ev.flips.end()),
                     ev.flips.end());
      events.push_back(std::move(ev));
      continue;
    }
    throw ParseError("unexpected schedule line '" + line + "'");
  }
  if (!saw_header) throw ParseError("schedule file must start with 'schedule'");
  if (!base) throw ParseError("schedule file needs a 'base:' line");
  return MutationSchedule(std::move(*base), std::move(events));
}

std::string MutationSchedule::render() const {
  std::ostringstream os;
  os << "schedule\nbase: " << base().render() << "\n";
  for (const auto& e : events_) {
    os << "stage " << e.stage << ": flip";
    for (size_t p : e.flips) os << " " << p;
    os << "\n";
  }
  return os.str();
}

TallyValue theta(const MutationSchedule& sched, const BitString& x, size_t n) {
  if (x.size() < n) {
    throw DomainError("theta needs " + std::to_string(n) + " input bits, got " +
                      std::to_string(x.size()));
  }
  BitString want = x.prefix(n);
  for (uint64_t s = 0; s <= sched.horizon(); ++s) {
    if (sched.approximant(s).first(n) == want) return TallyValue::finite(s);
  }
  return TallyValue::infinite();
}

TallyValue theta(const MutationSchedule& sched, const BitPattern& x, size_t n) {
  return theta(sched, x.first(n), n);
}

std::string CaseLabel::render() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::StageMatch:
      os << "stage-match s=" << stage << " stable-from=" << point;
      break;
    case Kind::OffSchedule:
      os << "off-schedule infinite-at=" << point;
      break;
    case Kind::LimitMatch:
      os << "limit-match";
      break;
  }
  return os.str();
}

CaseLabel classify_input(const MutationSchedule& sched, const BitPattern& x) {
  // The limit takes precedence: with cancelling flips X may equal both an
  // intermediate A_s and A_T, and the limit reading is the schedule's.
  if (x == sched.limit()) return {CaseLabel::Kind::LimitMatch, 0, 0};

  std::optional<uint64_t> match;
  for (uint64_t s = 0; s < sched.horizon(); ++s) {
    if (x == sched.approximant(s)) {
      match = s;
      break;
    }
  }
  if (match) {
    // theta(X, n) settles at *match once every earlier stage is refuted.
    size_t stable_from = 0;
    for (uint64_t s = 0; s < *match; ++s) {
      auto d = first_difference(x, sched.approximant(s));
      stable_from = std::max(stable_from, *d + 1);
    }
    return {CaseLabel::Kind::StageMatch, *match, stable_from};
  }

  // Off schedule: every stage is eventually refuted, and theta(X, n) is
  // Infinite exactly from the deepest refutation point on.
  size_t witness = 0;
  for (uint64_t s = 0; s <= sched.horizon(); ++s) {
    auto d = first_difference(x, sched.approximant(s));
    witness = std::max(witness, *d + 1);
  }
  return {CaseLabel::Kind::OffSchedule, 0, witness};
}

}  // namespace cantor
