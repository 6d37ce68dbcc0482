#include "cantor/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cantor/error.hpp"
#include "cantor/exec.hpp"
#include "cantor/functional.hpp"
#include "cantor/lattice.hpp"
#include "cantor/measure.hpp"
#include "cantor/mltest.hpp"
#include "cantor/schedule.hpp"
#include "cantor/tally.hpp"

namespace cantor::cli {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

BitString parse_bits(const std::string& s) {
  return s == "e" ? BitString() : BitString(s);
}

// lebesgue | point:PATTERN | phi:SCHEDFILE | psi:SCHEDFILE | broken-one
MeasureOracle parse_measure_spec(const std::string& spec, size_t guard_bits) {
  if (spec == "lebesgue") return lebesgue_measure();
  if (spec == "broken-one") {
    return MeasureOracle(
        "broken-one",
        [](const BitString&, unsigned) { return Dyadic::one(); },
        /*exact=*/true);
  }
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string head = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    if (head == "point") return point_mass(BitPattern::parse(arg));
    if (head == "phi" || head == "psi") {
      MutationSchedule sched = MutationSchedule::parse(slurp(arg));
      return tally_measure_oracle(sched,
                                  head == "phi" ? TallyFunctional::Mode::Phi
                                                : TallyFunctional::Mode::Psi,
                                  guard_bits);
    }
  }
  throw ParseError("unknown measure spec '" + spec +
                   "' (try lebesgue, point:PAT, phi:FILE, psi:FILE)");
}

// identity | constant:PATTERN | project-even | tally:SCHEDFILE |
// tally-psi:SCHEDFILE | path to a table file
TTFunctional parse_functional_spec(const std::string& spec) {
  if (spec == "identity") return identity_functional();
  if (spec == "project-even") return project_even();
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string head = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    if (head == "constant") return constant_functional(BitPattern::parse(arg));
    if (head == "tally") {
      return make_phi_a(MutationSchedule::parse(slurp(arg))).tt();
    }
    if (head == "tally-psi") {
      return make_psi(MutationSchedule::parse(slurp(arg))).tt();
    }
    throw ParseError("unknown functional spec '" + spec + "'");
  }
  return parse_functional_file(spec, slurp(spec));
}

// zeros[:N] | zeros-late[:N] | inflated[:N] | geometric[:N,S] | file path
StagedTest parse_test_spec(const std::string& spec) {
  auto split_arg = [](const std::string& s, uint64_t def) {
    return s.empty() ? def : std::stoull(s);
  };
  std::string head = spec, arg;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    arg = spec.substr(colon + 1);
  }
  if (head == "zeros") return StagedTest::zeros(split_arg(arg, 12));
  if (head == "zeros-late") return StagedTest::zeros_late(split_arg(arg, 12));
  if (head == "inflated") return StagedTest::inflated(split_arg(arg, 12));
  if (head == "geometric") {
    uint64_t comps = 8, stages = 8;
    if (!arg.empty()) {
      auto comma = arg.find(',');
      comps = std::stoull(arg.substr(0, comma));
      if (comma != std::string::npos) stages = std::stoull(arg.substr(comma + 1));
    }
    return StagedTest::geometric(comps, stages);
  }
  return StagedTest::parse(slurp(spec));
}

struct Options {
  int threads = 0;
  bool serial = false;
  Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }
};

int run_checked(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"desk-scale computable measures, tally functionals and "
               "finite-lattice degree profiles"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--threads", opt.threads, "worker threads (0 = default)");
  app.add_flag("--serial", opt.serial, "run kernels on the serial reference path");

  // ---- lattice ----------------------------------------------------------
  auto* lat = app.add_subcommand("lattice", "finite distributive lattices");
  lat->require_subcommand(1);
  std::string lat_file;
  for (const char* sub : {"check", "levels", "sets", "iso", "profiles", "recipe"}) {
    lat->add_subcommand(sub)->add_option("file", lat_file, "lattice file")
        ->required();
  }

  // ---- measure ----------------------------------------------------------
  auto* meas = app.add_subcommand("measure", "measure oracles and audits");
  meas->require_subcommand(1);
  std::string m_spec, m_spec2, m_sigma = "e", m_delta = "1/8", m_alpha = "1/2";
  unsigned m_depth = 6, m_precision = 16;
  size_t m_guard = kDefaultGuardBits;
  auto* m_eval = meas->add_subcommand("eval", "evaluate mu(sigma)");
  m_eval->add_option("spec", m_spec)->required();
  m_eval->add_option("--sigma", m_sigma);
  m_eval->add_option("--precision", m_precision);
  m_eval->add_option("--guard-bits", m_guard);
  auto* m_audit = meas->add_subcommand("audit", "additivity audit");
  m_audit->add_option("spec", m_spec)->required();
  m_audit->add_option("--depth", m_depth);
  m_audit->add_option("--precision", m_precision);
  m_audit->add_option("--guard-bits", m_guard);
  auto* m_atoms = meas->add_subcommand("atoms", "atom candidate cylinders");
  m_atoms->add_option("spec", m_spec)->required();
  m_atoms->add_option("--depth", m_depth);
  m_atoms->add_option("--delta", m_delta);
  m_atoms->add_option("--guard-bits", m_guard);
  auto* m_convex = meas->add_subcommand("convex", "evaluate a convex sum");
  m_convex->add_option("mu", m_spec)->required();
  m_convex->add_option("nu", m_spec2)->required();
  m_convex->add_option("--alpha", m_alpha);
  m_convex->add_option("--sigma", m_sigma);
  m_convex->add_option("--precision", m_precision);
  m_convex->add_option("--guard-bits", m_guard);

  // ---- functional -------------------------------------------------------
  auto* fun = app.add_subcommand("functional", "truth-table functionals");
  fun->require_subcommand(1);
  std::string f_spec, f_rho, f_sigma, f_method = "full";
  size_t f_depth = 6, f_guard = kDefaultGuardBits;
  auto* f_apply = fun->add_subcommand("apply", "longest determined output");
  f_apply->add_option("spec", f_spec)->required();
  f_apply->add_option("--rho", f_rho)->required();
  auto* f_induced = fun->add_subcommand("induced", "induced measure of sigma");
  f_induced->add_option("spec", f_spec)->required();
  f_induced->add_option("--sigma", f_sigma);
  f_induced->add_option("--guard-bits", f_guard);
  f_induced->add_option("--method", f_method)
      ->check(CLI::IsMember({"full", "pruned"}));
  auto* f_verify = fun->add_subcommand("verify", "contract audit");
  f_verify->add_option("spec", f_spec)->required();
  f_verify->add_option("--depth", f_depth);

  // ---- tally ------------------------------------------------------------
  auto* tal = app.add_subcommand("tally", "tally functionals");
  tal->require_subcommand(1);
  std::string t_file, t_input = "+0", t_mode = "phi";
  size_t t_blocks = 8, t_depth = 8, t_render = 0, t_n = 0;
  uint64_t t_budget = 64;
  auto* t_sim = tal->add_subcommand("simulate", "blocks and rendering");
  t_sim->add_option("schedule", t_file)->required();
  t_sim->add_option("--input", t_input);
  t_sim->add_option("--blocks", t_blocks);
  t_sim->add_option("--budget", t_budget);
  t_sim->add_option("--mode", t_mode)->check(CLI::IsMember({"phi", "psi"}));
  t_sim->add_option("--render-length", t_render);
  auto* t_meas = tal->add_subcommand("measure", "induced-measure decomposition");
  t_meas->add_option("schedule", t_file)->required();
  t_meas->add_option("--mode", t_mode)->check(CLI::IsMember({"phi", "psi"}));
  t_meas->add_option("--depth", t_depth);
  auto* t_theta = tal->add_subcommand("theta", "stage search and case label");
  t_theta->add_option("schedule", t_file)->required();
  t_theta->add_option("--input", t_input);
  t_theta->add_option("--n", t_n);

  // ---- test -------------------------------------------------------------
  auto* tst = app.add_subcommand("test", "staged randomness tests");
  tst->require_subcommand(1);
  std::string ts_spec, ts_measure = "lebesgue", ts_input = "+0";
  std::string ts_target;
  uint64_t ts_i = 4, ts_s = 4, ts_n = 0, ts_budget = 64;
  unsigned ts_precision = 16;
  size_t ts_guard = kDefaultGuardBits;
  auto* ts_bound = tst->add_subcommand("bound", "measure-bound audit");
  ts_bound->add_option("test", ts_spec)->required();
  ts_bound->add_option("--measure", ts_measure);
  ts_bound->add_option("--i", ts_i);
  ts_bound->add_option("--s", ts_s);
  ts_bound->add_option("--precision", ts_precision);
  ts_bound->add_option("--target", ts_target);
  ts_bound->add_option("--guard-bits", ts_guard);
  auto* ts_capture = tst->add_subcommand("capture", "least capturing stage");
  ts_capture->add_option("test", ts_spec)->required();
  ts_capture->add_option("--input", ts_input);
  ts_capture->add_option("--n", ts_n);
  ts_capture->add_option("--budget", ts_budget);

  std::vector<std::string> argv_copy = args;
  std::vector<char*> argv;
  argv.reserve(argv_copy.size() + 1);
  static std::string prog = "cantor";
  argv.push_back(prog.data());
  for (auto& a : argv_copy) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  if (opt.threads > 0) set_threads(opt.threads);
  Exec exec = opt.exec();

  // ---- lattice dispatch -------------------------------------------------
  if (lat->parsed()) {
    FiniteLattice l = FiniteLattice::parse(slurp(lat_file));
    if (lat->get_subcommand("check")->parsed()) {
      auto rep = check_distributive(l, exec);
      out << rep.to_text(l);
      return rep.distributive ? 0 : 1;
    }
    if (lat->get_subcommand("levels")->parsed()) {
      auto levels = compute_levels(l);
      std::vector<size_t> order(l.size());
      for (size_t i = 0; i < l.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return l.element_name(a) < l.element_name(b);
      });
      unsigned max_level = 0;
      for (auto lv : levels) max_level = std::max(max_level, lv);
      std::vector<size_t> sizes(max_level + 1, 0);
      for (size_t e : order) {
        out << l.element_name(e) << ": " << levels[e] << "\n";
        ++sizes[levels[e]];
      }
      out << "level sizes:";
      for (unsigned lv = 1; lv <= max_level; ++lv) out << " " << sizes[lv];
      out << "\n";
      return 0;
    }
    if (lat->get_subcommand("sets")->parsed()) {
      SetSystem s = build_set_system(l);
      out << s.render(l);
      out << "basics: " << s.basic_count << " (level-two:";
      for (unsigned b : s.level_two_basics) out << " A" << b;
      out << "; meet-irreducible:";
      for (unsigned b : s.meet_irreducible_basics) out << " A" << b;
      out << ")\n";
      return 0;
    }
    if (lat->get_subcommand("iso")->parsed()) {
      SetSystem s = build_set_system(l);
      auto rep = verify_set_system_iso(l, s, exec);
      out << rep.to_text();
      return rep.pass() ? 0 : 1;
    }
    if (lat->get_subcommand("profiles")->parsed()) {
      SetSystem s = build_set_system(l);
      auto rep = lr_profiles(l, s, exec);
      out << rep.to_csv(l);
      return rep.pass() ? 0 : 1;
    }
    SetSystem s = build_set_system(l);
    out << emit_measure_recipe(l, s);
    return 0;
  }

  // ---- measure dispatch -------------------------------------------------
  if (meas->parsed()) {
    if (m_eval->parsed()) {
      MeasureOracle mu = parse_measure_spec(m_spec, m_guard);
      BitString sigma = parse_bits(m_sigma);
      out << measure_report_line(sigma, mu.eval(sigma, m_precision),
                                 m_precision)
          << "\n";
      return 0;
    }
    if (m_audit->parsed()) {
      MeasureOracle mu = parse_measure_spec(m_spec, m_guard);
      auto rep = check_additivity(mu, m_depth, m_precision, exec);
      out << rep.to_text();
      return rep.pass() ? 0 : 1;
    }
    if (m_atoms->parsed()) {
      MeasureOracle mu = parse_measure_spec(m_spec, m_guard);
      auto cands = atom_candidates(mu, m_depth, Dyadic::parse(m_delta), exec);
      for (const auto& c : cands) {
        out << c.sigma << "\t" << c.mass.to_fraction() << "\n";
      }
      out << "candidates: " << cands.size() << "\n";
      return 0;
    }
    MeasureOracle mu = parse_measure_spec(m_spec, m_guard);
    MeasureOracle nu = parse_measure_spec(m_spec2, m_guard);
    MeasureOracle rho = convex_sum(mu, nu, Dyadic::parse(m_alpha));
    BitString sigma = parse_bits(m_sigma);
    out << measure_report_line(sigma, rho.eval(sigma, m_precision), m_precision)
        << "\n";
    return 0;
  }

  // ---- functional dispatch ----------------------------------------------
  if (fun->parsed()) {
    TTFunctional phi = parse_functional_spec(f_spec);
    if (f_apply->parsed()) {
      BitString res = tt_apply(phi, parse_bits(f_rho));
      out << (res.empty() ? "(empty)" : res.str()) << "\n";
      return 0;
    }
    if (f_induced->parsed()) {
      BitString sigma = parse_bits(f_sigma);
      Dyadic v = f_method == "pruned"
                     ? induced_measure_pruned(phi, sigma, f_guard)
                     : induced_measure_full(phi, sigma, f_guard, exec);
      out << v.to_fraction() << "\n";
      return 0;
    }
    auto rep = tt_verify(phi, f_depth, exec);
    out << rep.to_text();
    return rep.pass() ? 0 : 1;
  }

  // ---- tally dispatch ----------------------------------------------------
  if (tal->parsed()) {
    MutationSchedule sched = MutationSchedule::parse(slurp(t_file));
    auto mode = t_mode == "phi" ? TallyFunctional::Mode::Phi
                                : TallyFunctional::Mode::Psi;
    if (t_sim->parsed()) {
      TallyFunctional fn(sched, mode);
      size_t render_len = t_render;
      if (render_len == 0) render_len = t_blocks * 2 + 4;
      auto result = fn.output(BitPattern::parse(t_input), t_blocks, render_len);
      out << result.to_text();
      return 0;
    }
    if (t_meas->parsed()) {
      auto decomp = tally_decomposition(sched, mode, t_depth);
      out << decomp.to_text();
      out << "total\t" << decomp.total().to_fraction() << "\n";
      return 0;
    }
    BitPattern x = BitPattern::parse(t_input);
    out << "theta(" << t_n << ") = " << theta(sched, x, t_n).render() << "\n";
    out << "classification: " << classify_input(sched, x).render() << "\n";
    return 0;
  }

  // ---- test dispatch ------------------------------------------------------
  if (tst->parsed()) {
    StagedTest test = parse_test_spec(ts_spec);
    if (ts_bound->parsed()) {
      MeasureOracle mu = parse_measure_spec(ts_measure, ts_guard);
      std::optional<Dyadic> target;
      if (!ts_target.empty()) target = Dyadic::parse(ts_target);
      auto rep = check_bound(test, mu, ts_i, ts_s, ts_precision, target);
      out << rep.to_text();
      return rep.pass ? 0 : 1;
    }
    TallyValue v =
        capture_stage(test, BitPattern::parse(ts_input), ts_n, ts_budget);
    out << "capture(" << ts_n << ") = " << v.render() << "\n";
    return 0;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return run_checked(args, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    err << "precision: " << e.what() << "\n";
    return 2;
  } catch (const OracleError& e) {
    err << "oracle: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cantor::cli
