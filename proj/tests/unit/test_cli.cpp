#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cantor/cli.hpp"
#include "cantor/exec.hpp"

// Golden-file coverage for every documented subcommand. Outputs must be
// byte-identical across runs and thread counts.

namespace {

struct Invocation {
  std::string golden;                 // file under tests/golden/
  std::vector<std::string> args;     // {DATA} expands to the data dir
  int expected_exit;
};

std::vector<std::string> expand(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (auto a : args) {
    if (auto pos = a.find("{DATA}"); pos != std::string::npos) {
      a.replace(pos, 6, CANTOR_DATA_DIR);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string run_capture(const std::vector<std::string>& args, int* exit_code) {
  std::ostringstream out, err;
  *exit_code = cantor::cli::run(expand(args), out, err);
  return out.str() + (err.str().empty() ? "" : "stderr: " + err.str());
}

const std::vector<Invocation>& invocations() {
  static const std::vector<Invocation> cases = {
      {"lattice_check_diamond", {"lattice", "check", "{DATA}/diamond.lat"}, 0},
      {"lattice_check_m3", {"lattice", "check", "{DATA}/m3.lat"}, 1},
      {"lattice_check_n5", {"lattice", "check", "{DATA}/n5.lat"}, 1},
      {"lattice_levels_six", {"lattice", "levels", "{DATA}/six.lat"}, 0},
      {"lattice_sets_six", {"lattice", "sets", "{DATA}/six.lat"}, 0},
      {"lattice_iso_six", {"lattice", "iso", "{DATA}/six.lat"}, 0},
      {"lattice_profiles_six", {"lattice", "profiles", "{DATA}/six.lat"}, 0},
      {"lattice_profiles_diamond",
       {"lattice", "profiles", "{DATA}/diamond.lat"},
       0},
      {"lattice_recipe_six", {"lattice", "recipe", "{DATA}/six.lat"}, 0},
      {"measure_eval_lebesgue",
       {"measure", "eval", "lebesgue", "--sigma", "010", "--precision", "8"},
       0},
      {"measure_eval_phi",
       {"measure", "eval", "phi:{DATA}/flip1.sched", "--sigma", "0101"},
       0},
      {"measure_audit_lebesgue",
       {"measure", "audit", "lebesgue", "--depth", "4", "--precision", "10"},
       0},
      {"measure_audit_broken",
       {"measure", "audit", "broken-one", "--depth", "2", "--precision", "10"},
       1},
      {"measure_atoms_phi",
       {"measure", "atoms", "phi:{DATA}/flip1.sched", "--depth", "4",
        "--delta", "1/8"},
       0},
      {"measure_convex",
       {"measure", "convex", "point:+0", "lebesgue", "--alpha", "1/2",
        "--sigma", "0"},
       0},
      {"functional_apply",
       {"functional", "apply", "project-even", "--rho", "1011"},
       0},
      {"functional_induced",
       {"functional", "induced", "identity", "--sigma", "010"},
       0},
      {"functional_induced_pruned",
       {"functional", "induced", "tally:{DATA}/flip1.sched", "--sigma", "0011",
        "--method", "pruned"},
       0},
      {"functional_verify",
       {"functional", "verify", "project-even", "--depth", "5"},
       0},
      {"tally_simulate",
       {"tally", "simulate", "{DATA}/flip1.sched", "--input", "10+0",
        "--blocks", "3"},
       0},
      {"tally_simulate_escape",
       {"tally", "simulate", "{DATA}/flip1.sched", "--input", "01+0",
        "--blocks", "5", "--render-length", "7"},
       0},
      {"tally_simulate_psi",
       {"tally", "simulate", "{DATA}/flip1.sched", "--input", "1+10",
        "--blocks", "4", "--mode", "psi"},
       0},
      {"tally_measure",
       {"tally", "measure", "{DATA}/flip1.sched", "--mode", "phi", "--depth",
        "4"},
       0},
      {"tally_theta",
       {"tally", "theta", "{DATA}/flip2.sched", "--input", "01+0", "--n", "2"},
       0},
      {"test_bound_zeros",
       {"test", "bound", "zeros:6", "--measure", "lebesgue", "--i", "3",
        "--s", "2"},
       0},
      {"test_bound_inflated",
       {"test", "bound", "inflated:6", "--measure", "lebesgue", "--i", "2",
        "--s", "1"},
       1},
      {"test_bound_file",
       {"test", "bound", "{DATA}/example.test", "--measure", "lebesgue",
        "--i", "1", "--s", "3"},
       0},
      {"test_capture",
       {"test", "capture", "zeros-late:8", "--input", "+0", "--n", "3"},
       0},
  };
  return cases;
}

}  // namespace

TEST_CASE("golden files") {
  for (const auto& c : invocations()) {
    CAPTURE(c.golden);
    int code = -1;
    std::string got = run_capture(c.args, &code);
    CHECK(code == c.expected_exit);
    std::ifstream in(std::string(CANTOR_GOLDEN_DIR) + "/" + c.golden + ".txt");
    REQUIRE_MESSAGE(in, "missing golden file for " << c.golden);
    std::ostringstream want;
    want << in.rdbuf();
    CHECK_MESSAGE(got == want.str(), "golden mismatch for " << c.golden
                                         << "\n--- got ---\n"
                                         << got);
  }
}

TEST_CASE("byte-identical across repeats and thread counts") {
  std::vector<std::vector<std::string>> probes = {
      {"lattice", "profiles", "{DATA}/six.lat"},
      {"tally", "measure", "{DATA}/flip1.sched", "--mode", "phi", "--depth",
       "5"},
      {"measure", "audit", "phi:{DATA}/flip1.sched", "--depth", "6"},
  };
  for (const auto& probe : probes) {
    int c1 = 0, c2 = 0, c3 = 0;
    cantor::set_threads(2);
    std::string a = run_capture(probe, &c1);
    std::string b = run_capture(probe, &c2);
    cantor::set_threads(1);
    std::string c = run_capture(probe, &c3);
    cantor::set_threads(2);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(c1 == c2);
    CHECK(c1 == c3);
  }
}

TEST_CASE("usage errors exit 2") {
  int code = 0;
  run_capture({"bogus"}, &code);
  CHECK(code == 2);
  run_capture({"lattice", "check", "{DATA}/nonexistent.lat"}, &code);
  CHECK(code == 2);
  run_capture({"lattice", "sets", "{DATA}/m3.lat"}, &code);
  CHECK(code == 2);  // precondition violation: not distributive
  run_capture({"measure", "eval", "nonsense"}, &code);
  CHECK(code == 2);
  run_capture({"measure", "eval", "lebesgue", "--sigma", "01", "--bogus"},
              &code);
  CHECK(code == 2);
}
