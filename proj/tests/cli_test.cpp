#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "geon/lattice.hpp"
#include "geon/lattice_io.hpp"
#include "geon/run_manifest.hpp"

namespace fs = std::filesystem;

namespace {

// Each test works under its own scratch directory; commands capture both
// streams so assertions can look at what the user would see.
struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name) {
  fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run(const std::string& args, const fs::path& dir) {
  fs::path out_file = dir / "_stdout.txt";
  fs::path err_file = dir / "_stderr.txt";
  std::string cmd = std::string(GEONLAB_BIN) + " " + args + " >" +
                    out_file.string() + " 2>" + err_file.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = geon::read_text_file(out_file.string());
  r.err = geon::read_text_file(err_file.string());
  return r;
}

std::string demo(const std::string& name) {
  return std::string(DEMO_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("lattice checks drive the exit code") {
  fs::path dir = scratch("lat");
  // All four checks: the demo MO2 file fails distributivity, as it must.
  RunResult all = run("lattice --config " + demo("lattice_mo2.json") +
                      " --out " + (dir / "mo2").string(), dir);
  CHECK(all.code == 1);
  CHECK(all.out.find("check distributive: FAIL") != std::string::npos);
  CHECK(all.out.find("check orthomodular: PASS") != std::string::npos);
  CHECK(fs::exists(dir / "mo2" / "checks.json"));
  CHECK(fs::exists(dir / "mo2" / "hasse.dot"));
  CHECK(fs::exists(dir / "mo2" / "manifest.json"));
  // The report names the witnessing triple, not bare indices.
  std::string checks = geon::read_text_file((dir / "mo2" / "checks.json").string());
  CHECK(checks.find("\"x+\"") != std::string::npos);
  CHECK(checks.find("violations") != std::string::npos);

  // Restricting to the passing checks flips the exit code.
  RunResult some = run("lattice --config " + demo("lattice_mo2.json") +
                       " --checks orthomodular,atomic,covering --out " +
                       (dir / "mo2b").string(), dir);
  CHECK(some.code == 0);

  RunResult bool8 = run("lattice --config " + demo("lattice_boolean8.json") +
                        " --out " + (dir / "b8").string(), dir);
  CHECK(bool8.code == 0);

  RunResult hex = run("lattice --config " + demo("lattice_o6.json") +
                      " --out " + (dir / "o6").string(), dir);
  CHECK(hex.code == 1);
  CHECK(hex.out.find("check orthomodular: FAIL") != std::string::npos);
}

TEST_CASE("bad input reports and exits with the input-error code") {
  fs::path dir = scratch("bad");
  RunResult missing = run("lattice --config does_not_exist.json --out " +
                          (dir / "x").string(), dir);
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error:") != std::string::npos);

  RunResult badcheck = run("lattice --config " + demo("lattice_mo2.json") +
                           " --checks sparkly --out " + (dir / "y").string(),
                           dir);
  CHECK(badcheck.code == 2);
  CHECK(badcheck.err.find("sparkly") != std::string::npos);

  geon::write_text_file((dir / "broken.json").string(), "{\"elements\": 3}");
  RunResult broken = run("lattice --config " + (dir / "broken.json").string() +
                         " --out " + (dir / "z").string(), dir);
  CHECK(broken.code == 2);

  RunResult unknown = run("frobnicate --config x.json", dir);
  CHECK(unknown.code != 0);
}

TEST_CASE("geon emits a lattice readable by the interchange parser") {
  fs::path dir = scratch("geon");
  RunResult two = run("geon --config " + demo("geon_two_context.json") +
                      " --out " + (dir / "two").string(), dir);
  CHECK(two.code == 0);
  CHECK(two.out.find("elements: 6") != std::string::npos);
  CHECK(two.out.find("clause proper-subsets: PASS") != std::string::npos);

  // Round-trip through the interchange format and compare to the direct
  // construction: same order, same complements.
  geon::lattice::NamedLattice nl =
      geon::lattice::read_lattice_file((dir / "two" / "lattice.json").string());
  geon::lattice::FiniteOrtholattice direct = geon::lattice::mo_lattice(2);
  REQUIRE(nl.lattice.size() == direct.size());
  for (int a = 0; a < direct.size(); ++a) {
    CHECK(nl.lattice.complement(a) == direct.complement(a));
    for (int b = 0; b < direct.size(); ++b)
      CHECK(nl.lattice.leq(a, b) == direct.leq(a, b));
  }

  RunResult one = run("geon --config " + demo("geon_single_context.json") +
                      " --out " + (dir / "one").string(), dir);
  CHECK(one.code == 1);
  CHECK(one.out.find("clause proper-subsets: FAIL") != std::string::npos);

  RunResult three = run("geon --config " + demo("geon_three_context.json") +
                        " --out " + (dir / "three").string(), dir);
  CHECK(three.code == 0);
  CHECK(three.out.find("elements: 8") != std::string::npos);
}

TEST_CASE("hilbert certifies the demo logic and rejects axis-free input") {
  fs::path dir = scratch("hil");
  RunResult ok = run("hilbert --config " + demo("geon_two_context.json") +
                     " --out " + (dir / "ok").string(), dir);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("isomorphic: yes") != std::string::npos);
  std::string cert =
      geon::read_text_file((dir / "ok" / "certificate.json").string());
  CHECK(cert.find("\"isomorphic\": true") != std::string::npos);
  CHECK(fs::exists(dir / "ok" / "subspaces.txt"));
  CHECK(fs::exists(dir / "ok" / "spin_lattice.json"));

  geon::write_text_file((dir / "no_axis.json").string(), R"({
    "contexts": [
      {"id": "x", "outcomes": ["+", "-"]},
      {"id": "y", "outcomes": ["+", "-"]}
    ]
  })");
  RunResult bare = run("hilbert --config " + (dir / "no_axis.json").string() +
                       " --out " + (dir / "bare").string(), dir);
  CHECK(bare.code == 2);
  CHECK(bare.err.find("axis") != std::string::npos);
}

TEST_CASE("billiard reports each evolution and honors overrides") {
  fs::path dir = scratch("bil");
  RunResult fig = run("billiard --config " + demo("billiard_between_mouths.json") +
                      " --out " + (dir / "fig").string(), dir);
  CHECK(fig.code == 0);
  CHECK(fig.out.find("solutions: 3") != std::string::npos);
  std::string csv =
      geon::read_text_file((dir / "fig" / "solutions.csv").string());
  CHECK(csv.find("trivial") != std::string::npos);
  CHECK(csv.find("self_interacting") != std::string::npos);
  CHECK(fs::exists(dir / "fig" / "trajectory_0.csv"));
  CHECK(fs::exists(dir / "fig" / "trajectory_2.csv"));
  std::string events =
      geon::read_text_file((dir / "fig" / "events_1.txt").string());
  CHECK(events.find("mouth_exit") != std::string::npos);
  CHECK(events.find("collision") != std::string::npos);

  RunResult far = run("billiard --config " + demo("billiard_far_mouths.json") +
                      " --out " + (dir / "far").string(), dir);
  CHECK(far.code == 0);
  CHECK(far.out.find("solutions: 1") != std::string::npos);

  // Overrides land in the manifest so reruns can replay them.
  RunResult dense = run("billiard --config " + demo("billiard_between_mouths.json") +
                        " --grid 20 --tolerance 1e-9 --out " +
                        (dir / "dense").string(), dir);
  CHECK(dense.code == 0);
  std::string manifest =
      geon::read_text_file((dir / "dense" / "manifest.json").string());
  CHECK(manifest.find("\"grid\": \"20\"") != std::string::npos);
  CHECK(manifest.find("\"tolerance\": \"1e-9\"") != std::string::npos);

  RunResult badtol = run("billiard --config " + demo("billiard_between_mouths.json") +
                         " --tolerance -1 --out " + (dir / "bt").string(),
                         dir);
  CHECK(badtol.code == 2);
}

TEST_CASE("the default output directory comes from the environment") {
  fs::path dir = scratch("env");
  fs::path envout = dir / "from_env";
  std::string cmd = "GEONLAB_OUT_DIR=" + envout.string() + " " + GEONLAB_BIN +
                    " lattice --config " + demo("lattice_boolean8.json") +
                    " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(envout / "checks.json"));
}

TEST_CASE("rerun replays a manifest byte for byte and guards the hash") {
  fs::path dir = scratch("rerun");
  // Work on a copy of the config so it can be tampered with later.
  fs::copy_file(demo("billiard_far_mouths.json"), dir / "config.json");
  RunResult first = run("billiard --config " + (dir / "config.json").string() +
                        " --out " + (dir / "a").string(), dir);
  REQUIRE(first.code == 0);

  RunResult replay = run("rerun --manifest " + (dir / "a" / "manifest.json").string() +
                         " --out " + (dir / "b").string(), dir);
  CHECK(replay.code == 0);
  CHECK(geon::read_text_file((dir / "a" / "solutions.csv").string()) ==
        geon::read_text_file((dir / "b" / "solutions.csv").string()));
  CHECK(geon::read_text_file((dir / "a" / "trajectory_0.csv").string()) ==
        geon::read_text_file((dir / "b" / "trajectory_0.csv").string()));

  // Same manifest, silently edited config: the hash gate must refuse.
  std::string cfg = geon::read_text_file((dir / "config.json").string());
  geon::write_text_file((dir / "config.json").string(), cfg + "\n");
  RunResult stale = run("rerun --manifest " + (dir / "a" / "manifest.json").string() +
                        " --out " + (dir / "c").string(), dir);
  CHECK(stale.code == 2);
  CHECK(stale.err.find("refus") != std::string::npos);
}
