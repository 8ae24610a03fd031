#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geon/billiard.hpp"
#include "geon/billiard_io.hpp"
#include "geon/billiard_solver.hpp"
#include "geon/hilbert.hpp"
#include "geon/lattice.hpp"
#include "geon/lattice_io.hpp"
#include "geon/manifold.hpp"
#include "geon/numfmt.hpp"
#include "geon/run_manifest.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using geon::g12;
using nlohmann::ordered_json;

namespace {

// Exit codes shared with the test harness.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

std::string default_out_dir() {
  const char* env = std::getenv("GEONLAB_OUT_DIR");
  return env && *env ? env : "out";
}

void write_manifest(const std::string& command, const std::string& config,
                    const std::map<std::string, std::string>& overrides,
                    const std::string& out_dir) {
  geon::RunManifest m;
  m.command = command;
  m.config_path = config;
  m.overrides = overrides;
  m.out_dir = out_dir;
  m.input_hash = geon::hash_file(config);
  geon::write_text_file(out_dir + "/manifest.json", m.to_text());
}

// ---- lattice -------------------------------------------------------------

const std::vector<std::string> kAllChecks = {"distributive", "orthomodular",
                                             "atomic", "covering"};

std::vector<std::string> parse_check_list(const std::string& arg) {
  if (arg.empty() || arg == "all") return kAllChecks;
  std::vector<std::string> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kAllChecks.begin(), kAllChecks.end(), item) ==
        kAllChecks.end())
      throw std::runtime_error("unknown check '" + item +
                               "' (expected distributive, orthomodular, "
                               "atomic, covering)");
    out.push_back(item);
  }
  if (out.empty()) throw std::runtime_error("empty check list");
  return out;
}

int run_lattice(const std::string& config, const std::string& out_dir,
                const std::string& checks_arg) {
  const std::vector<std::string> selected = parse_check_list(checks_arg);
  geon::lattice::NamedLattice nl = geon::lattice::read_lattice_file(config);
  const geon::lattice::FiniteOrtholattice& L = nl.lattice;
  fs::create_directories(out_dir);

  bool all_pass = true;
  ordered_json report = ordered_json::array();
  for (const std::string& check : selected) {
    ordered_json entry;
    entry["check"] = check;
    if (check == "distributive") {
      auto v = L.check_distributivity();
      entry["pass"] = v.empty();
      ordered_json list = ordered_json::array();
      for (const auto& t : v)
        list.push_back({{"a", nl.name_of(t.a)},
                        {"b", nl.name_of(t.b)},
                        {"c", nl.name_of(t.c)},
                        {"lhs", nl.name_of(t.lhs)},
                        {"rhs", nl.name_of(t.rhs)}});
      entry["violations"] = list;
    } else if (check == "orthomodular") {
      auto v = L.check_orthomodularity();
      entry["pass"] = v.empty();
      ordered_json list = ordered_json::array();
      for (const auto& p : v)
        list.push_back({{"a", nl.name_of(p.a)},
                        {"b", nl.name_of(p.b)},
                        {"rebuilt", nl.name_of(p.rebuilt)}});
      entry["violations"] = list;
    } else if (check == "atomic") {
      entry["pass"] = L.check_atomicity();
    } else {
      auto v = L.check_covering();
      entry["pass"] = v.empty();
      ordered_json list = ordered_json::array();
      for (const auto& p : v)
        list.push_back({{"atom", nl.name_of(p.atom)},
                        {"element", nl.name_of(p.element)}});
      entry["violations"] = list;
    }
    bool pass = entry["pass"].get<bool>();
    all_pass = all_pass && pass;
    std::cout << "check " << check << ": " << (pass ? "PASS" : "FAIL") << "\n";
    report.push_back(std::move(entry));
  }
  geon::write_text_file(out_dir + "/checks.json", report.dump(2) + "\n");
  geon::write_text_file(out_dir + "/hasse.dot",
                        geon::lattice::to_dot(nl, fs::path(config).stem()));
  write_manifest("lattice", config, {{"checks", checks_arg.empty() ? "all" : checks_arg}},
                 out_dir);
  return all_pass ? kOk : kCheckFailed;
}

// ---- geon ----------------------------------------------------------------

int run_geon(const std::string& config, const std::string& out_dir) {
  geon::manifold::UniverseConfig cfg = geon::manifold::load_universe_config(config);
  geon::manifold::GeneratedLogic logic = geon::manifold::generate_logic(cfg.universe);
  geon::manifold::NonclassicalityReport report =
      geon::manifold::verify_nonclassicality(cfg.universe, logic);

  fs::create_directories(out_dir);
  geon::lattice::write_lattice_file(out_dir + "/lattice.json", logic.named);
  geon::write_text_file(out_dir + "/report.json", report.to_text());
  geon::write_text_file(out_dir + "/hasse.dot",
                        geon::lattice::to_dot(logic.named, fs::path(config).stem()));
  write_manifest("geon", config, {}, out_dir);

  std::cout << "elements: " << logic.named.lattice.size() << "\n";
  for (const auto& cl : report.clauses)
    std::cout << "clause " << cl.id << ": " << (cl.pass ? "PASS" : "FAIL")
              << " (" << cl.detail << ")\n";
  return report.all_pass() ? kOk : kCheckFailed;
}

// ---- billiard ------------------------------------------------------------

int run_billiard(const std::string& config, const std::string& out_dir,
                 bool with_oracle, std::optional<int> grid_override,
                 const std::string& tolerance_override) {
  geon::billiard::BilliardConfig c = geon::billiard::load_billiard_config(config);
  std::map<std::string, std::string> overrides;
  if (grid_override) {
    c.solver.grid = *grid_override;
    overrides["grid"] = std::to_string(*grid_override);
  }
  if (!tolerance_override.empty()) {
    c.solver.tolerance = std::stod(tolerance_override);
    if (c.solver.tolerance <= 0)
      throw std::runtime_error("--tolerance must be positive");
    overrides["tolerance"] = tolerance_override;
  }
  if (with_oracle) overrides["oracle"] = "true";

  std::vector<std::string> diagnostics;
  std::vector<geon::billiard::ConsistentSolution> sols =
      geon::billiard::solve_self_consistent(c, &diagnostics);

  fs::create_directories(out_dir);
  geon::write_text_file(out_dir + "/solutions.csv",
                        geon::billiard::solutions_csv(sols));
  for (std::size_t i = 0; i < sols.size(); ++i) {
    geon::write_text_file(out_dir + "/trajectory_" + std::to_string(i) + ".csv",
                          geon::billiard::trajectory_csv(sols[i]));
    geon::write_text_file(out_dir + "/events_" + std::to_string(i) + ".txt",
                          geon::billiard::event_log_text(sols[i]));
  }
  write_manifest("billiard", config, overrides, out_dir);

  std::cout << "solutions: " << sols.size() << "\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const auto& s = sols[i];
    std::cout << "  " << i << " "
              << (s.trivial() ? "trivial" : "self_interacting");
    if (s.params)
      std::cout << " exit_time " << g12(s.params->exit_time) << " angle "
                << g12(s.params->exit_angle) << " direction "
                << g12(s.params->exit_direction) << " speed "
                << g12(s.params->exit_speed);
    std::cout << " residual " << g12(s.residual_norm) << " events "
              << s.events.size() << "\n";
  }
  for (const std::string& d : diagnostics) std::cerr << "note: " << d << "\n";

  if (!with_oracle) return kOk;

  std::vector<geon::billiard::AnsatzParams> oracle =
      geon::billiard::oracle_grid_roots(c, 2);
  std::ostringstream ocsv;
  ocsv << "root,exit_time,exit_angle,exit_direction,exit_speed\n";
  for (std::size_t i = 0; i < oracle.size(); ++i)
    ocsv << i << "," << g12(oracle[i].exit_time) << ","
         << g12(oracle[i].exit_angle) << "," << g12(oracle[i].exit_direction)
         << "," << g12(oracle[i].exit_speed) << "\n";
  geon::write_text_file(out_dir + "/oracle.csv", ocsv.str());

  std::vector<geon::billiard::AnsatzParams> found;
  for (const auto& s : sols)
    if (s.params) found.push_back(*s.params);
  bool matched = found.size() == oracle.size();
  for (const auto& f : found) {
    int hits = 0;
    for (const auto& o : oracle)
      if (geon::billiard::params_distance(c, f, o) <= c.solver.dedup_radius)
        ++hits;
    if (hits != 1) matched = false;
  }
  for (const auto& o : oracle) {
    int hits = 0;
    for (const auto& f : found)
      if (geon::billiard::params_distance(c, f, o) <= c.solver.dedup_radius)
        ++hits;
    if (hits != 1) matched = false;
  }
  std::cout << "oracle roots: " << oracle.size() << " ("
            << (matched ? "matched one-to-one" : "MISMATCH") << ")\n";
  return matched ? kOk : kCheckFailed;
}

// ---- hilbert -------------------------------------------------------------

int run_hilbert(const std::string& config, const std::string& out_dir) {
  geon::manifold::UniverseConfig cfg = geon::manifold::load_universe_config(config);
  std::vector<Eigen::Vector3d> axes;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < cfg.universe.contexts.size(); ++i) {
    const geon::manifold::Context& ctx = cfg.universe.contexts[i];
    if (ctx.outcomes.size() != 2)
      throw std::runtime_error("context '" + ctx.id +
                               "' is not binary; no spin representation");
    if (!cfg.axes[i])
      throw std::runtime_error("context '" + ctx.id +
                               "' has no 'axis' configured");
    const auto& a = *cfg.axes[i];
    axes.emplace_back(a[0], a[1], a[2]);
    labels.push_back(ctx.id);
  }

  geon::manifold::GeneratedLogic logic = geon::manifold::generate_logic(cfg.universe);
  geon::hilbert::SubspaceLattice spin =
      geon::hilbert::build_spin_lattice(axes, labels);
  std::optional<std::vector<geon::lattice::ElementId>> iso =
      geon::hilbert::check_isomorphic(logic.named.lattice, spin.named.lattice);

  fs::create_directories(out_dir);
  geon::lattice::write_lattice_file(out_dir + "/spin_lattice.json", spin.named);
  std::ostringstream dump;
  for (std::size_t i = 0; i < spin.elements.size(); ++i)
    dump << "element " << spin.named.names[i] << "\n"
         << geon::hilbert::format_subspace(spin.elements[i]);
  geon::write_text_file(out_dir + "/subspaces.txt", dump.str());

  ordered_json cert;
  cert["isomorphic"] = iso.has_value();
  if (iso) {
    ordered_json m = ordered_json::object();
    for (std::size_t i = 0; i < iso->size(); ++i)
      m[logic.named.names[i]] =
          spin.named.name_of((*iso)[static_cast<std::size_t>(i)]);
    cert["map"] = m;
  }
  geon::write_text_file(out_dir + "/certificate.json", cert.dump(2) + "\n");
  write_manifest("hilbert", config, {}, out_dir);

  std::cout << "propositions: " << logic.named.lattice.size()
            << ", subspaces: " << spin.named.lattice.size() << "\n";
  std::cout << "isomorphic: " << (iso ? "yes" : "no") << "\n";
  return iso ? kOk : kCheckFailed;
}

// ---- rerun ---------------------------------------------------------------

int dispatch(const std::string& command, const std::string& config,
             const std::string& out_dir, bool with_oracle,
             std::optional<int> grid_override,
             const std::string& tolerance_override) {
  if (command == "lattice") {
    std::string checks = "all";
    return run_lattice(config, out_dir, checks);
  }
  if (command == "geon") return run_geon(config, out_dir);
  if (command == "billiard")
    return run_billiard(config, out_dir, with_oracle, grid_override,
                        tolerance_override);
  if (command == "hilbert") return run_hilbert(config, out_dir);
  throw std::runtime_error("manifest names unknown command '" + command + "'");
}

int run_rerun(const std::string& manifest_path, const std::string& out_dir) {
  geon::RunManifest m = geon::RunManifest::load(manifest_path);
  if (geon::hash_file(m.config_path) != m.input_hash)
    throw std::runtime_error(m.config_path +
                             ": content changed since the manifest was "
                             "written; refusing to rerun");
  bool with_oracle = m.overrides.count("oracle") > 0;
  std::optional<int> grid;
  if (m.overrides.count("grid")) grid = std::stoi(m.overrides.at("grid"));
  std::string tolerance;
  if (m.overrides.count("tolerance")) tolerance = m.overrides.at("tolerance");
  if (m.command == "lattice" && m.overrides.count("checks"))
    return run_lattice(m.config_path, out_dir, m.overrides.at("checks"));
  return dispatch(m.command, m.config_path, out_dir, with_oracle, grid,
                  tolerance);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proposition-lattice checks and wormhole-billiard solver"};
  app.set_version_flag("--version",
                       std::string(geon::kToolName) + " " + geon::kToolVersion);
  app.require_subcommand(1);

  std::string config, out_dir = default_out_dir(), checks, manifest_path,
              tolerance;
  bool with_oracle = false;
  int grid = 0;

  CLI::App* lat = app.add_subcommand("lattice", "run lattice-law checkers on an interchange file");
  lat->add_option("--config", config, "lattice interchange file")->required();
  lat->add_option("--out", out_dir, "output directory");
  lat->add_option("--checks", checks,
                  "comma list of distributive,orthomodular,atomic,covering");

  CLI::App* ge = app.add_subcommand("geon", "generate the proposition lattice of a universe and verify non-classicality");
  ge->add_option("--config", config, "universe description file")->required();
  ge->add_option("--out", out_dir, "output directory");

  CLI::App* bil = app.add_subcommand("billiard", "enumerate self-consistent billiard evolutions");
  bil->add_option("--config", config, "billiard description file")->required();
  bil->add_option("--out", out_dir, "output directory");
  bil->add_flag("--oracle", with_oracle,
                "also run the 2x grid oracle and compare root sets");
  bil->add_option("--grid", grid, "override solver grid resolution");
  bil->add_option("--tolerance", tolerance, "override solver residual tolerance");

  CLI::App* hil = app.add_subcommand("hilbert", "verify the spin-subspace representation of a universe's logic");
  hil->add_option("--config", config, "universe description file with axes")->required();
  hil->add_option("--out", out_dir, "output directory");

  CLI::App* rer = app.add_subcommand("rerun", "reproduce a recorded run from its manifest");
  rer->add_option("--manifest", manifest_path, "manifest.json of a previous run")->required();
  rer->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (lat->parsed()) return run_lattice(config, out_dir, checks);
    if (ge->parsed()) return run_geon(config, out_dir);
    if (bil->parsed())
      return run_billiard(config, out_dir, with_oracle,
                          grid > 0 ? std::optional<int>(grid) : std::nullopt,
                          tolerance);
    if (hil->parsed()) return run_hilbert(config, out_dir);
    if (rer->parsed()) return run_rerun(manifest_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
