#include "geon/manifold.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace geon::manifold {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("universe: " + what);
}

std::vector<int> merge_sorted(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Joins outcome names for multi-outcome propositions: "x(+|0)".
std::string subset_name(const Context& ctx, unsigned mask) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < ctx.outcomes.size(); ++i)
    if (mask & (1u << i)) parts.push_back(ctx.outcomes[i]);
  if (parts.size() == 1) return ctx.id + parts[0];
  std::string name = ctx.id + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) name += "|";
    name += parts[i];
  }
  return name + ")";
}

std::string uniquified(std::string name, std::unordered_set<std::string>& used) {
  std::string candidate = name;
  for (int k = 2; !used.insert(candidate).second; ++k)
    candidate = name + "#" + std::to_string(k);
  return candidate;
}

// Shared core of generate_logic and boolean_restriction: builds the
// lattice over bottom + the given per-context proper outcome subsets + top,
// ordered by extent inclusion.
GeneratedLogic build_logic(const Universe& u, const std::vector<int>& ctx_ids) {
  std::vector<Proposition> props;
  std::vector<std::string> names;
  std::unordered_set<std::string> used;
  std::vector<int> comp_mask_partner;  // index of each element's complement

  props.push_back(Proposition{});  // bottom: empty extent, trivial home
  names.push_back(uniquified("0", used));
  comp_mask_partner.push_back(-1);  // patched once top's id is known

  std::vector<int> elem_of_mask;  // scratch per context
  for (int c : ctx_ids) {
    const Context& ctx = u.contexts[static_cast<std::size_t>(c)];
    const unsigned k = static_cast<unsigned>(ctx.outcomes.size());
    const unsigned full = (1u << k) - 1u;
    elem_of_mask.assign(full + 1, -1);
    for (unsigned mask = 1; mask < full; ++mask) {
      std::vector<int> extent;
      for (unsigned i = 0; i < k; ++i)
        if (mask & (1u << i))
          extent = merge_sorted(std::move(extent),
                                u.outcome_extent(c, static_cast<int>(i)));
      elem_of_mask[mask] = static_cast<int>(props.size());
      props.push_back(Proposition{std::move(extent), ctx.id});
      names.push_back(uniquified(subset_name(ctx, mask), used));
      comp_mask_partner.push_back(-2);  // patched below
    }
    // Complements pair mask with full^mask within the same context.
    for (unsigned mask = 1; mask < full; ++mask)
      comp_mask_partner[static_cast<std::size_t>(elem_of_mask[mask])] =
          elem_of_mask[full ^ mask];
  }

  Proposition top;
  for (const ManifoldClass& mc : u.classes) top.extent.push_back(mc.id);
  const int top_id = static_cast<int>(props.size());
  props.push_back(std::move(top));
  names.push_back(uniquified("I", used));
  comp_mask_partner.push_back(0);
  comp_mask_partner[0] = top_id;

  const int n = static_cast<int>(props.size());
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (is_subset(props[static_cast<std::size_t>(a)].extent,
                    props[static_cast<std::size_t>(b)].extent))
        leq[static_cast<std::size_t>(a) * n + b] = 1;

  std::vector<lattice::ElementId> comp(comp_mask_partner.begin(),
                                       comp_mask_partner.end());
  lattice::NamedLattice named{
      lattice::FiniteOrtholattice(n, std::move(leq), std::move(comp)),
      std::move(names)};
  return GeneratedLogic{std::move(named), std::move(props)};
}

}  // namespace

int Universe::context_index(const std::string& id) const {
  for (std::size_t i = 0; i < contexts.size(); ++i)
    if (contexts[i].id == id) return static_cast<int>(i);
  return -1;
}

int Universe::outcome_index(int ctx, const std::string& outcome) const {
  const auto& outs = contexts.at(static_cast<std::size_t>(ctx)).outcomes;
  for (std::size_t i = 0; i < outs.size(); ++i)
    if (outs[i] == outcome) return static_cast<int>(i);
  return -1;
}

std::vector<int> Universe::compatibility_extent(int ctx) const {
  std::vector<int> out;
  for (const ManifoldClass& mc : classes)
    if (mc.context == ctx) out.push_back(mc.id);
  return out;
}

std::vector<int> Universe::outcome_extent(int ctx, int outcome) const {
  std::vector<int> out;
  for (const ManifoldClass& mc : classes)
    if (mc.context == ctx && mc.outcome == outcome) out.push_back(mc.id);
  return out;
}

Universe build_universe(std::vector<Context> contexts, int residual_classes) {
  if (contexts.empty()) fail("at least one context is required");
  if (residual_classes < 0) fail("residual_classes must be >= 0");
  std::unordered_set<std::string> ids;
  for (const Context& ctx : contexts) {
    if (ctx.id.empty()) fail("context ids must be non-empty");
    if (ctx.id == kTrivialHome)
      fail("context id '" + ctx.id + "' collides with the trivial marker");
    if (!ids.insert(ctx.id).second) fail("duplicate context id '" + ctx.id + "'");
    if (ctx.outcomes.size() < 2)
      fail("context '" + ctx.id + "' needs at least two outcomes");
    if (ctx.outcomes.size() > 16)
      fail("context '" + ctx.id + "' exceeds 16 outcomes");
    std::unordered_set<std::string> outs;
    for (const std::string& o : ctx.outcomes)
      if (!outs.insert(o).second)
        fail("context '" + ctx.id + "' repeats outcome '" + o + "'");
  }
  Universe u;
  u.contexts = std::move(contexts);
  int next_id = 0;
  for (std::size_t c = 0; c < u.contexts.size(); ++c)
    for (std::size_t o = 0; o < u.contexts[c].outcomes.size(); ++o)
      u.classes.push_back(ManifoldClass{next_id++, static_cast<int>(c),
                                        static_cast<int>(o)});
  for (int r = 0; r < residual_classes; ++r)
    u.classes.push_back(ManifoldClass{next_id++, -1, -1});
  return u;
}

Proposition outcome_proposition(const Universe& u, const std::string& context_id,
                                const std::string& outcome) {
  int c = u.context_index(context_id);
  if (c < 0) fail("unknown context '" + context_id + "'");
  int o = u.outcome_index(c, outcome);
  if (o < 0)
    fail("context '" + context_id + "' has no outcome '" + outcome + "'");
  return Proposition{u.outcome_extent(c, o), context_id};
}

Proposition experimental_complement(const Universe& u, const Proposition& p) {
  if (p.trivial()) {
    Proposition q;  // top <-> bottom
    if (p.extent.empty())
      for (const ManifoldClass& mc : u.classes) q.extent.push_back(mc.id);
    return q;
  }
  int c = u.context_index(p.home);
  if (c < 0) fail("proposition's home context '" + p.home + "' is unknown");
  Proposition q;
  q.home = p.home;
  const auto& outs = u.contexts[static_cast<std::size_t>(c)].outcomes;
  for (std::size_t o = 0; o < outs.size(); ++o) {
    std::vector<int> ext = u.outcome_extent(c, static_cast<int>(o));
    if (is_subset(ext, p.extent)) continue;  // outcome already inside p
    q.extent = merge_sorted(std::move(q.extent), ext);
  }
  return q;
}

lattice::ElementId GeneratedLogic::element_of(const Proposition& p) const {
  for (std::size_t i = 0; i < propositions.size(); ++i)
    if (propositions[i].home == p.home && propositions[i].extent == p.extent)
      return static_cast<lattice::ElementId>(i);
  return -1;
}

GeneratedLogic generate_logic(const Universe& u) {
  std::vector<int> all;
  for (std::size_t c = 0; c < u.contexts.size(); ++c)
    all.push_back(static_cast<int>(c));
  return build_logic(u, all);
}

GeneratedLogic boolean_restriction(const Universe& u,
                                   const std::string& context_id) {
  int c = u.context_index(context_id);
  if (c < 0) fail("unknown context '" + context_id + "'");
  return build_logic(u, {c});
}

bool NonclassicalityReport::all_pass() const {
  for (const NonclassicalityClause& cl : clauses)
    if (!cl.pass) return false;
  return true;
}

std::string NonclassicalityReport::to_text() const {
  ordered_json arr = ordered_json::array();
  for (const NonclassicalityClause& cl : clauses)
    arr.push_back({{"clause", cl.id}, {"pass", cl.pass}, {"detail", cl.detail}});
  return arr.dump(2) + "\n";
}

NonclassicalityReport verify_nonclassicality(const Universe& u,
                                             const GeneratedLogic& logic) {
  NonclassicalityReport report;
  const lattice::FiniteOrtholattice& L = logic.named.lattice;

  {
    NonclassicalityClause cl{"proper-subsets", true, ""};
    std::ostringstream detail;
    for (std::size_t c = 0; c < u.contexts.size(); ++c) {
      std::size_t compat = u.compatibility_extent(static_cast<int>(c)).size();
      bool proper = compat < u.classes.size();
      if (!proper) cl.pass = false;
      if (c) detail << "; ";
      detail << u.contexts[c].id << ": " << compat << " of "
             << u.classes.size() << (proper ? "" : " (covers the universe)");
    }
    cl.detail = detail.str();
    report.clauses.push_back(std::move(cl));
  }

  {
    NonclassicalityClause cl{"distributive-law-failure", false, ""};
    if (u.contexts.size() < 2) {
      cl.detail = "needs a second measurement arrangement; universe is classical";
    } else {
      const Context& cx = u.contexts[0];
      const Context& cy = u.contexts[1];
      Proposition a = outcome_proposition(u, cx.id, cx.outcomes[0]);
      Proposition b = outcome_proposition(u, cy.id, cy.outcomes[0]);
      Proposition bn = experimental_complement(u, b);
      lattice::ElementId ia = logic.element_of(a);
      lattice::ElementId ib = logic.element_of(b);
      lattice::ElementId ibn = logic.element_of(bn);
      lattice::ElementId expanded =
          L.join(L.meet(ia, ib), L.meet(ia, ibn));
      lattice::ElementId excluded_middle = L.join(ia, L.complement(ia));
      cl.pass = expanded == L.bottom() && excluded_middle == L.top() &&
                L.bottom() != L.top();
      std::ostringstream detail;
      const auto& nm = logic.named;
      detail << "join(meet(" << nm.name_of(ia) << "," << nm.name_of(ib)
             << "), meet(" << nm.name_of(ia) << "," << nm.name_of(ibn)
             << ")) = " << nm.name_of(expanded) << "; join(" << nm.name_of(ia)
             << "," << nm.name_of(L.complement(ia))
             << ") = " << nm.name_of(excluded_middle);
      cl.detail = detail.str();
    }
    report.clauses.push_back(std::move(cl));
  }

  {
    NonclassicalityClause cl{"classical-restrictions", true, ""};
    std::ostringstream detail;
    for (std::size_t c = 0; c < u.contexts.size(); ++c) {
      GeneratedLogic restricted = boolean_restriction(u, u.contexts[c].id);
      bool distributive =
          restricted.named.lattice.check_distributivity().empty();
      if (!distributive) cl.pass = false;
      if (c) detail << "; ";
      detail << u.contexts[c].id << ": "
             << (distributive ? "distributive" : "NOT distributive") << " ("
             << restricted.named.lattice.size() << " elements)";
    }
    cl.detail = detail.str();
    report.clauses.push_back(std::move(cl));
  }

  return report;
}

UniverseConfig parse_universe_config(const std::string& text,
                                     const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  auto bad = [&](const std::string& what) -> void {
    throw std::runtime_error(origin + ": " + what);
  };
  if (!j.is_object()) bad("top level must be an object");
  if (!j.contains("contexts") || !j["contexts"].is_array() ||
      j["contexts"].empty())
    bad("'contexts' must be a non-empty list");

  std::vector<Context> contexts;
  std::vector<std::optional<std::array<double, 3>>> axes;
  for (const auto& cj : j["contexts"]) {
    if (!cj.is_object()) bad("'contexts' entries must be objects");
    if (!cj.contains("id") || !cj["id"].is_string())
      bad("each context needs a string 'id'");
    if (!cj.contains("outcomes") || !cj["outcomes"].is_array())
      bad("each context needs an 'outcomes' list");
    Context ctx;
    ctx.id = cj["id"].get<std::string>();
    for (const auto& oj : cj["outcomes"]) {
      if (!oj.is_string()) bad("'outcomes' entries must be strings");
      ctx.outcomes.push_back(oj.get<std::string>());
    }
    if (cj.contains("axis")) {
      const auto& aj = cj["axis"];
      if (!aj.is_array() || aj.size() != 3 || !aj[0].is_number() ||
          !aj[1].is_number() || !aj[2].is_number())
        bad("context '" + ctx.id + "' axis must be three numbers");
      axes.push_back(std::array<double, 3>{aj[0].get<double>(),
                                           aj[1].get<double>(),
                                           aj[2].get<double>()});
    } else {
      axes.push_back(std::nullopt);
    }
    contexts.push_back(std::move(ctx));
  }
  int residual = 1;
  if (j.contains("residual_classes")) {
    if (!j["residual_classes"].is_number_integer())
      bad("'residual_classes' must be an integer");
    residual = j["residual_classes"].get<int>();
  }
  UniverseConfig cfg{build_universe(std::move(contexts), residual),
                     std::move(axes)};
  return cfg;
}

UniverseConfig load_universe_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_universe_config(buf.str(), path);
}

}  // namespace geon::manifold
