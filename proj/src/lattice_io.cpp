#include "geon/lattice_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace geon::lattice {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void bad_input(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

const std::string& NamedLattice::name_of(ElementId id) const {
  return names.at(static_cast<std::size_t>(id));
}

ElementId NamedLattice::id_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<ElementId>(i);
  return -1;
}

NamedLattice parse_lattice_text(const std::string& text,
                                const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann already reports line and column in what().
    bad_input(origin, e.what());
  }
  if (!j.is_object()) bad_input(origin, "top level must be an object");
  for (const char* key : {"elements", "covers", "complement", "top", "bottom"})
    if (!j.contains(key)) bad_input(origin, std::string("missing key '") + key + "'");

  if (!j["elements"].is_array() || j["elements"].empty())
    bad_input(origin, "'elements' must be a non-empty list of names");
  std::vector<std::string> names;
  std::unordered_map<std::string, ElementId> index;
  for (const auto& e : j["elements"]) {
    if (!e.is_string()) bad_input(origin, "'elements' entries must be strings");
    std::string name = e.get<std::string>();
    if (!index.emplace(name, static_cast<ElementId>(names.size())).second)
      bad_input(origin, "duplicate element name '" + name + "'");
    names.push_back(std::move(name));
  }
  const int n = static_cast<int>(names.size());

  auto lookup = [&](const json& v, const char* where) -> ElementId {
    if (!v.is_string())
      bad_input(origin, std::string(where) + " entries must be element names");
    auto it = index.find(v.get<std::string>());
    if (it == index.end())
      bad_input(origin, std::string(where) + " references unknown element '" +
                            v.get<std::string>() + "'");
    return it->second;
  };

  if (!j["covers"].is_array())
    bad_input(origin, "'covers' must be a list of [lower, upper] pairs");
  std::vector<std::pair<ElementId, ElementId>> covers;
  for (const auto& c : j["covers"]) {
    if (!c.is_array() || c.size() != 2)
      bad_input(origin, "'covers' entries must be [lower, upper] pairs");
    covers.emplace_back(lookup(c[0], "'covers'"), lookup(c[1], "'covers'"));
  }

  if (!j["complement"].is_object())
    bad_input(origin, "'complement' must map element names to element names");
  std::vector<ElementId> comp(static_cast<std::size_t>(n), -1);
  for (const auto& [key, value] : j["complement"].items()) {
    auto it = index.find(key);
    if (it == index.end())
      bad_input(origin, "'complement' references unknown element '" + key + "'");
    comp[static_cast<std::size_t>(it->second)] = lookup(value, "'complement'");
  }
  for (int i = 0; i < n; ++i)
    if (comp[static_cast<std::size_t>(i)] < 0)
      bad_input(origin, "'complement' missing entry for '" + names[static_cast<std::size_t>(i)] + "'");

  NamedLattice nl{FiniteOrtholattice::from_covers(n, covers, std::move(comp)),
                  std::move(names)};
  // from_covers derives the bounds from the order; the declared names must
  // agree or the file is inconsistent.
  ElementId top = lookup(j["top"], "'top'");
  ElementId bottom = lookup(j["bottom"], "'bottom'");
  if (top != nl.lattice.top())
    bad_input(origin, "declared top '" + nl.name_of(top) + "' is not the maximum");
  if (bottom != nl.lattice.bottom())
    bad_input(origin, "declared bottom '" + nl.name_of(bottom) + "' is not the minimum");
  return nl;
}

NamedLattice read_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lattice_text(buf.str(), path);
}

std::string to_interchange_text(const NamedLattice& nl) {
  const FiniteOrtholattice& L = nl.lattice;
  ordered_json j;
  j["elements"] = nl.names;
  ordered_json covers = ordered_json::array();
  for (const auto& [lo, hi] : L.cover_pairs())
    covers.push_back({nl.name_of(lo), nl.name_of(hi)});
  j["covers"] = covers;
  ordered_json comp = ordered_json::object();
  for (ElementId a = 0; a < L.size(); ++a)
    comp[nl.name_of(a)] = nl.name_of(L.complement(a));
  j["complement"] = comp;
  j["top"] = nl.name_of(L.top());
  j["bottom"] = nl.name_of(L.bottom());
  return j.dump(2) + "\n";
}

void write_lattice_file(const std::string& path, const NamedLattice& nl) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << to_interchange_text(nl);
}

std::string to_dot(const NamedLattice& nl, const std::string& graph_name) {
  const FiniteOrtholattice& L = nl.lattice;
  std::ostringstream out;
  out << "digraph \"" << dot_escape(graph_name) << "\" {\n"
      << "  rankdir=BT;\n"
      << "  node [shape=box, fontname=\"monospace\"];\n";
  for (ElementId a = 0; a < L.size(); ++a)
    out << "  \"" << dot_escape(nl.name_of(a)) << "\";\n";
  for (const auto& [lo, hi] : L.cover_pairs())
    out << "  \"" << dot_escape(nl.name_of(lo)) << "\" -> \""
        << dot_escape(nl.name_of(hi)) << "\";\n";
  for (ElementId a = 0; a < L.size(); ++a) {
    ElementId c = L.complement(a);
    if (a < c)
      out << "  \"" << dot_escape(nl.name_of(a)) << "\" -> \""
          << dot_escape(nl.name_of(c))
          << "\" [dir=none, style=dashed, color=gray50, constraint=false,"
             " label=\"c\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace geon::lattice
