#pragma once

// JSON documents for actions, groups, graphs, ITPFI specs and reports, and
// the group-spec mini-syntax used on the command line.
//
//   action:  {"name": ..., "group": <group>, "space": {"atoms": [...], "weights": ["1/3", 0.5, ...]},
//             "perm": {"<element label>": [image of atom 0, image of atom 1, ...], ...}}
//   group:   {"name": ..., "elements": [labels], "table": [[product labels or indices]]} or {"spec": "S3xZ2"}
//   graph:   {"n": 5, "edges": [[0, 1], ...]}
//   itpfi:   {"kind": "powers", "lambda": 0.5} | {"kind": "constant", "alpha": [...]} |
//            {"kind": "periodic", "prefix": [[...]], "cycle": [[...]]} | {"kind": "explicit", "factors": [[...]]}

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vnlab/actions.hpp"
#include "vnlab/crossed.hpp"
#include "vnlab/error.hpp"
#include "vnlab/fingroup.hpp"
#include "vnlab/groupvna.hpp"
#include "vnlab/itpfi.hpp"
#include "vnlab/mekler.hpp"
#include "vnlab/redux.hpp"

namespace vnlab {

using Json = nlohmann::json;

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": malformed JSON: " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::size_t index_field(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline double number_field(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

inline std::string string_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

/// Position of a label, or an integer index, within labels.
inline std::size_t lookup(const Json& j, const std::vector<std::string>& labels, const std::string& where) {
  if (j.is_string()) {
    const auto it = std::find(labels.begin(), labels.end(), j.get<std::string>());
    if (it == labels.end()) throw InputError(where + ": unknown label '" + j.get<std::string>() + "'");
    return static_cast<std::size_t>(it - labels.begin());
  }
  const auto i = index_field(j, where);
  if (i >= labels.size()) throw InputError(where + ": index " + std::to_string(i) + " out of range");
  return i;
}

inline std::uint32_t parse_count(const std::string& digits, const std::string& what) {
  if (digits.empty() || digits.size() > 6 || !std::all_of(digits.begin(), digits.end(), ::isdigit))
    throw InputError("bad " + what + " '" + digits + "'");
  return static_cast<std::uint32_t>(std::stoul(digits));
}

inline std::vector<std::string> split_top_level(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- groups and graphs

/// P<n> path, C<n> cycle, K<n> complete, E<n> edgeless, Star<k> star with k leaves.
inline SimpleGraph named_graph(const std::string& name) {
  if (name.rfind("Star", 0) == 0) return SimpleGraph::star(detail::parse_count(name.substr(4), "graph size"));
  if (name.empty()) throw InputError("empty graph name");
  const auto n = detail::parse_count(name.substr(1), "graph size");
  if (n > SimpleGraph::kMaxVertices) throw InputError("graph '" + name + "' exceeds 64 vertices");
  switch (name[0]) {
    case 'P': return SimpleGraph::path(n);
    case 'C':
      if (n < 3) throw InputError("cycle needs at least 3 vertices");
      return SimpleGraph::cycle(n);
    case 'K': return SimpleGraph::complete(n);
    case 'E': return SimpleGraph(n);
    default: break;
  }
  throw InputError("unknown graph name '" + name + "' (expected P<n>, C<n>, K<n>, E<n> or Star<k>)");
}

/// One finite factor: Z<n>, S<n>, A<n>, D<n>, Q8.
inline FinGroup named_finite_group(const std::string& name) {
  if (name == "Q8") return quaternion_group();
  if (name.size() < 2) throw InputError("unknown group '" + name + "'");
  const auto n = detail::parse_count(name.substr(1), "group size");
  switch (name[0]) {
    case 'Z': return cyclic_group(n);
    case 'S':
      if (n > 8) throw InputError("S<n> is limited to n <= 8");
      return symmetric_group(n);
    case 'A':
      if (n > 8) throw InputError("A<n> is limited to n <= 8");
      return alternating_group(n);
    case 'D': return dihedral_group(n);
    default: break;
  }
  throw InputError("unknown group '" + name + "' (expected Z<n>, S<n>, A<n>, D<n> or Q8)");
}

/// Direct product of finite factors joined by 'x', e.g. "A5xZ2".
inline FinGroup parse_group_spec(const std::string& spec) {
  const auto factors = detail::split_top_level(spec, 'x');
  FinGroup g = named_finite_group(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) g = direct_product(g, named_finite_group(factors[i]));
  return g;
}

/// "M(<graph>,<k>)": G(k copies of graph) : Z_k with Z_k shifting the copies cyclically.
inline std::optional<MeklerSemidirect> parse_mekler_factor(const std::string& text, std::uint32_t p = 3) {
  if (text.rfind("M(", 0) != 0) return std::nullopt;
  if (text.back() != ')') throw InputError("unterminated Mekler factor '" + text + "'");
  const auto inner = detail::split_top_level(text.substr(2, text.size() - 3), ',');
  if (inner.size() != 2) throw InputError("Mekler factor must read M(<graph>,<copies>)");
  const auto graph = named_graph(inner[0]);
  const auto k = detail::parse_count(inner[1], "copy count");
  if (k < 1) throw InputError("copy count must be positive");
  std::vector<VertexMap> perms;
  for (std::uint32_t s = 0; s < k; ++s) {
    std::vector<std::size_t> shift(k);
    for (std::uint32_t c = 0; c < k; ++c) shift[c] = (c + s) % k;
    perms.push_back(copy_permutation(graph.size(), shift));
  }
  return MeklerSemidirect(MeklerGroup(copies_graph(graph, k), p), cyclic_group(k), std::move(perms));
}

inline FinGroup group_from_json(const Json& j, const std::string& where = "group") {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  if (j.contains("spec")) return parse_group_spec(detail::string_field(j["spec"], where + ".spec"));
  const auto& elems = detail::field(j, "elements", where);
  if (!elems.is_array() || elems.empty()) throw InputError(where + ".elements: expected a nonempty array");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto& e = elems[i];
    labels.push_back(e.is_string() ? e.get<std::string>() : e.dump());
  }
  const auto& tab = detail::field(j, "table", where);
  if (!tab.is_array() || tab.size() != labels.size())
    throw InputError(where + ".table: expected " + std::to_string(labels.size()) + " rows");
  std::vector<std::vector<std::size_t>> table;
  for (std::size_t r = 0; r < tab.size(); ++r) {
    const std::string row_where = where + ".table[" + std::to_string(r) + "]";
    if (!tab[r].is_array() || tab[r].size() != labels.size())
      throw InputError(row_where + ": expected " + std::to_string(labels.size()) + " entries");
    std::vector<std::size_t> row;
    for (std::size_t c = 0; c < tab[r].size(); ++c)
      row.push_back(detail::lookup(tab[r][c], labels, row_where + "[" + std::to_string(c) + "]"));
    table.push_back(std::move(row));
  }
  const std::string name = j.contains("name") ? detail::string_field(j["name"], where + ".name") : "G";
  return FinGroup::from_table(name, std::move(labels), table);
}

inline Weight weight_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return Weight(Rational::parse(j.get<std::string>()));
  if (j.is_number_integer()) return Weight(Rational(j.get<std::int64_t>()));
  return Weight::approximate(detail::number_field(j, where));
}

inline FiniteAction action_from_json(const Json& j, const Caps& caps = {}) {
  const FinGroup group = group_from_json(detail::field(j, "group", "action"), "action.group");
  const auto& space = detail::field(j, "space", "action");
  const auto& atoms_json = detail::field(space, "atoms", "action.space");
  const auto& weights_json = detail::field(space, "weights", "action.space");
  if (!atoms_json.is_array() || !weights_json.is_array()) throw InputError("action.space: atoms and weights must be arrays");
  std::vector<std::string> atoms;
  for (const auto& a : atoms_json) atoms.push_back(a.is_string() ? a.get<std::string>() : a.dump());
  std::vector<Weight> weights;
  for (std::size_t i = 0; i < weights_json.size(); ++i)
    weights.push_back(weight_from_json(weights_json[i], "action.space.weights[" + std::to_string(i) + "]"));
  FiniteProbSpace prob(atoms, std::move(weights));

  const auto& perm_json = detail::field(j, "perm", "action");
  if (!perm_json.is_object()) throw InputError("action.perm: expected an object keyed by element label");
  std::vector<std::string> labels;
  for (FinGroup::Element g = 0; g < group.order(); ++g) labels.push_back(group.label(g));
  std::vector<Permutation> perm(group.order());
  std::vector<bool> given(group.order(), false);
  for (const auto& [key, images] : perm_json.items()) {
    const std::string where = "action.perm." + key;
    const auto g = detail::lookup(Json(key), labels, where);
    if (!images.is_array() || images.size() != atoms.size())
      throw InputError(where + ": expected " + std::to_string(atoms.size()) + " images");
    for (std::size_t x = 0; x < images.size(); ++x)
      perm[g].push_back(static_cast<std::uint32_t>(detail::lookup(images[x], atoms, where + "[" + std::to_string(x) + "]")));
    given[g] = true;
  }
  for (FinGroup::Element g = 0; g < group.order(); ++g) {
    if (given[g]) continue;
    if (g != group.identity()) throw InputError("action.perm: missing element '" + labels[g] + "'");
    perm[g].resize(atoms.size());
    std::iota(perm[g].begin(), perm[g].end(), 0u);
  }
  const std::string name = j.contains("name") ? detail::string_field(j["name"], "action.name") : "action";
  return make_action(group, std::move(prob), std::move(perm), name, caps);
}

inline SimpleGraph graph_from_json(const Json& j, const std::string& where = "graph") {
  const auto n = detail::index_field(detail::field(j, "n", where), where + ".n");
  if (n > SimpleGraph::kMaxVertices) throw InputError(where + ".n: at most 64 vertices");
  const auto& edges = detail::field(j, "edges", where);
  if (!edges.is_array()) throw InputError(where + ".edges: expected an array");
  SimpleGraph g(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ew = where + ".edges[" + std::to_string(i) + "]";
    if (!edges[i].is_array() || edges[i].size() != 2) throw InputError(ew + ": expected a pair");
    const auto u = detail::index_field(edges[i][0], ew), v = detail::index_field(edges[i][1], ew);
    try {
      g.add_edge(u, v);
    } catch (const InputError& e) {
      throw InputError(ew + ": " + e.what());
    }
  }
  return g;
}

inline Json graph_to_json(const SimpleGraph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.size()}, {"edges", edges}};
}

inline ITPFISpec itpfi_from_json(const Json& j) {
  const std::string kind = detail::string_field(detail::field(j, "kind", "spec"), "spec.kind");
  const auto list = [](const Json& a, const std::string& where) {
    if (!a.is_array()) throw InputError(where + ": expected an array of numbers");
    EigenvalueList out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(detail::number_field(a[i], where + "[" + std::to_string(i) + "]"));
    return out;
  };
  const auto lists = [&](const Json& a, const std::string& where) {
    if (!a.is_array()) throw InputError(where + ": expected an array of arrays");
    std::vector<EigenvalueList> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(list(a[i], where + "[" + std::to_string(i) + "]"));
    return out;
  };
  if (kind == "powers") return powers_spec(detail::number_field(detail::field(j, "lambda", "spec"), "spec.lambda"));
  if (kind == "constant") return ITPFISpec::constant(list(detail::field(j, "alpha", "spec"), "spec.alpha"));
  if (kind == "periodic") {
    std::vector<EigenvalueList> prefix;
    if (j.contains("prefix")) prefix = lists(j["prefix"], "spec.prefix");
    return ITPFISpec::periodic(std::move(prefix), lists(detail::field(j, "cycle", "spec"), "spec.cycle"));
  }
  if (kind == "explicit") return ITPFISpec::explicit_list(lists(detail::field(j, "factors", "spec"), "spec.factors"));
  throw InputError("spec.kind: unknown kind '" + kind + "' (powers, constant, periodic, explicit)");
}

// ---------------------------------------------------------------- reports

inline Json to_json(const ReductionReport& r) {
  Json ces = Json::array();
  for (const auto& c : r.counterexamples)
    ces.push_back({{"first", c.first},
                   {"second", c.second},
                   {"side", c.side == Counterexample::Side::EOnly ? "E" : "F"},
                   {"description", c.description}});
  return {{"holds", r.holds}, {"pairs", r.pairs_checked}, {"total_counterexamples", r.total_counterexamples},
          {"counterexamples", ces}};
}

inline Json to_json(const AlgebraReport& r) {
  Json blocks = Json::array();
  for (const auto& b : r.blocks) blocks.push_back({{"size", b.size}, {"weight", b.weight}});
  return {{"dimension", r.dimension}, {"center_dim", r.center_dim}, {"is_factor", r.is_factor}, {"blocks", blocks}};
}

inline Json to_json(const OrbitSignature& s) {
  Json out = Json::array();
  for (const auto& orbit : s.orbits()) {
    Json o = Json::array();
    for (const auto& w : orbit) o.push_back(w.str());
    out.push_back(o);
  }
  return out;
}

inline Json to_json(const CartanReport& r) {
  return {{"is_masa", r.is_masa},
          {"normalizer_dense", r.normalizer_dense},
          {"diagonal_dim", r.diagonal_dim},
          {"relative_commutant_dim", r.relative_commutant_dim},
          {"normalizer_span_dim", r.normalizer_span_dim},
          {"cartan_invariant", to_json(r.cartan_invariant)}};
}

inline Json to_json(const ICCCertificate& c) {
  Json j{{"inner_radius", c.inner_radius}, {"outer_radius", c.outer_radius}, {"threshold", c.threshold},
         {"passed", c.passed},             {"inner_size", c.inner_size},     {"outer_size", c.outer_size},
         {"witness", c.witness_text},      {"summary", c.summary()}};
  j["min_conjugates"] = c.min_conjugates == std::numeric_limits<std::uint64_t>::max() ? Json(nullptr) : Json(c.min_conjugates);
  return j;
}

inline Json to_json(const GroupFingerprint& f) {
  Json ranks = Json::object();
  for (const auto& [rank, count] : f.rank_counts) ranks[std::to_string(rank)] = count;
  return {{"order_exponent", f.order_exp},
          {"center_exponent", f.center_order_exp},
          {"abelianization_exponent", f.abelianization_exp},
          {"rank_counts", ranks}};
}

/// Two-space indentation and a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace vnlab
