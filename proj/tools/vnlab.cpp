// vnlab command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 cap exceeded, 3 failed
// consistency check, 64 usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vnlab/acceptance.hpp"
#include "vnlab/io.hpp"

namespace {

using vnlab::Json;

enum ExitCode { kOk = 0, kInvalid = 1, kCap = 2, kInconsistent = 3, kUsage = 64 };

struct RunConfig {
  std::string output;
  std::string format;  // json | csv; empty picks the subcommand default
  std::uint64_t seed = vnlab::kDefaultSeed;
  double tol = vnlab::kDefaultTol;
  std::string caps_text;
  vnlab::Caps caps;

  void validate() {
    if (!(tol > 0.0 && tol <= 1e-3)) throw vnlab::InputError("--tol must lie in (0, 1e-3]");
    if (!format.empty() && format != "json" && format != "csv") throw vnlab::InputError("--format must be json or csv");
    caps = vnlab::parse_caps(caps_text, vnlab::caps_from_environment());
  }
};

struct Outcome {
  std::string text;
  int code = kOk;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void flatten(const Json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out += csv_field(prefix) + "," + csv_field(scalar_text(j)) + "\n";
  }
}

/// JSON, or key,value rows with dotted keys.
Outcome emit(const Json& j, const RunConfig& cfg, int code = kOk) {
  if (cfg.format == "csv") {
    std::string out = "key,value\n";
    flatten(j, "", out);
    return {out, code};
  }
  return {vnlab::dump(j), code};
}

std::string blocks_text(const vnlab::AlgebraReport& r) {
  std::string s;
  for (const auto& b : r.blocks) s += (s.empty() ? "" : " ") + std::to_string(b.size) + ":" + vnlab::format_real(b.weight);
  return s;
}

// ---------------------------------------------------------------- subcommands

Outcome run_crossed(const RunConfig& cfg, const std::string& path) {
  const auto action = vnlab::action_from_json(vnlab::read_json_file(path), cfg.caps);
  const auto act = vnlab::action_report(action);
  const auto cp = vnlab::crossed_product(action, cfg.caps, cfg.tol);
  const auto alg = vnlab::analyze(cp.algebra(), cfg.seed);
  const auto cartan = vnlab::cartan_report(cp, cfg.seed);
  const bool matches = cartan.cartan_invariant == act.signature;
  if (cfg.format == "csv") {
    std::string out = "action,free,ergodic,dimension,center_dim,is_factor,is_masa,normalizer_dense,blocks,cartan_invariant\n";
    out += csv_field(action.name()) + "," + (act.is_free ? "true" : "false") + "," + (act.is_ergodic ? "true" : "false") +
           "," + std::to_string(alg.dimension) + "," + std::to_string(alg.center_dim) + "," +
           (alg.is_factor ? "true" : "false") + "," + (cartan.is_masa ? "true" : "false") + "," +
           (cartan.normalizer_dense ? "true" : "false") + "," + csv_field(blocks_text(alg)) + "," +
           csv_field(cartan.cartan_invariant.str()) + "\n";
    return {out, matches ? kOk : kInconsistent};
  }
  Json j{{"action", action.name()},
         {"group_order", action.group().order()},
         {"atoms", action.space().size()},
         {"free", act.is_free},
         {"ergodic", act.is_ergodic},
         {"algebra", vnlab::to_json(alg)},
         {"cartan", vnlab::to_json(cartan)},
         {"orbit_signature", vnlab::to_json(act.signature)},
         {"cartan_matches_orbits", matches}};
  return emit(j, cfg, matches ? kOk : kInconsistent);
}

Outcome run_fm_check(const RunConfig& cfg, const std::string& a, const std::string& b) {
  const auto s = vnlab::action_from_json(vnlab::read_json_file(a), cfg.caps);
  const auto t = vnlab::action_from_json(vnlab::read_json_file(b), cfg.caps);
  const auto r = vnlab::feldman_moore_check(s, t, cfg.caps);
  Json j{{"first", s.name()},
         {"second", t.name()},
         {"orbit_equivalent", r.oe},
         {"cartan_equal", r.cartan_equal},
         {"consistent", r.consistent}};
  return emit(j, cfg, r.consistent ? kOk : kInconsistent);
}

Outcome run_groupvna(const RunConfig& cfg, const std::string& path) {
  const auto g = vnlab::group_from_json(vnlab::read_json_file(path));
  const auto alg = vnlab::analyze(vnlab::left_regular_algebra(g, cfg.caps, cfg.tol), cfg.seed);
  const auto classes = vnlab::conjugacy_classes(g, cfg.caps).size();
  const bool consistent = static_cast<std::size_t>(alg.center_dim) == classes;
  Json j{{"group", g.name()},
         {"order", g.order()},
         {"conjugacy_classes", classes},
         {"algebra", vnlab::to_json(alg)},
         {"center_matches_classes", consistent}};
  return emit(j, cfg, consistent ? kOk : kInconsistent);
}

Outcome run_icc(const RunConfig& cfg, const std::string& name, int inner, int outer, std::uint64_t threshold) {
  if (inner < 0 || outer < 0) throw vnlab::InputError("radii must be non-negative");
  const auto oracle = vnlab::named_oracle(name);
  Json j = vnlab::to_json(vnlab::icc_certificate(oracle, inner, outer, threshold, cfg.caps));
  j["group"] = oracle.name();
  if (!oracle.note().empty()) j["generators"] = oracle.note();
  return emit(j, cfg);
}

vnlab::NiceVariant parse_variant(const std::string& v) {
  if (v == "literal") return vnlab::NiceVariant::Literal;
  if (v == "strict") return vnlab::NiceVariant::StrictWitness;
  throw vnlab::InputError("--variant must be literal or strict");
}

Outcome run_mekler_graph(const RunConfig& cfg, const std::string& path, std::uint32_t p, const std::string& variant) {
  const auto graph = vnlab::graph_from_json(vnlab::read_json_file(path));
  const auto nice = vnlab::nice_report(graph, parse_variant(variant));
  const vnlab::MeklerGroup group(graph, p);
  Json failed = Json::array();
  for (const auto& f : nice.failed) failed.push_back(f);
  Json j{{"graph", vnlab::graph_to_json(graph)},
         {"p", p},
         {"nice", nice.nice},
         {"nice_variant", variant},
         {"failed_clauses", failed},
         {"order", std::to_string(p) + "^" + std::to_string(group.order_exponent())},
         {"fingerprint", vnlab::to_json(vnlab::fingerprint(group))}};
  return emit(j, cfg);
}

Outcome run_mekler_iso(const RunConfig& cfg, const std::string& a, const std::string& b, std::uint32_t p) {
  const auto g1 = vnlab::graph_from_json(vnlab::read_json_file(a), a);
  const auto g2 = vnlab::graph_from_json(vnlab::read_json_file(b), b);
  const auto phi = vnlab::graph_iso(g1, g2);
  const auto f1 = vnlab::fingerprint(vnlab::MeklerGroup(g1, p));
  const auto f2 = vnlab::fingerprint(vnlab::MeklerGroup(g2, p));
  Json j{{"graph_iso", phi.has_value()}, {"fingerprints_equal", f1 == f2}, {"p", p}};
  j["map"] = phi ? Json(*phi) : Json(nullptr);
  bool consistent = !phi || f1 == f2;
  if (phi) {
    // the induced map is checked for the homomorphism law and bijectivity
    vnlab::induced_group_iso(*phi, vnlab::MeklerGroup(g1, p), vnlab::MeklerGroup(g2, p), 2000, cfg.seed);
    j["induced_group_iso"] = "verified";
  }
  if (std::max(g1.size(), g2.size()) <= vnlab::kExactIsoMaxVertices) {
    const auto exact = vnlab::exact_iso(g1, g2, p);
    j["exact_iso"] = exact.isomorphic;
    j["exact_iso_nodes"] = exact.nodes;
    consistent = consistent && exact.isomorphic == phi.has_value();
  } else {
    j["exact_iso"] = nullptr;
    if (!phi && f1 == f2) j["note"] = "fingerprint collision between non-isomorphic graphs";
  }
  j["consistent"] = consistent;
  return emit(j, cfg, consistent ? kOk : kInconsistent);
}

Outcome run_mekler_centralizer(const RunConfig& cfg, const std::string& spec, std::uint32_t p) {
  auto factors = vnlab::detail::split_top_level(spec, 'x');
  auto mekler = vnlab::parse_mekler_factor(factors.back(), p);
  for (std::size_t i = 0; i + 1 < factors.size(); ++i)
    if (vnlab::parse_mekler_factor(factors[i], p))
      throw vnlab::InputError("a Mekler factor M(...) may only appear last");
  Json j{{"group", spec}};
  Json elems = Json::array();
  if (!mekler) {
    const auto g = vnlab::parse_group_spec(spec);
    const auto r = vnlab::char_support_centralizer(g, cfg.caps);
    for (auto x : r.centralizer) elems.push_back(g.label(x));
    j["order"] = std::to_string(r.order);
    j["perfect"] = r.perfect;
    j["commutator_order"] = r.commutator_order;
    j["support_size"] = r.support_size;
    j["method"] = "enumeration";
  } else {
    factors.pop_back();
    vnlab::FinGroup left = vnlab::trivial_group();
    if (!factors.empty()) {
      std::string rest;
      for (std::size_t i = 0; i < factors.size(); ++i) rest += (i ? "x" : "") + factors[i];
      left = vnlab::parse_group_spec(rest);
    }
    const auto r = vnlab::char_support_centralizer(left, *mekler, cfg.caps);
    for (const auto& [x, y] : r.centralizer) elems.push_back("(" + left.label(x) + "," + mekler->format(y) + ")");
    j["order"] = std::to_string(left.order()) + " * " + std::to_string(p) + "^" +
                 std::to_string(mekler->group().order_exponent()) + " * " + std::to_string(mekler->acting().order());
    j["perfect"] = r.perfect;
    j["left_commutator_order"] = r.left_commutator_order;
    j["method"] = "structured: centralizer of D equals the centre since D generates the group";
    j["finite_analog"] = true;
  }
  j["centralizer_size"] = elems.size();
  j["centralizer"] = elems;
  return emit(j, cfg);
}

std::vector<double> parse_grid(const std::string& grid, const Json& spec_json) {
  const auto parts = vnlab::detail::split_top_level(grid, ':');
  const auto num = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw vnlab::InputError("bad number '" + s + "' in --grid");
    return v;
  };
  if (parts[0] == "lattice") {
    if (parts.size() != 3) throw vnlab::InputError("--grid lattice:<m_lo>:<m_hi>");
    if (!spec_json.contains("lambda")) throw vnlab::InputError("--grid lattice needs a powers spec with lambda");
    return vnlab::powers_lattice(spec_json["lambda"].get<double>(), static_cast<int>(num(parts[1])),
                                 static_cast<int>(num(parts[2])));
  }
  if (parts[0] == "linspace") {
    if (parts.size() != 4) throw vnlab::InputError("--grid linspace:<start>:<stop>:<count>");
    const double a = num(parts[1]), b = num(parts[2]);
    const double count = num(parts[3]);
    if (count < 1 || count > 1e6 || count != std::floor(count)) throw vnlab::InputError("linspace count must be in 1..1e6");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  std::vector<double> out;
  for (const auto& s : vnlab::detail::split_top_level(grid, ',')) out.push_back(num(s));
  return out;
}

Outcome run_itpfi_scan(const RunConfig& cfg, const std::string& path, const std::string& grid, double zero_tol) {
  const auto spec_json = vnlab::read_json_file(path);
  const auto spec = vnlab::itpfi_from_json(spec_json);
  const auto rows = vnlab::tset_scan(spec, parse_grid(grid, spec_json), zero_tol);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back({{"t", r.t},
                     {"verdict", r.verdict.str()},
                     {"maxBlockTerm", r.verdict.block_max_term},
                     {"partialSum", r.verdict.partial_sum}});
    return emit(Json{{"rows", arr}}, cfg);
  }
  return {vnlab::tset_csv(rows), kOk};
}

Outcome run_reduce(const RunConfig& cfg, const std::string& harness, std::size_t max_n, std::size_t max_prefix,
                   std::size_t max_period, std::uint32_t p, const std::string& variant) {
  vnlab::ReductionReport r;
  std::size_t samples = 0;
  if (harness == "e0") {
    if (max_prefix > 8 || max_period > 8) throw vnlab::InputError("e0 harness limits prefix and period to 8");
    const auto xs = vnlab::all_eventually_periodic(max_prefix, max_period);
    samples = xs.size();
    r = vnlab::e0_reduction(xs);
  } else if (harness == "mekler") {
    if (max_n > 6) throw vnlab::InputError("mekler harness limits --max-n to 6");
    const auto v = parse_variant(variant);
    const auto graphs = vnlab::nice_graphs(max_n, [v](const vnlab::SimpleGraph& g) { return vnlab::is_nice(g, v); });
    samples = graphs.size();
    r = vnlab::mekler_fingerprint_reduction(graphs, p);
  } else if (harness == "feldman-moore") {
    std::vector<vnlab::FiniteAction> actions;
    for (const auto& e : vnlab::action_catalog(cfg.caps)) actions.push_back(e.action);
    samples = actions.size();
    r = vnlab::feldman_moore_reduction(actions, cfg.caps);
  } else {
    throw vnlab::InputError("unknown harness '" + harness + "' (e0, mekler, feldman-moore)");
  }
  Json j = vnlab::to_json(r);
  j["harness"] = harness;
  j["samples"] = samples;
  return emit(j, cfg, r.holds ? kOk : kInconsistent);
}

Outcome run_catalog_nice(const RunConfig& cfg, std::size_t max_n, const std::string& variant) {
  if (max_n > 6) throw vnlab::InputError("--max-n is limited to 6");
  const auto v = parse_variant(variant);
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t n = 1; n <= max_n; ++n) counts[n] = 0;
  const auto graphs = vnlab::nice_graphs(max_n, [v](const vnlab::SimpleGraph& g) { return vnlab::is_nice(g, v); });
  for (const auto& g : graphs) ++counts[g.size()];
  if (cfg.format == "csv") {
    std::string out = "n,edges\n";
    for (const auto& g : graphs) out += std::to_string(g.size()) + "," + csv_field(vnlab::graph_to_json(g)["edges"].dump()) + "\n";
    return {out, kOk};
  }
  Json c = Json::object();
  for (const auto& [n, k] : counts) c[std::to_string(n)] = k;
  Json list = Json::array();
  for (const auto& g : graphs) list.push_back(vnlab::graph_to_json(g));
  return emit(Json{{"variant", variant}, {"max_n", max_n}, {"total", graphs.size()}, {"counts", c}, {"graphs", list}}, cfg);
}

Outcome run_acceptance_cmd(const RunConfig& cfg, const std::vector<int>& ids, const std::string& variant) {
  vnlab::AcceptanceOptions o;
  o.seed = cfg.seed;
  o.tol = cfg.tol;
  o.caps = cfg.caps;
  o.nice = parse_variant(variant);
  for (int id : ids)
    if (id < 1 || id > 14) throw vnlab::InputError("criterion ids run from 1 to 14");
  o.only = ids;
  const auto report = vnlab::run_acceptance(o, [](const vnlab::CriterionResult& r) {
    std::fprintf(stderr, "%s\n", r.table_line().c_str());
  });
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : report.results)
      arr.push_back({{"id", r.id}, {"title", r.title}, {"ok", r.ok}, {"passed", r.passed()}, {"detail", r.detail}});
    return emit(Json{{"passed", report.passed()}, {"criteria", arr}}, cfg, report.passed() ? kOk : kInconsistent);
  }
  return {report.table(), report.passed() ? kOk : kInconsistent};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vnlab: finite-dimensional von Neumann algebra and Mekler group experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("-o,--output", cfg.output, "Write the report to this file instead of stdout");
  app.add_option("--format", cfg.format, "json or csv");
  app.add_option("--seed", cfg.seed, "Seed for every randomized step");
  app.add_option("--tol", cfg.tol, "Numerical tolerance in (0, 1e-3]");
  app.add_option("--caps", cfg.caps_text, "Cap overrides key=value,... (also VNLAB_CAPS)");

  std::function<Outcome()> action;

  std::string path_a, path_b, name, grid = "lattice:-5:5", variant = "literal", harness;
  std::uint32_t p = 3;
  int inner = 1, outer = 3;
  std::uint64_t threshold = 10;
  double zero_tol = 1e-12;
  std::size_t max_n = 5, max_prefix = 3, max_period = 3;
  std::vector<int> ids;

  auto* crossed = app.add_subcommand("crossed", "Crossed product of a finite action: blocks, MASA and Cartan report");
  crossed->add_option("action", path_a, "Action JSON")->required();
  crossed->callback([&] { action = [&] { return run_crossed(cfg, path_a); }; });

  auto* fm = app.add_subcommand("fm-check", "Orbit equivalence against Cartan invariant equality");
  fm->add_option("first", path_a, "Action JSON")->required();
  fm->add_option("second", path_b, "Action JSON")->required();
  fm->callback([&] { action = [&] { return run_fm_check(cfg, path_a, path_b); }; });

  auto* gv = app.add_subcommand("groupvna", "Block structure of L(G) for a finite group");
  gv->add_option("group", path_a, "Group JSON")->required();
  gv->callback([&] { action = [&] { return run_groupvna(cfg, path_a); }; });

  auto* icc = app.add_subcommand("icc", "Finite ICC certificate for a named group oracle");
  icc->add_option("oracle", name, "F<n>, Z<d>, SL2Z, SL3Z, SL2Z:A,B or products AxB")->required();
  icc->add_option("--r", inner, "Inner radius");
  icc->add_option("--R", outer, "Outer radius");
  icc->add_option("--threshold", threshold, "Minimum number of conjugates");
  icc->callback([&] { action = [&] { return run_icc(cfg, name, inner, outer, threshold); }; });

  auto* mekler = app.add_subcommand("mekler", "Mekler groups");
  mekler->require_subcommand(1);
  auto* mg = mekler->add_subcommand("graph", "Niceness, order and fingerprint of G(graph)");
  mg->add_option("graph", path_a, "Graph JSON")->required();
  mg->add_option("--p", p, "Odd prime");
  mg->add_option("--variant", variant, "literal or strict niceness");
  mg->callback([&] { action = [&] { return run_mekler_graph(cfg, path_a, p, variant); }; });
  auto* mi = mekler->add_subcommand("iso", "Graph isomorphism against group isomorphism");
  mi->add_option("first", path_a, "Graph JSON")->required();
  mi->add_option("second", path_b, "Graph JSON")->required();
  mi->add_option("--p", p, "Odd prime");
  mi->callback([&] { action = [&] { return run_mekler_iso(cfg, path_a, path_b, p); }; });
  auto* mc = mekler->add_subcommand("centralizer", "Centralizer of the character support");
  mc->add_option("spec", name, "Factors joined by x: Z<n>, S<n>, A<n>, D<n>, Q8, and a final M(<graph>,<k>)")->required();
  mc->add_option("--p", p, "Odd prime for the Mekler factor");
  mc->callback([&] { action = [&] { return run_mekler_centralizer(cfg, name, p); }; });

  auto* itpfi = app.add_subcommand("itpfi", "ITPFI T-set scans");
  itpfi->require_subcommand(1);
  auto* scan = itpfi->add_subcommand("scan", "Classify grid points as In, Out or Undecided");
  scan->add_option("spec", path_a, "Spec JSON")->required();
  scan->add_option("--grid", grid, "lattice:<m_lo>:<m_hi>, linspace:<a>:<b>:<n>, or t1,t2,...");
  scan->add_option("--zero-tol", zero_tol, "Tolerance for a vanishing block term");
  scan->callback([&] { action = [&] { return run_itpfi_scan(cfg, path_a, grid, zero_tol); }; });

  auto* reduce = app.add_subcommand("reduce", "Check a wired reduction harness on its sample set");
  reduce->add_option("harness", harness, "e0, mekler or feldman-moore")->required();
  reduce->add_option("--max-n", max_n, "Largest graph size (mekler)");
  reduce->add_option("--max-prefix", max_prefix, "Longest prefix (e0)");
  reduce->add_option("--max-period", max_period, "Longest period (e0)");
  reduce->add_option("--p", p, "Odd prime (mekler)");
  reduce->add_option("--variant", variant, "literal or strict niceness (mekler)");
  reduce->callback([&] {
    action = [&] { return run_reduce(cfg, harness, max_n, max_prefix, max_period, p, variant); };
  });

  auto* catalog = app.add_subcommand("catalog", "Catalogs");
  catalog->require_subcommand(1);
  auto* cn = catalog->add_subcommand("nice", "Nice graphs on at most --max-n vertices");
  cn->add_option("--max-n", max_n, "Largest vertex count");
  cn->add_option("--variant", variant, "literal or strict");
  cn->callback([&] { action = [&] { return run_catalog_nice(cfg, max_n, variant); }; });

  auto* acc = app.add_subcommand("acceptance", "Run the acceptance criteria");
  acc->add_option("ids", ids, "Criterion ids (default all)");
  acc->add_option("--variant", variant, "literal or strict niceness");
  acc->callback([&] { action = [&] { return run_acceptance_cmd(cfg, ids, variant); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    cfg.validate();
    const Outcome out = action();
    if (cfg.output.empty()) {
      std::cout << out.text;
    } else {
      std::ofstream file(cfg.output);
      if (!file) throw vnlab::InputError("cannot write " + cfg.output);
      file << out.text;
    }
    return out.code;
  } catch (const vnlab::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const vnlab::InputError& e) {
    std::cerr << "invalid input (" << vnlab::error_kind(e) << "): " << e.what() << "\n";
    return kInvalid;
  } catch (const vnlab::ConsistencyFailure& e) {
    std::cerr << "consistency check failed: " << e.what() << "\n";
    return kInconsistent;
  } catch (const vnlab::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kInconsistent;
  }
}
