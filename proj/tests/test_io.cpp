#include <gtest/gtest.h>

#include "vnlab/io.hpp"

using namespace vnlab;

namespace {

const char* kSwap = R"({
  "name": "swap",
  "group": {"name": "Z2", "elements": ["e", "s"], "table": [["e", "s"], ["s", "e"]]},
  "space": {"atoms": ["a", "b"], "weights": ["1/2", "1/2"]},
  "perm": {"e": [0, 1], "s": ["b", "a"]}
})";

}  // namespace

TEST(Json, MalformedReportsLocation) {
  try {
    parse_json("{\"n\": 3,,}", "g.json");
    FAIL();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("g.json"), std::string::npos);
    EXPECT_NE(msg.find("line 1, column"), std::string::npos) << msg;
  }
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), InputError);
}

TEST(Json, ActionDocument) {
  const auto a = action_from_json(parse_json(kSwap, "swap"));
  EXPECT_EQ(a.name(), "swap");
  EXPECT_EQ(a.group().order(), 2u);
  EXPECT_TRUE(a.space().weight(0).exact());
  const auto rep = action_report(a);
  EXPECT_TRUE(rep.is_free);
  EXPECT_TRUE(rep.is_ergodic);
  // identity may be omitted
  auto j = parse_json(kSwap, "swap");
  j["perm"].erase("e");
  EXPECT_EQ(action_from_json(j).apply(0, 1), 1u);
}

TEST(Json, ActionValidation) {
  auto j = parse_json(kSwap, "swap");
  j["perm"].erase("s");
  EXPECT_THROW(action_from_json(j), InputError);
  j = parse_json(kSwap, "swap");
  j["perm"]["s"] = {0, 0};
  EXPECT_THROW(action_from_json(j), InputError);
  j = parse_json(kSwap, "swap");
  j["space"]["weights"] = {"1/3", "2/3"};
  EXPECT_THROW(action_from_json(j), NotMeasurePreserving);
  j = parse_json(kSwap, "swap");
  j["space"]["weights"] = {"1/2", "1/3"};
  EXPECT_THROW(action_from_json(j), InputError);
  j = parse_json(kSwap, "swap");
  j["group"]["table"] = {{"e", "s"}, {"s", "s"}};
  EXPECT_THROW(action_from_json(j), InputError);
  j = parse_json(kSwap, "swap");
  j.erase("space");
  try {
    action_from_json(j);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("space"), std::string::npos);
  }
}

TEST(Json, GroupDocuments) {
  EXPECT_EQ(group_from_json(parse_json(R"({"spec": "S3xZ2"})", "g")).order(), 12u);
  const auto z3 = group_from_json(parse_json(R"({"elements": [0, 1, 2], "table": [[0,1,2],[1,2,0],[2,0,1]]})", "g"));
  EXPECT_EQ(z3.order(), 3u);
  EXPECT_THROW(group_from_json(parse_json(R"({"elements": [0, 1], "table": [[0,1]]})", "g")), InputError);
}

TEST(GroupSpec, Factors) {
  EXPECT_EQ(parse_group_spec("A5xZ2").order(), 120u);
  EXPECT_EQ(parse_group_spec("Q8").order(), 8u);
  EXPECT_EQ(parse_group_spec("D4xS3xZ5").order(), 8u * 6 * 5);
  EXPECT_THROW(parse_group_spec("B4"), InputError);
  EXPECT_THROW(parse_group_spec("Z"), InputError);
  EXPECT_THROW(parse_group_spec("S9"), InputError);
  EXPECT_FALSE(parse_mekler_factor("Z2").has_value());
  const auto m = parse_mekler_factor("M(P3,2)");
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->group().n(), 6u);
  EXPECT_EQ(m->group().order_exponent(), 17u);
  EXPECT_EQ(m->acting().order(), 2u);
  EXPECT_EQ(parse_mekler_factor("M(C5,3)")->acting().order(), 3u);
  EXPECT_THROW(parse_mekler_factor("M(P3)"), InputError);
  EXPECT_THROW(parse_mekler_factor("M(Q3,2)"), InputError);
}

TEST(Json, Graphs) {
  const auto g = graph_from_json(parse_json(R"({"n": 5, "edges": [[0,1],[1,2],[2,3],[3,4],[4,0]]})", "g"));
  EXPECT_EQ(g, SimpleGraph::cycle(5));
  EXPECT_EQ(graph_from_json(graph_to_json(g)), g);
  EXPECT_THROW(graph_from_json(parse_json(R"({"n": 2, "edges": [[0,0]]})", "g")), InputError);
  EXPECT_THROW(graph_from_json(parse_json(R"({"n": 2, "edges": [[0,2]]})", "g")), InputError);
  EXPECT_THROW(graph_from_json(parse_json(R"({"n": -1, "edges": []})", "g")), InputError);
  EXPECT_EQ(named_graph("P3"), SimpleGraph::path(3));
  EXPECT_EQ(named_graph("Star3").size(), 4u);
}

TEST(Json, ItpfiSpecs) {
  const auto p = itpfi_from_json(parse_json(R"({"kind": "powers", "lambda": 0.5})", "s"));
  EXPECT_EQ(p.factor(9), powers_eigenvalues(0.5));
  const auto q = itpfi_from_json(parse_json(R"({"kind": "periodic", "prefix": [[1.0]], "cycle": [[0.5, 0.5]]})", "s"));
  EXPECT_EQ(q.factor(0), EigenvalueList{1.0});
  EXPECT_EQ(itpfi_from_json(parse_json(R"({"kind": "explicit", "factors": [[0.25, 0.75]]})", "s")).defined_factors(), 1u);
  EXPECT_THROW(itpfi_from_json(parse_json(R"({"kind": "powers", "lambda": 2})", "s")), InputError);
  EXPECT_THROW(itpfi_from_json(parse_json(R"({"kind": "weird"})", "s")), InputError);
  EXPECT_THROW(itpfi_from_json(parse_json(R"({"kind": "constant", "alpha": [0.5, "x"]})", "s")), InputError);
}

TEST(Json, Reports) {
  ReductionReport r;
  r.holds = false;
  r.pairs_checked = 3;
  r.total_counterexamples = 1;
  r.counterexamples.push_back({0, 2, Counterexample::Side::FOnly, "a | c"});
  const auto j = to_json(r);
  EXPECT_EQ(j["holds"], false);
  EXPECT_EQ(j["pairs"], 3);
  EXPECT_EQ(j["counterexamples"][0]["side"], "F");
  const auto fp = to_json(fingerprint(MeklerGroup(SimpleGraph::path(3))));
  EXPECT_EQ(fp["order_exponent"], 4);
  const auto icc = to_json(icc_certificate(named_oracle("F2"), 0, 1, 1));
  EXPECT_TRUE(icc["min_conjugates"].is_null());
}
