#include <catch2/catch_amalgamated.hpp>

#include "cnfgraph/io.hpp"
#include "test_util.hpp"

using namespace cnfgraph;
using testutil::make_system;

TEST_CASE("instance json round trip", "[io]") {
  Instance inst;
  inst.cs = make_system<Mask64>(17, {0x1a2b, 0x00000, 0x1ffff}, {0x0f0f0});
  ModelParams params;
  params.d = 3.5;
  params.p = 0.25;
  params.n_left = 3;
  params.n_right = 1;
  params.n_clauses = 17;
  params.seed = 123456789;
  inst.params = params;
  inst.seed = 123456789;

  json j = instance_to_json(inst);
  REQUIRE(j["n"] == 17);
  REQUIRE(j["left_masks"][0] == "01a2b");
  REQUIRE(j["left_masks"][1] == "00000");
  REQUIRE(j["left_masks"][2] == "1ffff");
  REQUIRE(j["right_masks"][0] == "0f0f0");

  Instance back = instance_from_string(j.dump());
  REQUIRE(back.clause_count() == 17);
  REQUIRE(std::holds_alternative<ClauseSystem64>(back.cs));
  REQUIRE(instance_to_json(back).dump() == j.dump());
  REQUIRE(back.params->p == 0.25);
  REQUIRE(back.params->seed == 123456789);
}

TEST_CASE("wide instances load as dynamic masks", "[io]") {
  Instance inst;
  inst.cs = make_system<MaskDyn>(70, {0x5, 0x0}, {0x7});
  json j = instance_to_json(inst);
  REQUIRE(j["left_masks"][0].get<std::string>().size() == 18);

  Instance back = instance_from_string(j.dump());
  REQUIRE(std::holds_alternative<ClauseSystemDyn>(back.cs));
  REQUIRE(instance_to_json(back).dump() == j.dump());
}

TEST_CASE("zero-clause masks serialize as a single digit", "[io]") {
  Instance inst;
  inst.cs = make_system<Mask64>(0, {0, 0}, {0});
  json j = instance_to_json(inst);
  REQUIRE(j["left_masks"][0] == "0");
  REQUIRE(instance_from_string(j.dump()).n_left() == 2);
}

TEST_CASE("instance validation failures", "[io]") {
  REQUIRE_THROWS_AS(instance_from_string("[1,2]"), std::invalid_argument);
  REQUIRE_THROWS_AS(
      instance_from_string(R"({"n":4,"left_masks":["g"],"right_masks":[]})"),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      instance_from_string(R"({"n":4,"left_masks":["ff"],"right_masks":[]})"),
      std::invalid_argument);
  // bit above n
  REQUIRE_THROWS_AS(
      instance_from_string(R"({"n":3,"left_masks":["8"],"right_masks":[]})"),
      std::invalid_argument);
  // params disagree with the arrays
  REQUIRE_THROWS_AS(instance_from_string(
                        R"({"n":1,"left_masks":["0"],"right_masks":["1"],
         "params":{"d":1,"p":0.5,"n_left":2,"n_right":1,"seed":0}})"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(instance_from_string(
                        R"({"n":1,"left_masks":["0"],"right_masks":["1"],
         "params":{"d":1,"p":0.5,"n_left":1,"n_right":1,"n_clauses":2,"seed":0}})"),
                    std::invalid_argument);
}

TEST_CASE("edge list format", "[io]") {
  ExplicitBipartiteGraph g;
  g.n_left = 2;
  g.n_right = 3;
  g.edges = {{0, 1}, {1, 0}, {1, 2}};
  std::string text = write_edge_list(g);
  REQUIRE(text == "p bip 2 3 3\n0 1\n1 0\n1 2\n");

  ExplicitBipartiteGraph back = edge_list_from_string(text);
  REQUIRE(back.n_left == 2);
  REQUIRE(back.edges == g.edges);

  // out-of-order input is normalized on read
  ExplicitBipartiteGraph shuffled =
      edge_list_from_string("p bip 2 3 3\n1 2\n0 1\n1 0\n");
  REQUIRE(shuffled.edges == g.edges);

  REQUIRE_THROWS_AS(edge_list_from_string("q bip 1 1 0\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(edge_list_from_string("p bip 2 2 2\n0 0\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(edge_list_from_string("p bip 2 2 2\n0 0\n0 0\n"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(edge_list_from_string("p bip 2 2 1\n0 5\n"), std::invalid_argument);
}

TEST_CASE("k22 report serialization honors the summary flag", "[io]") {
  K22Report rep;
  rep.total = 5;
  rep.algorithm = K22Algorithm::sos;
  rep.left_participation = {1, 2};
  rep.right_participation = {3};
  json full = k22_report_to_json(rep, false);
  REQUIRE(full["total"] == 5);
  REQUIRE(full["algorithm"] == "sos");
  REQUIRE(full["left_participation"].size() == 2);
  json summary = k22_report_to_json(rep, true);
  REQUIRE_FALSE(summary.contains("left_participation"));
  REQUIRE_FALSE(summary.contains("right_participation"));
}

TEST_CASE("experiment csv schema is frozen", "[io]") {
  ExperimentReport rep;
  std::string csv = experiment_report_to_csv(rep);
  std::string header = csv.substr(0, csv.find('\n'));
  REQUIRE(header ==
          "replicate,seed,edge_count,average_degree,k22_total,surviving_count,"
          "surviving_average_degree,pruned_k22_total,distinct_neighborhoods,"
          "lower_bound,n_clauses,degree_band_fraction,status");
}

TEST_CASE("doubles format deterministically", "[io]") {
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(0.0) == "0");
  REQUIRE(format_double(1.0 / 3.0) == format_double(1.0 / 3.0));
  double x = 0.1 + 0.2;
  REQUIRE(format_double(x) == format_double(0.30000000000000004));
}
