// Copyright 2026 The pwqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "pwqs/io.hpp"

using namespace pwqs;
using io::json;

TEST(Io, GraphJsonRoundTrip) {
  std::mt19937 rng(4);
  for (int t = 0; t < 50; ++t) {
    Graph g = empty_graph(2 + static_cast<int>(rng() % 8), static_cast<int>(rng() % 5) - 2);
    for (int u : g.vertices())
      for (int v : g.vertices())
        if (u < v && rng() % 2) g.add_edge(u, v);
    EXPECT_EQ(io::graph_from_json(json::parse(io::to_json(g).dump())), g);
    EXPECT_EQ(io::graph_from_dot(io::to_dot(g)), g);
  }
  EXPECT_THROW(io::graph_from_json(json{{"vertices", {1}}}), Error);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"vertices":[1,2],"edges":[[1,3]]})")), Error);
}

TEST(Io, DotExample) {
  const std::string dot = io::to_dot(path_graph(3));
  EXPECT_EQ(dot, "graph G {\n  1;\n  2;\n  3;\n  1 -- 2;\n  2 -- 3;\n}\n");
  EXPECT_THROW(io::graph_from_dot("digraph {"), Error);
  EXPECT_THROW(io::graph_from_dot("graph G {\n  1 -- x;\n}\n"), Error);
}

TEST(Io, ProtocolResultJson) {
  json j = io::to_json(run_path(3, false));
  for (const char* key : {"protocol", "final_graph", "exponent", "probability", "record", "m_minus", "corrections", "intermediates"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("exponent"), 2);
  EXPECT_DOUBLE_EQ(j.at("probability").get<double>(), 0.25);
  EXPECT_EQ(io::graph_from_json(j.at("final_graph")), run_path(3, false).final_graph);
  EXPECT_TRUE(j.at("intermediates").contains("comb"));
}

TEST(Io, GhzStateDump) {
  CircuitRun run = run_circuit(ghz_chain_circuit(3));
  json j = io::to_json(run.state);
  ASSERT_EQ(j.at("terms").size(), 2u);
  for (const auto& t : j.at("terms")) {
    EXPECT_NEAR(t.at("amplitude")[0].get<double>(), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_EQ(t.at("amplitude")[1].get<double>(), 0.0);
  }
  EXPECT_EQ(j.at("terms")[0].at("modes"), (json{"0V", "1V", "2V"}));
  EXPECT_EQ(j.at("terms")[1].at("modes"), (json{"0H", "1H", "2H"}));
  EXPECT_NE(io::state_csv(run.state).find("0H 1H 2H,0.707106781187,0"), std::string::npos);
  EXPECT_EQ(io::to_json(run.state).dump(), j.dump());
}

TEST(Io, CircuitRoundTrip) {
  Circuit c = path_weaving_circuit(3);
  c.measure.emplace_back(0, PolBasis::PM);
  json j = io::to_json(c);
  EXPECT_EQ(io::to_json(io::circuit_from_json(json::parse(j.dump()))), j);
  Circuit g;
  g.sources = {SourceSpec::gbell(0, 1), SourceSpec::bell_psi(2, 3)};
  EXPECT_EQ(io::to_json(io::circuit_from_json(io::to_json(g))), io::to_json(g));
  EXPECT_THROW(io::circuit_from_json(json::parse(R"({"sources":[{"laser":0}],"elements":[]})")), Error);
}

TEST(Io, MultigraphRoundTrip) {
  Multigraph4R f = build_circulant(6);
  Multigraph4R back = io::multigraph_from_json(json::parse(io::to_json(f).dump()));
  EXPECT_TRUE(back.is_4_regular());
  EXPECT_TRUE(is_valid_tour(back, canonical_tour(6)));
  Multigraph4R tri;
  tri.vertices = {0, 1, 2};
  tri.edges = {{0, 1}, {0, 1}, {1, 2}, {1, 2}, {0, 2}, {0, 2}};
  json jt = io::to_json(tri);
  EXPECT_EQ(jt.at("edges")[0], (json{0, 1, 2}));
  EXPECT_EQ(io::multigraph_from_json(jt).edges.size(), 6u);
}

TEST(Io, ProtocolSpecRoundTrip) {
  ProtocolSpec s;
  s.protocol = "chain";
  s.blocks = {BlockKind::Path4, BlockKind::Star4};
  s.plan = "Y";
  ProtocolSpec back = io::protocol_spec_from_json(io::to_json(s));
  EXPECT_EQ(back.blocks, s.blocks);
  EXPECT_EQ(back.plan, "Y");
  EXPECT_EQ(io::protocol_spec_from_json(json::parse(R"({"protocol":"ghz","M":3})")).M, 3);
}

TEST(Io, MonteCarloAndCsv) {
  ProtocolSpec s;
  s.protocol = "ghz";
  s.M = 3;
  std::vector<TrialLog> log;
  MonteCarloStats st = monte_carlo(s, 100, 9, &log);
  json j = io::to_json(st);
  EXPECT_EQ(j.at("trials"), 100);
  EXPECT_EQ(j.at("rng_seed"), 9);
  const std::string csv = io::trials_csv(log);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "trial,success,blocks,attempts,m_minus");
}

TEST(Io, Reports) {
  json r = io::make_report("simulate", {{"protocol", "ghz"}}, {{"x", 1}}, true, 0.5);
  std::string why;
  EXPECT_TRUE(io::validate_report(r, &why)) << why;
  EXPECT_TRUE(io::validate_report(json::parse(r.dump())));
  json bad = r;
  bad.erase("schema_version");
  EXPECT_FALSE(io::validate_report(bad, &why));
  EXPECT_EQ(why, "missing schema_version");
  bad = r;
  bad["pass"] = "yes";
  EXPECT_FALSE(io::validate_report(bad));
  EXPECT_TRUE(io::validate_report(io::make_report("export", json::object(), json::object(), std::nullopt, 0)));
}

TEST(Io, Round12) {
  EXPECT_EQ(io::round12(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(io::round12(0.0), 0.0);
  EXPECT_EQ(json(io::round12(1 / std::sqrt(2.0))).dump(), "0.707106781187");
}

TEST(Io, AtomicWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "pwqs_io_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "sub" / "out.json";
  io::atomic_write(path, "first");
  io::atomic_write(path, "second");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "second");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
}
