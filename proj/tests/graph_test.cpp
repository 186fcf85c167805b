#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <stdexcept>

#include "gsiht/graph.hpp"
#include "oracles.hpp"

using namespace gsiht;

TEST_SUITE_BEGIN("graph");

TEST_CASE("grid construction counts nodes and edges") {
  Graph g = Graph::grid(3, 4);
  CHECK(g.num_nodes() == 12);
  // 3 rows of 3 horizontal edges + 2 rows of 4 vertical edges
  CHECK((int)g.edges().size() == 3 * 3 + 2 * 4);
  for (const Edge& e : g.edges()) CHECK(e.weight == 1.0);
  // corner has degree 2, an interior node of a 3x4 grid has degree 4
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(5) == 4);
}

TEST_CASE("complete graph has all pairs") {
  Graph g = Graph::complete(5, 2.5);
  CHECK(g.num_nodes() == 5);
  CHECK((int)g.edges().size() == 10);
  for (const Edge& e : g.edges()) CHECK(e.weight == 2.5);
  for (int v = 0; v < 5; ++v) CHECK(g.degree(v) == 4);
}

TEST_CASE("constructor rejects bad edges") {
  CHECK_THROWS_AS(Graph(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {{-1, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(2, {{0, 1, -1.0}}), std::invalid_argument);
}

TEST_CASE("neighbors carry edge indices") {
  Graph g(3, {{0, 1, 1.0}, {1, 2, 3.0}});
  REQUIRE(g.degree(1) == 2);
  std::set<int> nbr, idx;
  for (auto [w, e] : g.neighbors(1)) {
    nbr.insert(w);
    idx.insert(e);
  }
  CHECK(nbr == std::set<int>{0, 2});
  CHECK(idx == std::set<int>{0, 1});
}

TEST_CASE("make_support sorts and dedupes") {
  CHECK(make_support({3, 1, 3, 2, 1}) == Support{1, 2, 3});
  CHECK(make_support({}) == Support{});
}

TEST_CASE("validate_support rejects unsorted, duplicate, out of range") {
  Graph g = Graph::grid(2, 2);
  CHECK_NOTHROW(validate_support(g, {0, 3}));
  CHECK_NOTHROW(validate_support(g, {}));
  CHECK_THROWS_AS(validate_support(g, {3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_support(g, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_support(g, {0, 4}), std::invalid_argument);
  CHECK_THROWS_AS(validate_support(g, {-1}), std::invalid_argument);
}

TEST_CASE("component count matches BFS oracle on random supports") {
  Graph g = Graph::grid(4, 4);
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> nodes;
    for (int v = 0; v < 16; ++v)
      if (rng() % 2) nodes.push_back(v);
    Support s = make_support(nodes);
    CHECK(connected_component_count(g, s) == oracle::induced_components(g, s));
  }
  CHECK(connected_component_count(g, {}) == 0);
}

TEST_CASE("msf weight matches Prim oracle") {
  Rng rng = make_rng(11);
  // random weighted graph on 8 nodes
  std::vector<Edge> edges;
  for (int u = 0; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v)
      if (rng() % 3 != 0)
        edges.push_back({u, v, 0.25 * (1 + (int)(rng() % 8))});
  Graph g(8, edges);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> nodes;
    for (int v = 0; v < 8; ++v)
      if (rng() % 2) nodes.push_back(v);
    Support s = make_support(nodes);
    CHECK(msf_weight(g, s) ==
          doctest::Approx(oracle::induced_forest_weight(g, s)).epsilon(1e-12));
  }
  CHECK(msf_weight(g, {}) == 0.0);
  CHECK(msf_weight(g, {0}) == 0.0);
}

TEST_CASE("is_in_wgm checks all three bounds") {
  Graph g = Graph::grid(3, 3);
  // path 0-1-2 on the top row: 3 nodes, 1 component, weight 2
  CHECK(is_in_wgm(g, {0, 1, 2}, {3, 1, 2.0}));
  CHECK_FALSE(is_in_wgm(g, {0, 1, 2}, {2, 1, 2.0}));   // too many nodes
  CHECK_FALSE(is_in_wgm(g, {0, 1, 2}, {3, 1, 1.5}));   // over budget
  CHECK_FALSE(is_in_wgm(g, {0, 2}, {3, 1, 2.0}));      // two components
  CHECK(is_in_wgm(g, {0, 2}, {3, 2, 2.0}));
  CHECK(is_in_wgm(g, {}, {3, 1, 2.0}));  // empty support always fits
}

TEST_CASE("grid_center picks the middle cell") {
  CHECK(grid_center(3, 3) == 4);
  CHECK(grid_center(16, 16) == 8 * 16 + 8);
  CHECK(grid_center(1, 1) == 0);
}

TEST_CASE("random walk support is connected with the requested size") {
  Graph g = Graph::grid(16, 16);
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    Support s = random_walk_support(g, grid_center(16, 16), 8, rng);
    CHECK((int)s.size() == 8);
    CHECK_NOTHROW(validate_support(g, s));
    CHECK(connected_component_count(g, s) == 1);
    CHECK(std::binary_search(s.begin(), s.end(), grid_center(16, 16)));
  }
}

TEST_CASE("random walk is deterministic given the rng state") {
  Graph g = Graph::grid(8, 8);
  Rng a = make_rng(5), b = make_rng(5);
  CHECK(random_walk_support(g, 0, 6, a) == random_walk_support(g, 0, 6, b));
}

TEST_CASE("random walk fails cleanly when it cannot grow") {
  Graph isolated(3, {{0, 1, 1.0}});
  Rng rng = make_rng(1);
  CHECK_THROWS_AS(random_walk_support(isolated, 0, 3, rng),
                  std::runtime_error);
  CHECK_THROWS_AS(random_walk_support(isolated, 2, 2, rng),
                  std::runtime_error);
}

TEST_CASE("save and load round-trip") {
  Graph g(4, {{0, 1, 1.5}, {2, 3, 0.25}, {1, 2, 2.0}});
  std::string path =
      (std::filesystem::temp_directory_path() / "gsiht_graph_rt.txt").string();
  g.save(path);
  Graph loaded = Graph::load(path);
  CHECK(loaded.num_nodes() == 4);
  REQUIRE(loaded.edges().size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(loaded.edges()[i].u == g.edges()[i].u);
    CHECK(loaded.edges()[i].v == g.edges()[i].v);
    CHECK(loaded.edges()[i].weight == g.edges()[i].weight);
  }
  std::remove(path.c_str());
}

TEST_CASE("load rejects malformed files") {
  auto write_tmp = [](const char* text) {
    std::string path =
        (std::filesystem::temp_directory_path() / "gsiht_graph_bad.txt")
            .string();
    FILE* f = std::fopen(path.c_str(), "w");
    std::fputs(text, f);
    std::fclose(f);
    return path;
  };
  std::string path = write_tmp("q 3\n0 1 1.0\n");
  CHECK_THROWS_AS(Graph::load(path), std::runtime_error);
  path = write_tmp("p 3\n0 5 1.0\n");
  CHECK_THROWS_AS(Graph::load(path), std::invalid_argument);
  path = write_tmp("p 3\n0 1\n");
  CHECK_THROWS_AS(Graph::load(path), std::runtime_error);
  CHECK_THROWS_AS(Graph::load("/nonexistent/gsiht.txt"), std::runtime_error);
  std::remove(path.c_str());
}

TEST_SUITE_END();
