#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fpa/depgraph.hpp"
#include "fpa/workload.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace fpa;

namespace {

Workload cyclic_trio() {
  return parse_workload(
      "function A domain=A cost=10\n"
      "function B domain=A cost=10\n"
      "function C domain=A cost=10\n"
      "dep A B type=Co sync=yes\n"
      "dep B C type=C sync=yes\n"
      "dep C A type=C sync=yes\n");
}

}  // namespace

TEST_CASE("combinations") {
  CHECK(combinations(3, 2) == 3);
  for (unsigned n : {0u, 1u, 5u, 17u}) CHECK(combinations(n, 0) == 1);

  SECTION("C(6,3) against subset enumeration") {
    REQUIRE(oracle::count_subsets(6, 3) == 20);
    CHECK(combinations(6, 3) == 20);
  }
  SECTION("k > n is an error") { CHECK_THROWS_AS(combinations(2, 3), std::invalid_argument); }
  SECTION("no overflow through n = 62") {
    CHECK(combinations(62, 31) == combinations(61, 30) + combinations(61, 31));
    CHECK_THROWS_AS(combinations(128, 64), std::overflow_error);
  }
  SECTION("Pascal's rule over a sampled grid") {
    for (unsigned n = 1; n <= 20; ++n) {
      for (unsigned k = 1; k < n; ++k)
        CHECK(combinations(n, k) == combinations(n - 1, k - 1) + combinations(n - 1, k));
      CHECK(combinations(n, n) == 1);
    }
  }
}

TEST_CASE("edge count n(n-1)/2") {
  CHECK(edge_count(2) == 1);
  CHECK(edge_count(0) == 0);
  CHECK(edge_count(1) == 0);
  SECTION("n = 5 against pair enumeration") {
    REQUIRE(oracle::count_unordered_pairs(5) == 10);
    CHECK(edge_count(5) == 10);
  }
}

TEST_CASE("relationship space 4*C(n,2)") {
  CHECK(relationship_space(3) == 12);
  CHECK(relationship_space(2) == 4);
  SECTION("n = 5 against enumeration") {
    // four kinds per unordered pair
    REQUIRE(4 * oracle::count_unordered_pairs(5) == 40);
    CHECK(relationship_space(5) == 40);
  }
  SECTION("n < 2 is an error") {
    CHECK_THROWS_AS(relationship_space(1), std::invalid_argument);
    CHECK_THROWS_AS(relationship_space(0), std::invalid_argument);
  }
}

TEST_CASE("matrices of the three-function example") {
  auto [adj, dep] = build_matrices(cyclic_trio());
  REQUIRE(adj.size() == 3);

  const bool expect[3][3] = {{false, true, false}, {false, false, true}, {true, false, false}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(adj.at(i, j) == expect[i][j]);

  // 1-based cell naming: (1,2)=S,Co  (2,3)=S,C  (3,1)=S,C; all others blank
  CHECK(dep.label_at(0, 1) == "S,Co");
  CHECK(dep.label_at(1, 2) == "S,C");
  CHECK(dep.label_at(2, 0) == "S,C");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (!adj.at(i, j)) CHECK(dep.label_at(i, j).empty());
}

TEST_CASE("matrices of a dependency-free workload are blank") {
  Workload w = parse_workload("function x domain=G cost=1\nfunction y domain=G cost=1\n");
  auto [adj, dep] = build_matrices(w);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(!adj.at(i, j));
      CHECK(dep.label_at(i, j).empty());
    }
}

TEST_CASE("pair classification") {
  auto [adj, dep] = build_matrices(cyclic_trio());
  CHECK(classify_pair(adj, 0, 1) == PairRelation::Forward);
  CHECK(classify_pair(adj, 1, 0) == PairRelation::Backward);
  CHECK(classify_pair(adj, 0, 2) == PairRelation::Backward);  // C depends on A
  CHECK(classify_pair(adj, 2, 0) == PairRelation::Forward);

  AdjacencyMatrix zero(3);
  CHECK(classify_pair(zero, 0, 1) == PairRelation::Null);
  CHECK(classify_pair(zero, 2, 1) == PairRelation::Null);

  AdjacencyMatrix both(2);
  both.set(0, 1);
  both.set(1, 0);
  CHECK(classify_pair(both, 0, 1) == PairRelation::Bidirectional);

  SECTION("self pairs are rejected") {
    CHECK_THROWS_AS(classify_pair(adj, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("adjacency matrix forbids self-loops and keeps a zero diagonal") {
  AdjacencyMatrix m(4);
  CHECK_THROWS_AS(m.set(2, 2), std::invalid_argument);
  for (std::size_t i = 0; i < 4; ++i) CHECK(!m.at(i, i));
}

TEST_CASE("synchronized-dependency cycles") {
  SECTION("the cyclic example") {
    auto cycles = find_sync_cycles(cyclic_trio());
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0] == std::vector<std::string>{"A", "B", "C"});

    std::vector<std::vector<bool>> adj{{false, true, false}, {false, false, true},
                                       {true, false, false}};
    auto expect = oracle::brute_force_cycles(adj);
    REQUIRE(expect.size() == 1);
    CHECK(expect[0] == std::vector<std::size_t>{0, 1, 2});
  }
  SECTION("an acyclic chain has none") {
    Workload w = parse_workload(
        "function A domain=G cost=1\nfunction B domain=G cost=1\nfunction C domain=G cost=1\n"
        "dep A B type=C sync=yes\ndep B C type=C sync=yes\n");
    CHECK(find_sync_cycles(w).empty());
  }
  SECTION("two disjoint 2-cycles, deterministic order") {
    Workload w = parse_workload(
        "function A domain=G cost=1\nfunction B domain=G cost=1\n"
        "function C domain=G cost=1\nfunction D domain=G cost=1\n"
        "dep A B type=C sync=yes\ndep B A type=C sync=yes\n"
        "dep C D type=C sync=yes\ndep D C type=C sync=yes\n");
    auto cycles = find_sync_cycles(w);
    REQUIRE(cycles.size() == 2);
    CHECK(cycles[0] == std::vector<std::string>{"A", "B"});
    CHECK(cycles[1] == std::vector<std::string>{"C", "D"});

    std::vector<std::vector<bool>> adj(4, std::vector<bool>(4, false));
    adj[0][1] = adj[1][0] = adj[2][3] = adj[3][2] = true;
    auto expect = oracle::brute_force_cycles(adj);
    REQUIRE(expect.size() == 2);
    CHECK(expect[0] == std::vector<std::size_t>{0, 1});
    CHECK(expect[1] == std::vector<std::size_t>{2, 3});
  }
  SECTION("non-synchronized dependencies do not participate") {
    Workload w = parse_workload(
        "function A domain=G cost=1\nfunction B domain=G cost=1\n"
        "dep A B type=C sync=no\ndep B A type=C sync=no\n");
    CHECK(find_sync_cycles(w).empty());
  }
}

TEST_CASE("property: cycle enumeration matches the brute-force oracle") {
  std::mt19937 rng(424242);
  for (int iter = 0; iter < 150; ++iter) {
    std::uniform_int_distribution<std::size_t> size(1, 6);
    const std::size_t n = size(rng);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::uniform_int_distribution<int> coin(0, 3);
    Workload w;
    for (std::size_t i = 0; i < n; ++i) {
      FunctionSpec f;
      f.name = "f" + std::to_string(i);
      f.domain = 'G';
      f.cost = 1;
      w.functions.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && coin(rng) == 0) {
          adj[i][j] = true;
          w.dependencies.push_back(
              {"f" + std::to_string(i), "f" + std::to_string(j), DependencyKind::Communication,
               true});
        }

    auto expect = oracle::brute_force_cycles(adj);
    auto got = find_sync_cycles(w);
    REQUIRE(got.size() == expect.size());
    for (std::size_t c = 0; c < got.size(); ++c) {
      std::vector<std::string> names;
      for (std::size_t v : expect[c]) names.push_back(w.functions[v].name);
      CHECK(got[c] == names);
    }
  }
}

TEST_CASE("property: cross-operation consistency and matrix/classification agreement") {
  for (std::uint64_t n = 2; n <= 40; ++n) {
    CHECK(relationship_space(n) == 4 * combinations(n, 2));
    CHECK(edge_count(n) == combinations(n, 2));
  }

  std::mt19937 rng(31337);
  gen::Options opt;
  for (int iter = 0; iter < 100; ++iter) {
    Workload w = gen::random_workload(rng, opt);
    auto [adj, dep] = build_matrices(w);
    const std::size_t n = adj.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        PairRelation r = classify_pair(adj, i, j);
        const bool forward_edge =
            r == PairRelation::Forward || r == PairRelation::Bidirectional;
        CHECK(adj.at(i, j) == forward_edge);
        CHECK(dep.at(i, j).has_value() == adj.at(i, j));
      }
  }
}
