#include <doctest.h>

#include <sstream>

#include "netsis/error.hpp"
#include "netsis/graph.hpp"
#include "netsis/prng.hpp"

using namespace netsis;

TEST_CASE("parse_edge_list builds the two-node cycle") {
    const Graph g = parse_edge_list("0 1 1.0\n1 0 1.0");
    REQUIRE(g.n() == 2);
    CHECK(g.weights(1, 0) == 1.0);  // edge 0 -> 1 lands in row 1, column 0
    CHECK(g.weights(0, 1) == 1.0);
    CHECK(g.weights(0, 0) == 0.0);
    CHECK(g.weights(1, 1) == 0.0);
}

TEST_CASE("parse_edge_list rejects degenerate and malformed input") {
    CHECK_THROWS_WITH_AS(static_cast<void>(parse_edge_list("")), doctest::Contains("no edges"),
                         Error);
    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("# only a comment\n\n")), Error);

    try {
        static_cast<void>(parse_edge_list("0 1 -0.5"));
        FAIL("expected NegativeWeight");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeWeight);
        CHECK(e.qualified_code() == "graphio.NegativeWeight");
    }

    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("0 1 2 3")), Error);       // token count
    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("0")), Error);             // token count
    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("a b 1.0")), Error);       // ids
    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("0 1 cheese")), Error);    // weight
    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("-1 0 1.0")), Error);      // negative id
    CHECK_THROWS_AS(static_cast<void>(parse_edge_list("0 1 nan")), Error);       // non-finite
}

TEST_CASE("parse_edge_list defaults weights, sums duplicates, strips comments") {
    const Graph g = parse_edge_list(
        "# header comment\n"
        "0 1\n"
        "0 1 0.5  # trailing comment\n"
        "2 0 3.0\n");
    REQUIRE(g.n() == 3);
    CHECK(g.weights(1, 0) == 1.5);
    CHECK(g.weights(0, 2) == 3.0);
}

TEST_CASE("parse_edge_list accepts istream input") {
    std::istringstream in("0 1 2.0\n1 0 2.0\n");
    const Graph g = parse_edge_list(in);
    CHECK(g.n() == 2);
    CHECK(g.weights(1, 0) == 2.0);
}

TEST_CASE("normalize_in_weights scales rows to unit sums") {
    Graph g;
    g.weights = Matrix::Zero(2, 2);
    g.weights(0, 0) = 2.0;
    g.weights(0, 1) = 2.0;
    g.weights(1, 0) = 1.0;
    const Graph norm = normalize_in_weights(g);
    CHECK(norm.weights(0, 0) == 0.5);
    CHECK(norm.weights(0, 1) == 0.5);
    CHECK(norm.weights(1, 0) == 1.0);

    // idempotence
    const Graph again = normalize_in_weights(norm);
    CHECK(again.weights == norm.weights);
}

TEST_CASE("normalize_in_weights reports the offending node") {
    Graph g;
    g.weights = Matrix::Zero(2, 2);
    g.weights(1, 0) = 1.0;  // node 0 has no in-edges
    try {
        static_cast<void>(normalize_in_weights(g));
        FAIL("expected ZeroInDegree");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroInDegree);
        CHECK(e.node() == Index{0});
    }
}

TEST_CASE("strongly_connected_analysis on canonical shapes") {
    SUBCASE("two-node cycle") {
        const SccAnalysis scc = strongly_connected_analysis(parse_edge_list("0 1 1\n1 0 1"));
        CHECK(scc.is_strongly_connected);
        REQUIRE(scc.components.size() == 1);
        CHECK(scc.components[0] == std::vector<Index>{0, 1});
    }
    SUBCASE("chain has singleton components") {
        const SccAnalysis scc = strongly_connected_analysis(parse_edge_list("0 1 1"));
        CHECK_FALSE(scc.is_strongly_connected);
        REQUIRE(scc.components.size() == 2);
        CHECK(scc.components[0] == std::vector<Index>{0});
        CHECK(scc.components[1] == std::vector<Index>{1});
        CHECK(scc.largest_component_nodes.size() == 1);
        CHECK(scc.largest_component_nodes[0] == 0);  // tie broken by smallest min id
    }
    SUBCASE("two 2-cycles joined by a bridge") {
        const Graph g = parse_edge_list("0 1 1\n1 0 1\n2 3 1\n3 2 1\n1 2 1");
        const SccAnalysis scc = strongly_connected_analysis(g);
        CHECK_FALSE(scc.is_strongly_connected);
        REQUIRE(scc.components.size() == 2);
        CHECK(scc.largest_component_nodes == std::vector<Index>{0, 1});
        CHECK(scc.largest_component_subgraph.n() == 2);
        CHECK(scc.largest_component_subgraph.weights(0, 1) == 1.0);
        CHECK(scc.largest_component_subgraph.weights(1, 0) == 1.0);
        CHECK(scc.largest_component_subgraph.node_labels ==
              std::vector<std::string>{"0", "1"});
    }
    SUBCASE("subgraph preserves edge weights") {
        const Graph g = parse_edge_list("0 1 0.25\n1 0 4.0\n2 0 1.0");
        const SccAnalysis scc = strongly_connected_analysis(g);
        CHECK(scc.largest_component_subgraph.weights(1, 0) == 0.25);
        CHECK(scc.largest_component_subgraph.weights(0, 1) == 4.0);
    }
}

TEST_CASE("random_strongly_connected is deterministic and always strongly connected") {
    const Graph a = random_strongly_connected(12, 0.3, 99);
    const Graph b = random_strongly_connected(12, 0.3, 99);
    CHECK(a.weights == b.weights);
    CHECK(serialize_edge_list(a) == serialize_edge_list(b));

    const Graph c = random_strongly_connected(12, 0.3, 100);
    CHECK(a.weights != c.weights);

    SplitMix64 rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 1 + static_cast<Index>(rng.next() % 50);
        const double p = rng.uniform01();
        const Graph g = random_strongly_connected(n, p, rng.next());
        CAPTURE(trial);
        CHECK(is_strongly_connected(g));
    }
}

TEST_CASE("random_strongly_connected degenerate single node") {
    const Graph g = random_strongly_connected(1, 0.7, 5);
    REQUIRE(g.n() == 1);
    CHECK(g.weights(0, 0) == 1.0);
    CHECK(is_strongly_connected(g));
}

TEST_CASE("edge list serialization round-trips exactly") {
    SplitMix64 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.next() % 20);
        Graph g = random_strongly_connected(n, 0.4 * rng.uniform01(), rng.next());
        // random positive weights exercise the 17-digit printing
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (g.weights(i, j) != 0.0) g.weights(i, j) = rng.uniform_open(0.0, 2.0);

        const Graph back = parse_edge_list(serialize_edge_list(g));
        REQUIRE(back.n() == g.n());
        CHECK(back.weights == g.weights);
    }
}

TEST_CASE("normalization preserves the zero pattern and unit row sums") {
    SplitMix64 rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = 2 + static_cast<Index>(rng.next() % 20);
        Graph g = random_strongly_connected(n, rng.uniform01(), rng.next());
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (g.weights(i, j) != 0.0) g.weights(i, j) = rng.uniform_open(0.0, 3.0);

        const Graph norm = normalize_in_weights(g);
        for (Index i = 0; i < n; ++i) {
            CHECK(norm.weights.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
            for (Index j = 0; j < n; ++j)
                CHECK((norm.weights(i, j) != 0.0) == (g.weights(i, j) != 0.0));
        }
        CHECK(is_strongly_connected(norm));
    }
}
