#include <doctest.h>

#include <random>

#include "homlab/graph.hpp"

using namespace homlab;

namespace {

LabeledGraph k2_labeled(const PebbleAlphabet& a, int p1, int p2) {
    LabeledGraph g(path_graph(2), a);
    g.labels[p1] = 0;
    g.labels[p2] = 1;
    return g;
}

Graph random_graph(std::mt19937_64& rng, int n, double p) {
    Graph g(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) g.add_edge(u, v);
    return g;
}

} // namespace

TEST_CASE("product identifies same-labeled vertices") {
    PebbleAlphabet a(3, 0);
    LabeledGraph single(Graph(1), a);
    single.labels[0] = 0; // x1
    LabeledGraph p = product(single, single);
    CHECK(p.graph.n == 1);
    CHECK(p.graph.edge_count() == 0);
    CHECK(p.labels[0] == 0);

    // K2(x1,x2) * K2(x2,x3) = path on 3 vertices labeled x1,x2,x3
    LabeledGraph left = k2_labeled(a, 0, 1);
    LabeledGraph right = k2_labeled(a, 1, 2);
    LabeledGraph path = product(left, right);
    CHECK(path.graph.n == 3);
    CHECK(path.graph.edge_count() == 2);
    CHECK(path.labels[0] != kNoVertex);
    CHECK(path.labels[1] != kNoVertex);
    CHECK(path.labels[2] != kNoVertex);
    CHECK(path.graph.has_edge(path.labels[0], path.labels[1]));
    CHECK(path.graph.has_edge(path.labels[1], path.labels[2]));
    CHECK(!path.graph.has_edge(path.labels[0], path.labels[2]));

    // unit: product with the empty labeled graph
    LabeledGraph unit(Graph(0), a);
    LabeledGraph same = product(path, unit);
    CHECK(labeled_isomorphic(same, path));
}

TEST_CASE("product is commutative and associative up to isomorphism") {
    PebbleAlphabet a(2, 1);
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 30; ++trial) {
        auto rand_labeled = [&] {
            LabeledGraph g(random_graph(rng, 3 + static_cast<int>(rng() % 2), 0.5), a);
            // at most one label per vertex
            std::vector<int> perm(g.graph.n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            for (int p = 0; p < a.size(); ++p)
                if (rng() % 2 && p < g.graph.n) g.labels[p] = perm[p];
            return g;
        };
        LabeledGraph f = rand_labeled(), g = rand_labeled(), h = rand_labeled();
        CHECK(labeled_isomorphic(product(f, g), product(g, f)));
        CHECK(labeled_isomorphic(product(product(f, g), h), product(f, product(g, h))));
    }
}

TEST_CASE("relabel semantics") {
    PebbleAlphabet a(2, 0);
    LabeledGraph g(path_graph(4), a);
    LabeledGraph once = relabel(g, 0, kNoVertex);
    CHECK(relabel(once, 0, kNoVertex) == once);
    CHECK(relabel(relabel(g, 0, 3), 0, 1).labels[0] == 1);
    // sequence form applied left to right
    LabeledGraph seq = relabel(relabel(g, 0, 2), 1, 3);
    CHECK(seq.labels[0] == 2);
    CHECK(seq.labels[1] == 3);
    CHECK_THROWS_AS(relabel(g, 0, 9), std::invalid_argument);
}

TEST_CASE("isomorphism basics") {
    CHECK(are_isomorphic(complete_graph(3), complete_graph(3)));
    CHECK(!are_isomorphic(path_graph(3), path_graph(2).disjoint_union(Graph(1))));
    // C6 vs 2C3: equal degree sequences, not isomorphic
    Graph c6 = cycle_graph(6);
    Graph two_c3 = cycle_graph(3).disjoint_union(cycle_graph(3));
    CHECK(!are_isomorphic(c6, two_c3));
    auto w = find_isomorphism(cycle_graph(5), cycle_graph(5));
    REQUIRE(w.has_value());
}

TEST_CASE("isomorphism is an equivalence on sampled graphs") {
    std::mt19937_64 rng(99);
    std::vector<Graph> pool;
    for (int i = 0; i < 8; ++i) pool.push_back(random_graph(rng, 5, 0.4));
    for (const auto& g : pool) CHECK(are_isomorphic(g, g));
    for (const auto& g : pool)
        for (const auto& h : pool) CHECK(are_isomorphic(g, h) == are_isomorphic(h, g));
    for (const auto& f : pool)
        for (const auto& g : pool)
            for (const auto& h : pool)
                if (are_isomorphic(f, g) && are_isomorphic(g, h)) CHECK(are_isomorphic(f, h));
}

TEST_CASE("gaifman graphs") {
    RelStructure s(3);
    s.add_relation("R", 2);
    s.add_tuple("R", {0, 1});
    CHECK(gaifman(s).edge_count() == 1);

    RelStructure t(3);
    t.add_relation("T", 3);
    t.add_tuple("T", {0, 1, 2});
    CHECK(are_isomorphic(gaifman(t), complete_graph(3)));

    RelStructure e(4);
    e.add_relation("R", 2);
    CHECK(gaifman(e).edge_count() == 0);

    // symmetric binary structure: gaifman is the underlying graph
    Graph g = cycle_graph(5);
    CHECK(gaifman(to_structure(g)) == g);
}

TEST_CASE("minor operations") {
    CHECK(are_isomorphic(contract_edge(complete_graph(3), 0, 1), complete_graph(2)));
    CHECK(are_isomorphic(delete_vertex(cycle_graph(4), 0), path_graph(3)));
    CHECK(are_isomorphic(contract_edge(cycle_graph(4), 0, 1), cycle_graph(3)));
    CHECK_THROWS_AS(contract_edge(path_graph(3), 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(delete_edge(path_graph(3), 0, 2), std::invalid_argument);
}

TEST_CASE("graph invariants") {
    CHECK_THROWS_AS(PebbleAlphabet(0, 0), std::invalid_argument);
    Graph g(3);
    CHECK_THROWS_AS(g.add_edge(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 5), std::invalid_argument);
    CHECK(cycle_graph(4).connected());
    CHECK(!Graph(2).connected());
    CHECK(cycle_graph(6).components().size() == 1);
    CHECK(Graph(3).components().size() == 3);
}
