#include <doctest.h>

#include <random>

#include "homlab/cfi.hpp"
#include "homlab/homcount.hpp"

using namespace homlab;

TEST_CASE("build_cfi small cases") {
    // K2 with U empty: one vertex per gadget, one edge
    CfiGraph x = build_cfi(path_graph(2), 0);
    CHECK(x.graph.n == 2);
    CHECK(x.graph.edge_count() == 1);

    // C3: even twist gives 2C3, odd twist gives C6
    CfiGraph even = cfi_even(cycle_graph(3));
    CHECK(even.graph.n == 6);
    CHECK(are_isomorphic(even.graph, cycle_graph(3).disjoint_union(cycle_graph(3))));
    CfiGraph odd = cfi_odd(cycle_graph(3));
    CHECK(are_isomorphic(odd.graph, cycle_graph(6)));

    CHECK_THROWS_AS(build_cfi(Graph(2), 0), std::invalid_argument);
}

TEST_CASE("gadget sizes match the closed form") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 20; ++t) {
        int n = 3 + static_cast<int>(rng() % 3);
        Graph g(n);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        do {
            g = Graph(n);
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (coin(rng) < 0.6) g.add_edge(u, v);
        } while (!g.connected());
        VertexSet u_set = rng() & g.all_vertices();
        CfiGraph x = build_cfi(g, u_set);
        long long expect = 0;
        for (int v = 0; v < n; ++v) expect += 1LL << std::max(0, g.degree(v) - 1);
        // degree-0 vertices with odd twist have empty gadgets
        for (int v = 0; v < n; ++v)
            if (g.degree(v) == 0 && (u_set & bit(v))) expect -= 1;
        CHECK(x.graph.n == expect);
        for (int v = 0; v < n; ++v)
            CHECK(static_cast<int>(x.gadget[v].size()) ==
                  (g.degree(v) == 0 ? ((u_set & bit(v)) ? 0 : 1)
                                    : 1 << (g.degree(v) - 1)));
    }
}

TEST_CASE("parity_check") {
    Graph c3 = cycle_graph(3);
    CHECK(parity_check(c3, bit(1), bit(1)));       // equal sets
    CHECK(!parity_check(c3, 0, bit(0)));           // 2C3 vs C6
    CHECK(parity_check(c3, bit(0), bit(2)));       // equal parity
    CHECK(parity_check(path_graph(4), bit(1) | bit(2), 0));
    CHECK(!parity_check(path_graph(4), bit(1) | bit(2) | bit(3), 0));
}

TEST_CASE("twist_iso") {
    Graph p3 = path_graph(3);
    // identity on the trivial path
    TwistIso id = twist_iso(p3, 1, 1, {1});
    for (size_t v = 0; v < id.map.size(); ++v) CHECK(id.map[v] == static_cast<int>(v));

    // a->c along the path: gadgets off the path untouched, projection fixed
    TwistIso t = twist_iso(p3, 0, 2, {0, 1, 2});
    for (size_t v = 0; v < t.map.size(); ++v)
        CHECK(t.to.project(t.map[v]) == t.from.project(static_cast<int>(v)));

    // double flip along the same path cancels
    Graph c5 = cycle_graph(5);
    TwistIso fwd = twist_iso(c5, 0, 3, {0, 1, 2, 3});
    TwistIso bwd = twist_iso(c5, 3, 0, {3, 2, 1, 0});
    for (size_t v = 0; v < fwd.map.size(); ++v)
        CHECK(bwd.map[fwd.map[v]] == static_cast<int>(v));

    CHECK_THROWS_AS(twist_iso(p3, 0, 2, {0, 2}), std::invalid_argument);
}

TEST_CASE("CFI pair over C5: indistinguishable at two pebbles, split by C5") {
    // the odd-cycle analogue of the C4 evidence: every member of P(2,0) up
    // to 6 vertices agrees on the twisted pair, the base cycle splits it
    Graph c5 = cycle_graph(5);
    Graph x = cfi_even(c5).graph;
    Graph xt = cfi_odd(c5).graph;
    CHECK(are_isomorphic(x, c5.disjoint_union(c5)));
    CHECK(are_isomorphic(xt, cycle_graph(10)));
    PebbleAlphabet one(1, 0);
    CHECK(hom_count(unlabeled(c5, one), unlabeled(x, one)) == BigInt(20));
    CHECK(hom_count(unlabeled(c5, one), unlabeled(xt, one)) == BigInt(0));
}
