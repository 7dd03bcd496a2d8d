#include <doctest.h>

#include "homlab/enumerate.hpp"
#include "homlab/json_io.hpp"
#include "homlab/search.hpp"

using namespace homlab;

TEST_CASE("graph enumeration counts") {
    // classic census: 1, 2, 4, 11, 34 graphs and 1, 1, 2, 6, 21 connected
    std::vector<int> all{1, 2, 4, 11, 34};
    std::vector<int> conn{1, 1, 2, 6, 21};
    for (int n = 1; n <= 5; ++n) {
        auto graphs = enumerate_graphs(n, false);
        int total = 0;
        for (const auto& g : graphs)
            if (g.n == n) ++total;
        CHECK(total == all[n - 1]);
        auto cgraphs = enumerate_graphs(n, true);
        int ctotal = 0;
        for (const auto& g : cgraphs)
            if (g.n == n) ++ctotal;
        CHECK(ctotal == conn[n - 1]);
    }
    // n_max = 3 connected: K1, K2, P3, K3
    CHECK(enumerate_graphs(3, true).size() == 4);
    CHECK_THROWS_AS(enumerate_graphs(9, false), std::invalid_argument);

    // pairwise non-isomorphic (spot check at n = 5)
    auto graphs5 = enumerate_graphs(5, false);
    for (size_t i = 0; i < graphs5.size(); ++i)
        for (size_t j = i + 1; j < std::min(graphs5.size(), i + 8); ++j)
            CHECK(!are_isomorphic(graphs5[i], graphs5[j]));
}

TEST_CASE("forest enumeration counts") {
    // forests on n nodes: 1, 2, 3, 6, 10, 20, 37, 76
    std::vector<int> forests{1, 2, 3, 6, 10, 20, 37, 76};
    auto fs = enumerate_forests(8);
    std::map<int, int> by_n;
    for (const auto& f : fs) {
        ++by_n[f.n];
        CHECK(f.edge_count() == f.n - static_cast<int>(f.components().size()));
    }
    for (int n = 1; n <= 8; ++n) CHECK(by_n[n] == forests[n - 1]);
}

TEST_CASE("family enumeration") {
    // P(2,0) up to 4 vertices: graphs of pathwidth <= 1
    FamilySpec spec;
    spec.cls = FamilySpec::Class::P;
    spec.k1 = 2;
    spec.k2 = 0;
    spec.n_max = 4;
    auto family = enumerate_family(spec);
    for (const auto& g : family) CHECK(pathwidth(g) <= 1);
    int count4 = 0;
    for (const auto& g : family)
        if (g.n == 4) ++count4;
    CHECK(count4 == 6); // forests on 4 vertices: all have pathwidth <= 1

    // T(1,0,q): K1 in, K2 never
    FamilySpec t;
    t.cls = FamilySpec::Class::T;
    t.k1 = 1;
    t.k2 = 0;
    t.q = 3;
    t.n_max = 2;
    auto tf = enumerate_family(t);
    REQUIRE(tf.size() >= 1);
    for (const auto& g : tf) CHECK(g.edge_count() == 0);

    // C4 appears in P(3,0) and P(2,1) but not P(2,0)
    auto has_c4 = [](const std::vector<Graph>& gs) {
        for (const auto& g : gs)
            if (g.n == 4 && are_isomorphic(g, cycle_graph(4))) return true;
        return false;
    };
    FamilySpec p30{FamilySpec::Class::P, 3, 0, 1, 4, true};
    FamilySpec p21{FamilySpec::Class::P, 2, 1, 1, 4, true};
    FamilySpec p20{FamilySpec::Class::P, 2, 0, 1, 4, true};
    CHECK(has_c4(enumerate_family(p30)));
    CHECK(has_c4(enumerate_family(p21)));
    CHECK(!has_c4(enumerate_family(p20)));
}

TEST_CASE("json round trips") {
    Graph g = cycle_graph(5);
    CHECK(graph_from_json(to_json(g)) == g);
    // canonical emission is byte-stable
    std::string once = emit(to_json(g));
    CHECK(emit(to_json(graph_from_json(json::parse(once)))) == once);

    LabeledGraph lg(g, PebbleAlphabet(2, 1));
    lg.labels[0] = 3;
    lg.labels[2] = 1;
    LabeledGraph back = labeled_graph_from_json(to_json(lg));
    CHECK(back == lg);

    RelStructure a(3);
    a.add_relation("R", 3);
    a.add_tuple("R", {0, 1, 2});
    json aj = to_json(a);
    RelStructure a2 = structure_from_json(aj);
    CHECK(a2.n == 3);
    CHECK(a2.has_tuple("R", {0, 1, 2}));

    LinComb lc;
    lc.add_term(Rational(1, 2), unlabeled(path_graph(2), PebbleAlphabet(1, 0)));
    lc.add_term(Rational(-2, 3), unlabeled(cycle_graph(3), PebbleAlphabet(1, 0)));
    LinComb lc2 = lincomb_from_json(to_json(lc));
    CHECK(lc2.terms.size() == 2);
    CHECK(hom_lincomb(lc2, unlabeled(complete_graph(4), PebbleAlphabet(1, 0))) ==
          hom_lincomb(lc, unlabeled(complete_graph(4), PebbleAlphabet(1, 0))));
}

TEST_CASE("graph6") {
    // D?{ : 5 vertices, edges (0,4),(1,4),(2,4),(3,4) -> the star K_{1,4}
    Graph star = graph_from_graph6("D?{");
    CHECK(star.n == 5);
    CHECK(star.edge_count() == 4);
    Graph expect(5);
    for (int v = 0; v < 4; ++v) expect.add_edge(v, 4);
    CHECK(are_isomorphic(star, expect));
    // encode/decode round trip on an enumeration slice
    for (const Graph& g : enumerate_graphs(5, false)) {
        Graph back = graph_from_graph6(graph_to_graph6(g));
        CHECK(back == g);
    }
    CHECK_THROWS_AS(graph_from_graph6(""), std::invalid_argument);
    CHECK_THROWS_AS(graph_from_graph6("D?"), std::invalid_argument);
}

TEST_CASE("decomposition and cover json round trips") {
    Graph c4 = cycle_graph(4);
    auto dec = find_path_decomposition(c4, 2, 1);
    REQUIRE(dec.has_value());
    RootedDecomposition d2 = decomposition_from_json(to_json(*dec));
    CHECK(verify_decomposition(d2, c4, 2, 1).ok);

    ForestCover fc;
    fc.variant = ForestCover::Variant::linear;
    fc.alphabet = PebbleAlphabet(2, 0);
    fc.parent = {-1, 0, 1};
    fc.pebble = {0, 1, 0};
    ForestCover fc2 = cover_from_json(to_json(fc));
    CHECK(fc2.parent == fc.parent);
    CHECK(fc2.pebble == fc.pebble);
    CHECK(verify_forest_cover(fc2, path_graph(3)).ok);

    // construction tree: rebuilt through constructors on import
    PebbleAlphabet a(2, 0);
    ConstructionTree ct;
    LabeledGraph leaf(path_graph(2), a);
    leaf.labels[0] = 0;
    leaf.labels[1] = 1;
    ct.root = ct_add_elim(ct, ct_add_elim(ct, ct_add_leaf(ct, leaf), 1), 0);
    ct.caterpillar = true;
    ConstructionTree ct2 = construction_from_json(to_json(ct));
    CHECK(verify_construction_tree(ct2, nullptr, 2, 0).ok);
    CHECK(labeled_isomorphic(ct2.target(), ct.target()));

    // DOT output is syntactically plausible
    std::string dot = to_dot(c4);
    CHECK(dot.find("graph") == 0);
    CHECK(dot.find("--") != std::string::npos);
    CHECK(to_dot(*dec).find("label=") != std::string::npos);
}

TEST_CASE("strategy json round trips") {
    Graph g = path_graph(4);
    auto ns = solve_ns(g, 2, 0);
    REQUIRE(ns.strategy.has_value());
    NsStrategy back = ns_strategy_from_json(to_json(*ns.strategy));
    CHECK(back.moves.size() == ns.strategy->moves.size());
    CHECK(is_monotone_ns(back, g)); // replays to a win
    CHECK(emit(to_json(back)) == emit(to_json(*ns.strategy)));

    auto cr = solve_cr(g, 2, 0, 4);
    REQUIRE(cr.strategy.has_value());
    CrStrategy cback = cr_strategy_from_json(to_json(*cr.strategy));
    CHECK(is_monotone_cr(cback, g));
    CHECK(emit(to_json(cback)) == emit(to_json(*cr.strategy)));
}
