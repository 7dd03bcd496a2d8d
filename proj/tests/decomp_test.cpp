#include <doctest.h>

#include <random>

#include "homlab/convert.hpp"
#include "homlab/decomp.hpp"
#include "homlab/homcount.hpp"
#include "homlab/search.hpp"

using namespace homlab;

namespace {

Graph random_graph(std::mt19937_64& rng, int n, double p) {
    Graph g(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) g.add_edge(u, v);
    return g;
}

RootedDecomposition p3_path_dec() {
    // P3 with bags {0,1},{1,2} rooted at the first bag
    RootedDecomposition d;
    d.kind = RootedDecomposition::Kind::path;
    d.bags = {bit(0) | bit(1), bit(1) | bit(2)};
    d.parent = {-1, 0};
    d.root = 0;
    return d;
}

} // namespace

TEST_CASE("verify_decomposition basics") {
    // single bag = V(K3), class width (3,0), depth 3
    RootedDecomposition d;
    d.kind = RootedDecomposition::Kind::tree;
    d.bags = {bit(0) | bit(1) | bit(2)};
    d.parent = {-1};
    d.root = 0;
    auto r = verify_decomposition(d, complete_graph(3), 3, 0);
    CHECK(r.ok);
    CHECK(r.depth == 3);
    CHECK(!verify_decomposition(d, complete_graph(3), 2, 0).ok);

    auto p = verify_decomposition(p3_path_dec(), path_graph(3), 2, 0);
    CHECK(p.ok);

    // C3 with the same bags: edge {0,2} uncovered
    auto bad = verify_decomposition(p3_path_dec(), cycle_graph(3), 2, 0);
    CHECK(!bad.ok);
    CHECK(bad.diagnostic.find("edge") != std::string::npos);
}

TEST_CASE("verify_decomposition exceptions and depth") {
    // C4 minus one exception vertex is a path: width (2,1)
    Graph c4 = cycle_graph(4);
    auto d = find_path_decomposition(c4, 2, 1);
    REQUIRE(d.has_value());
    CHECK(verify_decomposition(*d, c4, 2, 1).ok);
    CHECK(!find_path_decomposition(c4, 2, 0).has_value());
    CHECK(find_path_decomposition(c4, 3, 0).has_value());

    // depth bound rejects
    RootedDecomposition one;
    one.kind = RootedDecomposition::Kind::tree;
    one.bags = {cycle_graph(4).all_vertices()};
    one.parent = {-1};
    one.root = 0;
    CHECK(verify_decomposition(one, c4, 4, 0, 4).ok);
    CHECK(!verify_decomposition(one, c4, 4, 0, 3).ok);
}

TEST_CASE("component width") {
    // 2C4 has component width (2,1) but not plain width (2,1)
    Graph two_c4 = cycle_graph(4).disjoint_union(cycle_graph(4));
    auto comps = two_c4.components();
    REQUIRE(comps.size() == 2);
    // delete vertex 0 from each cycle, lay both paths on one line
    RootedDecomposition d;
    d.kind = RootedDecomposition::Kind::path;
    d.component_mode = true;
    d.component_exceptions = {bit(0), bit(4)};
    d.bags = {bit(0) | bit(1) | bit(2), bit(0) | bit(2) | bit(3),
              bit(4) | bit(5) | bit(6), bit(4) | bit(6) | bit(7)};
    d.parent = {-1, 0, 1, 2};
    d.root = 0;
    CHECK(verify_decomposition(d, two_c4, 2, 1).ok);
    CHECK(!find_path_decomposition(two_c4, 2, 1).has_value());
}

TEST_CASE("forest cover verification") {
    Graph p3 = path_graph(3);
    ForestCover fc;
    fc.variant = ForestCover::Variant::linear;
    fc.alphabet = PebbleAlphabet(2, 0);
    fc.parent = {-1, 0, 1};
    fc.pebble = {0, 1, 0}; // x1 x2 x1
    CHECK(verify_forest_cover(fc, p3).ok);
    fc.pebble = {0, 0, 1}; // adjacent repeat
    CHECK(!verify_forest_cover(fc, p3).ok);

    ForestCover yc;
    yc.variant = ForestCover::Variant::tree;
    yc.alphabet = PebbleAlphabet(1, 1);
    yc.parent = {-1, 0, 1};
    yc.pebble = {1, 0, 1}; // y1 below itself
    CHECK(!verify_forest_cover(yc, p3).ok);
    yc.pebble = {0, 1, 0}; // x1 y1 x1
    CHECK(verify_forest_cover(yc, p3).ok);
}

TEST_CASE("construction tree verification and K2 pipeline") {
    PebbleAlphabet a(2, 0);
    // single fully labeled leaf as root
    ConstructionTree single;
    LabeledGraph leaf(path_graph(2), a);
    leaf.labels[0] = 0;
    leaf.labels[1] = 1;
    single.root = ct_add_leaf(single, leaf);
    auto r1 = verify_construction_tree(single, &leaf, 2, 0);
    CHECK(r1.ok);
    CHECK(r1.elimination_depth == 0);

    // K2: leaf(x1,x2) -> elim x2 -> elim x1, depth 2
    ConstructionTree ct;
    int l = ct_add_leaf(ct, leaf);
    int e1 = ct_add_elim(ct, l, 1);
    ct.root = ct_add_elim(ct, e1, 0);
    auto r2 = verify_construction_tree(ct, nullptr, 2, 0);
    CHECK(r2.ok);
    CHECK(r2.elimination_depth == 2);

    // corrupted product payload
    ConstructionTree bad;
    int l1 = ct_add_leaf(bad, leaf);
    int l2 = ct_add_leaf(bad, leaf);
    bad.root = ct_add_product(bad, {l1, l2});
    bad.nodes[bad.root].payload.graph = complete_graph(3);
    bad.nodes[bad.root].payload.labels = {0, 1};
    CHECK(!verify_construction_tree(bad, nullptr, 2, 0).ok);

    // eval: hom(K2, C4) = 8
    LabeledGraph c4 = unlabeled(cycle_graph(4), a);
    CHECK(eval_hom_via_construction(ct, c4) == BigInt(8));
    CHECK(eval_hom_via_construction(ct, c4) == hom_count(ct.target(), c4));

    // K1: hom = |V(g)|
    ConstructionTree k1ct;
    LabeledGraph k1leaf(Graph(1), a);
    k1leaf.labels[0] = 0;
    k1ct.root = ct_add_elim(k1ct, ct_add_leaf(k1ct, k1leaf), 0);
    CHECK(eval_hom_via_construction(k1ct, c4) == BigInt(4));
}

TEST_CASE("eval via construction equals hom_count on a small sweep") {
    std::mt19937_64 rng(3);
    PebbleAlphabet a(4, 0);
    for (int t = 0; t < 12; ++t) {
        Graph f = random_graph(rng, 4, 0.5);
        auto dec = find_tree_decomposition(f, 4, 0, 4);
        REQUIRE(dec.has_value());
        auto cm = decomposition_to_construction(*dec, f, 4, 0);
        Graph g = random_graph(rng, 4, 0.5);
        LabeledGraph lg = unlabeled(g, a);
        // the construction target is an isomorphic copy of f
        CHECK(eval_hom_via_construction(cm.ct, lg) == hom_count(unlabeled(f, a), lg));
    }
}

TEST_CASE("make_nice preserves width and depth") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int t = 0; t < 25; ++t) {
        Graph g = random_graph(rng, 5, 0.45);
        auto dec = find_tree_decomposition(g, 3, 1, 5);
        if (!dec) continue;
        ++checked;
        WidthParams w = measure_width(*dec, g);
        RootedDecomposition nice = make_nice(*dec, g);
        auto check = verify_decomposition(nice, g, w.k1, w.k2, w.depth);
        CHECK(check.ok);
    }
    CHECK(checked > 5);

    // already-nice path input keeps its parameters
    RootedDecomposition d = p3_path_dec();
    WidthParams w = measure_width(d, path_graph(3));
    RootedDecomposition nice = make_nice(d, path_graph(3));
    CHECK(verify_decomposition(nice, path_graph(3), w.k1, w.k2, w.depth).ok);
}

TEST_CASE("decomposition <-> cover round trip") {
    // P3 nice path decomposition -> linear cover -> decomposition
    Graph p3 = path_graph(3);
    RootedDecomposition d = p3_path_dec();
    ForestCover fc = decomposition_to_cover(d, p3, 2, 0);
    CHECK(fc.variant == ForestCover::Variant::linear);
    CHECK(verify_forest_cover(fc, p3).ok);
    RootedDecomposition back = cover_to_decomposition(fc, p3);
    CHECK(verify_decomposition(back, p3, 2, 0).ok);

    // single vertex cover -> one-bag decomposition
    ForestCover tiny;
    tiny.variant = ForestCover::Variant::tree;
    tiny.alphabet = PebbleAlphabet(1, 0);
    tiny.parent = {-1};
    tiny.pebble = {0};
    RootedDecomposition td = cover_to_decomposition(tiny, Graph(1));
    CHECK(verify_decomposition(td, Graph(1), 1, 0).ok);

    // tree round trips on random graphs
    std::mt19937_64 rng(911);
    for (int t = 0; t < 15; ++t) {
        Graph g = random_graph(rng, 5, 0.4);
        auto dec = find_tree_decomposition(g, 3, 1, 5);
        if (!dec) continue;
        ForestCover cov = decomposition_to_cover(*dec, g, 3, 1);
        auto cv = verify_forest_cover(cov, g, 5);
        CHECK(cv.ok);
        RootedDecomposition rt = cover_to_decomposition(cov, g);
        CHECK(verify_decomposition(rt, g, 3, 1, 5).ok);
    }
}

TEST_CASE("decomposition <-> construction tree") {
    // K3 one-bag decomposition -> leaf + 3 eliminations, depth 3
    Graph k3 = complete_graph(3);
    RootedDecomposition d;
    d.kind = RootedDecomposition::Kind::tree;
    d.bags = {k3.all_vertices()};
    d.parent = {-1};
    d.root = 0;
    auto cm = decomposition_to_construction(d, k3, 3, 0);
    auto check = verify_construction_tree(cm.ct, nullptr, 3, 0);
    CHECK(check.ok);
    CHECK(check.elimination_depth == 3);
    CHECK(labeled_isomorphic(cm.ct.target(), unlabeled(k3, PebbleAlphabet(3, 0))));

    // back to a decomposition with matching parameters
    RootedDecomposition back = construction_to_decomposition(cm.ct, 3, 0);
    CHECK(verify_decomposition(back, cm.ct.target().graph, 3, 0, 3).ok);

    // caterpillar route for a path-decomposable graph
    Graph p4 = path_graph(4);
    auto pd = find_path_decomposition(p4, 2, 0);
    REQUIRE(pd.has_value());
    auto pcm = decomposition_to_construction(*pd, p4, 2, 0);
    CHECK(pcm.ct.caterpillar);
    CHECK(verify_construction_tree(pcm.ct, nullptr, 2, 0).ok);
    RootedDecomposition pback = construction_to_decomposition(pcm.ct, 2, 0);
    CHECK(pback.kind == RootedDecomposition::Kind::path);
    CHECK(verify_decomposition(pback, pcm.ct.target().graph, 2, 0).ok);
}

TEST_CASE("search oracles: pathwidth sanity") {
    CHECK(pathwidth(path_graph(5)) == 1);
    CHECK(pathwidth(cycle_graph(4)) == 2);
    CHECK(pathwidth(complete_graph(4)) == 3);
    CHECK(pathwidth(Graph(3)) == 0);
    // star K_{1,3} is a caterpillar: pathwidth 1
    Graph star(4);
    star.add_edge(0, 1);
    star.add_edge(0, 2);
    star.add_edge(0, 3);
    CHECK(pathwidth(star) == 1);
}

TEST_CASE("search oracles: covers") {
    CHECK(linear_cover_exists_connected(path_graph(5), 2, 0));
    CHECK(!linear_cover_exists_connected(cycle_graph(4), 2, 0));
    CHECK(linear_cover_exists_connected(cycle_graph(4), 2, 1));
    CHECK(forest_cover_exists(complete_graph(3), 3, 0, 3));
    CHECK(!forest_cover_exists(complete_graph(3), 2, 0, 3));
    CHECK(forest_cover_exists(path_graph(4), 2, 0, 4));
    // tree-depth of P4 is 3
    CHECK(forest_cover_exists(path_graph(4), 4, 0, 3));
    CHECK(!forest_cover_exists(path_graph(4), 4, 0, 2));
}

TEST_CASE("tree decomposition search matches cover search") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 20; ++t) {
        Graph g = random_graph(rng, 4, 0.5);
        for (int k1 = 1; k1 <= 3; ++k1)
            for (int k2 = 0; k2 <= 1; ++k2)
                for (int q = 1; q <= 4; ++q) {
                    bool dec = find_tree_decomposition(g, k1, k2, q).has_value();
                    bool cov = forest_cover_exists(g, k1, k2, q);
                    CHECK(dec == cov);
                }
    }
}

TEST_CASE("exception designations are non-reusable across sibling subtrees") {
    // per-leaf exception sets that re-designate a shared bag differently per
    // branch are not realizable: the game (and the cover view) refuse this
    // graph at (1,2) depth 4, so the verifier and the search must as well
    Graph g(6);
    int edges[][2] = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 5}, {2, 4}, {2, 5}};
    for (auto& e : edges) g.add_edge(e[0], e[1]);

    RootedDecomposition d;
    d.kind = RootedDecomposition::Kind::tree;
    d.bags = {0x0, 0x0, 0x1, 0x7, 0x7, 0xb, 0x7, 0x15, 0x7, 0x26};
    d.parent = {-1, 0, 1, 2, 3, 4, 3, 6, 3, 8};
    d.root = 0;
    d.leaf_exceptions[5] = 0x3; // {0,1}
    d.leaf_exceptions[7] = 0x5; // {0,2}
    d.leaf_exceptions[9] = 0x6; // {1,2}
    auto v = verify_decomposition(d, g, 1, 2, 4);
    CHECK(!v.ok);
    CHECK(v.diagnostic.find("realizable") != std::string::npos);
    // the naive per-leaf width would have accepted; the consistent class
    // agrees with the cover view
    CHECK(!find_tree_decomposition(g, 1, 2, 4).has_value());
    CHECK(!forest_cover_exists(g, 1, 2, 4));
    // the certificate family itself stays unrealizable at any budget (its
    // shared-bag intersection is empty), but consistent certificates with a
    // third slot do pass, matching the other views
    CHECK(!verify_decomposition(d, g, 1, 3, 4).ok);
    RootedDecomposition fixed = d;
    fixed.leaf_exceptions[5] = fixed.leaf_exceptions[7] = fixed.leaf_exceptions[9] = 0x7;
    CHECK(verify_decomposition(fixed, g, 1, 3, 4).ok);
    CHECK(find_tree_decomposition(g, 1, 3, 4).has_value());
    CHECK(forest_cover_exists(g, 1, 3, 4));
}
