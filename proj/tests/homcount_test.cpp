#include <doctest.h>

#include <random>

#include "homlab/homcount.hpp"

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

/// Independent oracle: hom(C_k, G) as the trace of the k-th adjacency power.
long long cycle_hom_by_trace(int k, const Graph& g) {
    std::vector<std::vector<long long>> m(g.n, std::vector<long long>(g.n, 0)), acc;
    for (int u = 0; u < g.n; ++u)
        for (int v = 0; v < g.n; ++v) m[u][v] = g.has_edge(u, v) ? 1 : 0;
    acc = m;
    for (int i = 1; i < k; ++i) {
        std::vector<std::vector<long long>> next(g.n, std::vector<long long>(g.n, 0));
        for (int u = 0; u < g.n; ++u)
            for (int w = 0; w < g.n; ++w)
                for (int v = 0; v < g.n; ++v) next[u][v] += acc[u][w] * m[w][v];
        acc = next;
    }
    long long tr = 0;
    for (int u = 0; u < g.n; ++u) tr += acc[u][u];
    return tr;
}

} // namespace

TEST_CASE("hom counts on unlabeled graphs") {
    Graph c5 = cycle_graph(5);
    CHECK(hom_count(Graph(1), c5) == BigInt(5));
    CHECK(hom_count(path_graph(2), c5) == BigInt(2 * c5.edge_count()));
    CHECK(hom_count(cycle_graph(4), complete_graph(3)) == BigInt(18));
    CHECK(hom_count(cycle_graph(4), complete_graph(3)) ==
          BigInt(cycle_hom_by_trace(4, complete_graph(3))));
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        Graph g = random_graph(rng, 5, 0.5);
        CHECK(hom_count(cycle_graph(4), g) == BigInt(cycle_hom_by_trace(4, g)));
        CHECK(hom_count(cycle_graph(3), g) == BigInt(cycle_hom_by_trace(3, g)));
    }
}

TEST_CASE("labeled hom counts: fully labeled rule") {
    PebbleAlphabet a(2, 0);
    // K2 with both endpoints labeled
    LabeledGraph f(path_graph(2), a);
    f.labels[0] = 0;
    f.labels[1] = 1;
    LabeledGraph g(cycle_graph(4), a);
    g.labels[0] = 0;
    g.labels[1] = 1; // an edge of C4
    CHECK(hom_count(f, g) == BigInt(1));
    g.labels[1] = 2; // a non-edge
    CHECK(hom_count(f, g) == BigInt(0));
    LabeledGraph h(cycle_graph(4), a);
    h.labels[0] = 0;
    CHECK_THROWS_AS(hom_count(f, h), std::invalid_argument); // x2 missing in target
}

TEST_CASE("multiplicativity and label-sum rule") {
    std::mt19937_64 rng(21);
    PebbleAlphabet a(2, 1);
    for (int t = 0; t < 15; ++t) {
        LabeledGraph g(random_graph(rng, 4, 0.5), a);
        for (int p = 0; p < a.size(); ++p)
            if (rng() % 2) g.labels[p] = static_cast<int>(rng() % 4);
        LabeledGraph f1(random_graph(rng, 3, 0.5), a);
        LabeledGraph f2(random_graph(rng, 2, 0.7), a);
        for (int p = 0; p < a.size(); ++p) {
            if (g.labels[p] == kNoVertex) continue;
            if (rng() % 2) f1.labels[p] = static_cast<int>(rng() % 3);
            else if (rng() % 2) f2.labels[p] = static_cast<int>(rng() % 2);
        }
        // when the identification collapses an edge the factors are jointly
        // unsatisfiable and both sides vanish
        if (product_with_maps(f1, f2).loop_created)
            CHECK(hom_count(f1, g) * hom_count(f2, g) == BigInt(0));
        else
            CHECK(hom_count(product(f1, f2), g) == hom_count(f1, g) * hom_count(f2, g));
    }
    // label-sum: hom(f[z->bot], g) = sum_v hom(f, g[z->v]), exhaustive over
    // small labeled shapes
    PebbleAlphabet a2(2, 0);
    for (int fe = 0; fe < 2; ++fe) {
        LabeledGraph f(fe == 0 ? path_graph(3) : complete_graph(3), a2);
        f.labels[0] = 0;
        f.labels[1] = 1;
        for (int ge = 0; ge < 2; ++ge) {
            LabeledGraph g(ge == 0 ? cycle_graph(4) : complete_graph(4), a2);
            g.labels[1] = 2;
            LabeledGraph f_dropped = relabel(f, 0, kNoVertex);
            BigInt total(0);
            for (int v = 0; v < g.graph.n; ++v) total += hom_count(f, relabel(g, 0, v));
            CHECK(hom_count(f_dropped, g) == total);
        }
    }
}

TEST_CASE("linear combinations") {
    PebbleAlphabet a(1, 0);
    LinComb empty;
    LabeledGraph g(cycle_graph(4), a);
    CHECK(hom_lincomb(empty, g) == Rational(0));
    LinComb two_k1;
    two_k1.add_term(Rational(1), unlabeled(Graph(1), a));
    two_k1.add_term(Rational(1), unlabeled(Graph(1), a));
    CHECK(hom_lincomb(two_k1, g) == Rational(8)); // merged to 2 * K1

    // negation pattern: -1*F + I yields 0 when hom(F, G) = 1
    LinComb neg;
    neg.add_term(Rational(-1), unlabeled(Graph(0), a)); // hom == 1
    neg.add_term(Rational(1), indicator_graph(a, {}));
    CHECK(hom_lincomb(neg, g) == Rational(0));
}

TEST_CASE("interpolate") {
    PebbleAlphabet a(1, 0);
    LabeledGraph f = unlabeled(path_graph(2), a); // hom(f, G) = 2|E|
    // p(x) = x on {0} -> 0, {1} -> 1
    LinComb ident = interpolate(f, {Rational(0)}, {Rational(1)});
    REQUIRE(ident.terms.size() == 1);
    CHECK(ident.terms[0].coef == Rational(1));
    // p(x) = 1 - x
    LinComb flip = interpolate(f, {Rational(1)}, {Rational(0)});
    CHECK(flip.terms.size() == 2);

    // s_minus = {0,2}, s_plus = {1}: evaluates to 1 on hom==1, 0 on hom in {0,2}
    LinComb lagr = interpolate(f, {Rational(0), Rational(2)}, {Rational(1)});
    Graph one_edge = path_graph(2); // hom = 2 -> expect 0
    Graph no_edge(2);               // hom = 0 -> expect 0
    // a graph with hom(K2, G) = 1 does not exist (hom counts ordered edges),
    // so check the polynomial pointwise through hom_lincomb on crafted values
    CHECK(hom_lincomb(lagr, unlabeled(no_edge, a)) == Rational(0));
    CHECK(hom_lincomb(lagr, unlabeled(one_edge, a)) == Rational(0));
    // and on K2 with a loopless single ordered edge pair count 2 -> 0 above;
    // verify the +1 point via a labeled fixture: f fully labeled has hom 0/1
    LabeledGraph fl(path_graph(2), PebbleAlphabet(2, 0));
    fl.labels[0] = 0;
    fl.labels[1] = 1;
    LinComb point = interpolate(fl, {Rational(0)}, {Rational(1)});
    LabeledGraph target(path_graph(2), PebbleAlphabet(2, 0));
    target.labels[0] = 0;
    target.labels[1] = 1;
    CHECK(hom_lincomb(point, target) == Rational(1));
    CHECK_THROWS_AS(interpolate(f, {Rational(1)}, {Rational(1)}), std::invalid_argument);
}

TEST_CASE("spasm") {
    auto names = [](const std::vector<Graph>& gs) {
        std::vector<std::pair<int, int>> sig;
        for (const auto& g : gs) sig.push_back({g.n, g.edge_count()});
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    CHECK(spasm(complete_graph(3)).size() == 1);
    auto sp3 = spasm(path_graph(3));
    CHECK(names(sp3) == std::vector<std::pair<int, int>>{{2, 1}, {3, 2}});
    Graph two_k2 = path_graph(2).disjoint_union(path_graph(2));
    auto s2 = spasm(two_k2);
    CHECK(names(s2) == std::vector<std::pair<int, int>>{{2, 1}, {3, 2}, {4, 2}});
}

TEST_CASE("sub_coefficients") {
    std::mt19937_64 rng(5);
    // K2: sub = |E| = (1/2) hom(K2, .)
    auto k2c = sub_coefficients(path_graph(2));
    REQUIRE(k2c.basis.size() == 1);
    CHECK(k2c.coef[0] == Rational(1, 2));
    // P3: (1/2) P3 - (1/2) K2, checked against direct counting on randoms
    auto p3c = sub_coefficients(path_graph(3));
    REQUIRE(p3c.basis.size() == 2);
    for (int t = 0; t < 20; ++t) {
        Graph g = random_graph(rng, 6, 0.5);
        long long direct = 0;
        for (int v = 0; v < g.n; ++v) direct += g.degree(v) * (g.degree(v) - 1) / 2;
        CHECK(sub_count_via_hom(p3c, g) == Rational(direct));
        CHECK(sub_count_direct(path_graph(3), g) == Rational(direct));
    }
    // K3: 1/6 K3
    auto k3c = sub_coefficients(complete_graph(3));
    REQUIRE(k3c.basis.size() == 1);
    CHECK(k3c.coef[0] == Rational(1, 6));
}

TEST_CASE("hom profiles") {
    std::vector<Graph> family{Graph(1), path_graph(2), complete_graph(3)};
    auto prof = hom_profile(family, cycle_graph(5));
    CHECK(prof[0] == BigInt(5));
    CHECK(prof[1] == BigInt(10));
    CHECK(prof[2] == BigInt(0));
    // profiles of isomorphic targets agree
    Graph g = cycle_graph(5);
    Graph h(5);
    h.add_edge(2, 4);
    h.add_edge(4, 1);
    h.add_edge(1, 3);
    h.add_edge(3, 0);
    h.add_edge(0, 2);
    REQUIRE(are_isomorphic(g, h));
    CHECK(hom_profile(family, g) == hom_profile(family, h));
}

TEST_CASE("bigint and rationals") {
    BigInt a = BigInt::from_string("123456789012345678901234567890");
    BigInt b = BigInt::from_string("987654321098765432109876543210");
    CHECK((a * b).to_string() == "121932631137021795226185032733622923332237463801111263526900");
    CHECK((b / a).to_string() == "8");
    CHECK((b % a) == b - (b / a) * a);
    CHECK(BigInt::gcd(BigInt(48), BigInt(36)) == BigInt(12));
    Rational r(6, -4);
    CHECK(r.to_string() == "-3/2");
    CHECK(Rational::from_string("-3/2") == r);
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK((BigInt(-7) / BigInt(2)).to_ll() == -3);
    CHECK((BigInt(-7) % BigInt(2)).to_ll() == -1);
}
