#include <doctest.h>

#include <random>

#include "homlab/pursuit.hpp"
#include "homlab/search.hpp"

using namespace homlab;

namespace {

Graph random_connected(std::mt19937_64& rng, int n, double p) {
    while (true) {
        Graph g(n);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (coin(rng) < p) g.add_edge(u, v);
        if (g.connected()) return g;
    }
}

} // namespace

TEST_CASE("solve_ns basic verdicts") {
    CHECK(solve_ns(path_graph(5), 2, 0).outcome == NsOutcome::searchers_win);
    CHECK(solve_ns(cycle_graph(4), 2, 0).outcome == NsOutcome::fugitive_wins);
    CHECK(solve_ns(cycle_graph(4), 3, 0).outcome == NsOutcome::searchers_win);
    CHECK(solve_ns(cycle_graph(4), 2, 1).outcome == NsOutcome::searchers_win);
    auto k1 = solve_ns(Graph(1), 1, 0);
    CHECK(k1.outcome == NsOutcome::searchers_win);
    REQUIRE(k1.strategy.has_value());
    CHECK(k1.strategy->moves.size() == 1);
    // one-shot placements
    CHECK(solve_ns(path_graph(2), 0, 2).outcome == NsOutcome::searchers_win);
    CHECK(solve_ns(complete_graph(3), 0, 2).outcome == NsOutcome::fugitive_wins);
}

TEST_CASE("solve_ns equals pathwidth with k2 = 0") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 15; ++t) {
        Graph g = random_connected(rng, 5, 0.5);
        int pw = pathwidth(g);
        for (int k = 1; k <= 4; ++k)
            CHECK((solve_ns(g, k, 0).outcome == NsOutcome::searchers_win) == (pw <= k - 1));
    }
}

TEST_CASE("solve_ns_direct agrees with solve_ns") {
    std::mt19937_64 rng(13);
    std::vector<std::pair<int, int>> grid{{1, 0}, {2, 0}, {1, 1}, {0, 2}, {2, 1}};
    for (int t = 0; t < 8; ++t) {
        Graph g = random_connected(rng, 4, 0.5);
        for (auto [k1, k2] : grid) {
            auto fast = solve_ns(g, k1, k2).outcome;
            auto direct = solve_ns_direct(g, k1, k2, 24);
            REQUIRE(direct != NsDirectOutcome::inconclusive);
            CHECK((fast == NsOutcome::searchers_win) ==
                  (direct == NsDirectOutcome::searchers_win));
        }
    }
    CHECK(solve_ns_direct(path_graph(2), 0, 2, 10) == NsDirectOutcome::searchers_win);
    CHECK(solve_ns_direct(complete_graph(3), 0, 2, 20) == NsDirectOutcome::fugitive_wins);
}

TEST_CASE("NS strategies are legal, winning and monotone") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 10; ++t) {
        Graph g = random_connected(rng, 5, 0.45);
        for (auto [k1, k2] : std::vector<std::pair<int, int>>{{2, 0}, {2, 1}, {3, 0}, {1, 2}}) {
            auto res = solve_ns(g, k1, k2);
            if (res.outcome != NsOutcome::searchers_win) continue;
            REQUIRE(res.strategy.has_value());
            CHECK(is_monotone_ns(*res.strategy, g));
        }
    }
    // hand-built recontaminating strategy on P3 with 2 searchers:
    // place on 0 and 1, lift 1 (region grows back over 1), then finish
    NsStrategy bad{PebbleAlphabet(2, 0), {}};
    bad.moves = {{0, 0}, {1, 1}, {1, kNoVertex}, {1, 1}, {0, 2}};
    CHECK(!is_monotone_ns(bad, path_graph(3)));
}

TEST_CASE("solve_cr basic verdicts") {
    CHECK(solve_cr(path_graph(3), 2, 0, 2).outcome == CrOutcome::cops_win);
    CHECK(solve_cr(path_graph(3), 1, 1, 2).outcome == CrOutcome::cops_win);
    for (int q = 1; q <= 5; ++q)
        CHECK(solve_cr(complete_graph(3), 2, 0, q).outcome == CrOutcome::robber_wins);
    CHECK(solve_cr(complete_graph(3), 3, 0, 3).outcome == CrOutcome::cops_win);
    CHECK(solve_cr(Graph(1), 1, 0, 1).outcome == CrOutcome::cops_win);
}

TEST_CASE("CR strategies replay and are monotone") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 8; ++t) {
        Graph g = random_connected(rng, 4, 0.5);
        for (int q = 1; q <= 4; ++q) {
            auto res = solve_cr(g, 2, 1, q);
            if (res.outcome != CrOutcome::cops_win) continue;
            REQUIRE(res.strategy.has_value());
            CHECK(is_monotone_cr(*res.strategy, g));
        }
    }
}

TEST_CASE("membership") {
    CHECK(membership(cycle_graph(4), GraphClass::P, 3, 0));
    CHECK(!membership(cycle_graph(4), GraphClass::P, 2, 0));
    Graph two_c4 = cycle_graph(4).disjoint_union(cycle_graph(4));
    CHECK(!membership(two_c4, GraphClass::P, 2, 1));
    CHECK(membership(two_c4, GraphClass::UP, 2, 1));
    CHECK(membership(Graph(1), GraphClass::T, 1, 0, 1));
    // one reusable cop never catches the robber on K2
    for (int q = 1; q <= 4; ++q) CHECK(!membership(path_graph(2), GraphClass::T, 1, 0, q));
    // T membership is monotone when loosening q and k1
    std::mt19937_64 rng(31);
    for (int t = 0; t < 6; ++t) {
        Graph g = random_connected(rng, 4, 0.5);
        for (int k = 1; k <= 3; ++k)
            for (int q = 1; q <= 3; ++q) {
                if (membership(g, GraphClass::T, k, 0, q)) {
                    CHECK(membership(g, GraphClass::T, k + 1, 0, q));
                    CHECK(membership(g, GraphClass::T, k, 0, q + 1));
                }
            }
    }
}

TEST_CASE("characterization agreement on small graphs") {
    // NS verdict == path decomposition existence == linear cover existence
    std::mt19937_64 rng(55);
    for (int t = 0; t < 6; ++t) {
        Graph g = random_connected(rng, 4, 0.5);
        for (int k1 = 0; k1 <= 3; ++k1)
            for (int k2 = 0; k2 <= 2; ++k2) {
                if (k1 + k2 < 1) continue;
                bool game = solve_ns(g, k1, k2).outcome == NsOutcome::searchers_win;
                bool dec = find_path_decomposition(g, k1, k2).has_value();
                CHECK(game == dec);
                if (k1 >= 1) {
                    bool cover = linear_cover_exists_connected(g, k1, k2);
                    CHECK(game == cover);
                }
            }
    }
    // CR verdict == depth-bounded tree decomposition existence
    for (int t = 0; t < 5; ++t) {
        Graph g = random_connected(rng, 4, 0.5);
        for (int k1 = 1; k1 <= 3; ++k1)
            for (int q = 1; q <= 4; ++q) {
                bool game = solve_cr(g, k1, 0, q).outcome == CrOutcome::cops_win;
                bool dec = find_tree_decomposition(g, k1, 0, q).has_value();
                CHECK(game == dec);
            }
    }
}
