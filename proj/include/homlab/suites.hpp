#pragma once

#include <atomic>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "cfi.hpp"
#include "comonad.hpp"
#include "convert.hpp"
#include "enumerate.hpp"
#include "logic_translate.hpp"
#include "modelgames.hpp"
#include "pursuit.hpp"
#include "search.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Cross-theorem verification suites. Each suite checks one acceptance
// criterion exactly as stated; failures carry a replayable witness line.
// ---------------------------------------------------------------------------

struct SuiteConfig {
    uint64_t seed = 12345;
    int jobs = 2;
};

struct SuiteReport {
    std::string name;
    int instances = 0;
    int failures = 0;
    uint64_t seed = 0;
    std::vector<std::string> witnesses;
    bool ok() const { return failures == 0; }
};

namespace detail {

struct SuiteRun {
    SuiteReport report;
    std::mutex mu;

    void item(bool pass, const std::string& witness) {
        std::lock_guard<std::mutex> lock(mu);
        ++report.instances;
        if (!pass) {
            ++report.failures;
            if (report.witnesses.size() < 25) report.witnesses.push_back(witness);
        }
    }
};

/// Deterministic worker pool over an instance list; results merge by index.
template <typename Fn>
void parallel_instances(int count, int jobs, Fn&& fn) {
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& t : workers) t.join();
}

inline std::vector<std::pair<int, int>> pebble_grid() {
    std::vector<std::pair<int, int>> grid;
    for (int k1 = 0; k1 <= 3; ++k1)
        for (int k2 = 0; k2 <= 2; ++k2)
            if (k1 + k2 >= 1) grid.push_back({k1, k2});
    return grid;
}

inline std::string g6(const Graph& g) {
    std::string out(1, static_cast<char>(g.n + 63));
    int bits = g.n * (g.n - 1) / 2;
    std::vector<int> chunk((bits + 5) / 6, 0);
    int bitpos = 0;
    for (int j = 1; j < g.n; ++j)
        for (int i = 0; i < j; ++i, ++bitpos)
            if (g.has_edge(i, j)) chunk[bitpos / 6] |= 1 << (5 - bitpos % 6);
    for (int c : chunk) out.push_back(static_cast<char>(c + 63));
    return out;
}

} // namespace detail

// --- 1: path characterization ----------------------------------------------

inline SuiteReport suite_characterization_path(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "characterization-path";
    std::vector<Graph> graphs = enumerate_graphs(6, true);
    auto grid = detail::pebble_grid();
    std::vector<std::pair<const Graph*, std::pair<int, int>>> instances;
    for (const Graph& g : graphs)
        for (auto kk : grid) instances.push_back({&g, kk});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int i) {
        const Graph& g = *instances[i].first;
        auto [k1, k2] = instances[i].second;
        bool game = solve_ns(g, k1, k2).outcome == NsOutcome::searchers_win;
        bool dec = find_path_decomposition(g, k1, k2).has_value();
        bool cover = k1 + k2 >= 1 && linear_cover_exists_connected(g, k1, k2);
        bool pass = game == dec && dec == cover;
        std::ostringstream w;
        w << "graph " << detail::g6(g) << " k1=" << k1 << " k2=" << k2 << " game=" << game
          << " decomposition=" << dec << " cover=" << cover
          << "  [homlab solve ns --g6 " << detail::g6(g) << " --k1 " << k1 << " --k2 " << k2
          << "]";
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 2: tree characterization ----------------------------------------------

inline SuiteReport suite_characterization_tree(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "characterization-tree";
    std::vector<Graph> graphs = enumerate_graphs(5, true);
    auto grid = detail::pebble_grid();
    std::vector<std::tuple<const Graph*, int, int, int>> instances;
    for (const Graph& g : graphs)
        for (auto [k1, k2] : grid)
            for (int q = 1; q <= 4; ++q) instances.push_back({&g, k1, k2, q});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int i) {
        auto [gp, k1, k2, q] = instances[i];
        const Graph& g = *gp;
        bool game = solve_cr(g, k1, k2, q).outcome == CrOutcome::cops_win;
        bool dec = find_tree_decomposition(g, k1, k2, q).has_value();
        bool cover = forest_cover_exists(g, k1, k2, q);
        bool pass = game == dec && dec == cover;
        std::ostringstream w;
        w << "graph " << detail::g6(g) << " k1=" << k1 << " k2=" << k2 << " q=" << q
          << " game=" << game << " decomposition=" << dec << " cover=" << cover
          << "  [homlab solve cr --g6 " << detail::g6(g) << " --k1 " << k1 << " --k2 " << k2
          << " --rounds " << q << "]";
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 3: non-reusable-first normal form ---------------------------------------

inline SuiteReport suite_nonreusable_first(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "nonreusable-first";
    std::vector<Graph> graphs = enumerate_graphs(5, true);
    auto grid = detail::pebble_grid();
    std::vector<std::pair<const Graph*, std::pair<int, int>>> instances;
    for (const Graph& g : graphs)
        for (auto kk : grid) instances.push_back({&g, kk});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int i) {
        const Graph& g = *instances[i].first;
        auto [k1, k2] = instances[i].second;
        bool fast = solve_ns(g, k1, k2).outcome == NsOutcome::searchers_win;
        NsDirectOutcome direct = solve_ns_direct(g, k1, k2, 40);
        bool conclusive = direct != NsDirectOutcome::inconclusive;
        bool pass = conclusive && fast == (direct == NsDirectOutcome::searchers_win);
        std::ostringstream w;
        w << "graph " << detail::g6(g) << " k1=" << k1 << " k2=" << k2 << " normal-form=" << fast
          << " direct=" << (conclusive ? (direct == NsDirectOutcome::searchers_win ? "win" : "lose")
                                       : "inconclusive");
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 4: monotone strategies ----------------------------------------------------

inline SuiteReport suite_monotone_strategies(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "monotone-strategies";
    auto grid = detail::pebble_grid();
    std::vector<Graph> ns_graphs = enumerate_graphs(6, true);
    std::vector<Graph> cr_graphs = enumerate_graphs(5, true);
    std::vector<std::tuple<int, const Graph*, int, int, int>> instances; // (kind, g, k1, k2, q)
    for (const Graph& g : ns_graphs)
        for (auto [k1, k2] : grid) instances.push_back({0, &g, k1, k2, 0});
    for (const Graph& g : cr_graphs)
        for (auto [k1, k2] : grid)
            for (int q = 1; q <= 4; ++q) instances.push_back({1, &g, k1, k2, q});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int i) {
        auto [kind, gp, k1, k2, q] = instances[i];
        const Graph& g = *gp;
        bool pass = true;
        std::string detail_str = "no strategy (evader wins)";
        try {
            if (kind == 0) {
                auto res = solve_ns(g, k1, k2);
                if (res.outcome == NsOutcome::searchers_win)
                    pass = is_monotone_ns(*res.strategy, g), detail_str = "checked ns strategy";
            } else {
                auto res = solve_cr(g, k1, k2, q);
                if (res.outcome == CrOutcome::cops_win)
                    pass = is_monotone_cr(*res.strategy, g), detail_str = "checked cr strategy";
            }
        } catch (const std::exception& e) {
            pass = false;
            detail_str = e.what();
        }
        std::ostringstream w;
        w << (kind == 0 ? "ns " : "cr ") << detail::g6(g) << " k1=" << k1 << " k2=" << k2;
        if (kind == 1) w << " q=" << q;
        w << " " << detail_str;
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 5: CFI parity ---------------------------------------------------------------

inline SuiteReport suite_cfi_parity(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "cfi-parity";
    run.report.seed = cfg.seed;
    std::vector<Graph> graphs = enumerate_graphs(5, true);
    struct Instance {
        const Graph* g;
        VertexSet s, t;
    };
    std::vector<Instance> instances;
    std::mt19937_64 rng(cfg.seed);
    for (const Graph& g : graphs)
        for (int rep = 0; rep < 10; ++rep)
            instances.push_back({&g, rng() & g.all_vertices(), rng() & g.all_vertices()});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int i) {
        const Graph& g = *instances[i].g;
        VertexSet s = instances[i].s, t = instances[i].t;
        bool pass = true;
        std::string note;
        try {
            bool iso = parity_check(g, s, t);
            bool parity = (popcount(s) % 2) == (popcount(t) % 2);
            pass = iso == parity;
        } catch (const std::exception& e) {
            pass = false;
            note = e.what();
        }
        std::ostringstream w;
        w << "base " << detail::g6(g) << " |S|=" << popcount(s) << " |T|=" << popcount(t) << " "
          << note;
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 6: homomorphism-distinguishing evidence at C4 ----------------------------

inline SuiteReport suite_hdc_desk(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "hdc-desk";
    Graph c4 = cycle_graph(4);
    Graph x = cfi_even(c4).graph;
    Graph xt = cfi_odd(c4).graph;
    PebbleAlphabet plain(2, 0); // alphabet of the family's construction trees
    LabeledGraph lx = unlabeled(x, plain), lxt = unlabeled(xt, plain);

    // the family P(2,0) restricted to <= 8 vertices: pathwidth-one graphs
    // live among the forests
    std::vector<Graph> family;
    for (const Graph& f : enumerate_forests(8))
        if (membership(f, GraphClass::P, 2, 0)) family.push_back(f);
    // sanity on the family shape: no cycles ever qualify
    {
        bool c4_in = membership(c4, GraphClass::P, 2, 0);
        run.item(!c4_in, "C4 must lie outside P(2,0)");
    }
    detail::parallel_instances(static_cast<int>(family.size()), cfg.jobs, [&](int i) {
        const Graph& f = family[i];
        bool pass = true;
        std::string note;
        try {
            auto dec = find_path_decomposition(f, 2, 0);
            if (!dec) throw std::logic_error("family member lost its decomposition");
            auto cm = decomposition_to_construction(*dec, f, 2, 0);
            BigInt via_x = eval_hom_via_construction(cm.ct, lx);
            BigInt via_xt = eval_hom_via_construction(cm.ct, lxt);
            pass = via_x == via_xt;
            if (f.n <= 6) {
                // independent recomputation on the smaller members
                pass = pass && via_x == hom_count(unlabeled(f, plain), lx) &&
                       via_xt == hom_count(unlabeled(f, plain), lxt);
            }
            if (!pass) note = "hom(" + detail::g6(f) + ", X) = " + via_x.to_string() +
                              " vs hom(F, Xt) = " + via_xt.to_string();
        } catch (const std::exception& e) {
            pass = false;
            note = e.what();
        }
        run.item(pass, "family member " + detail::g6(f) + " " + note);
    });
    // the distinguisher: C4 itself, in P(3,0), with frozen counts 64 vs 48
    BigInt hx = hom_count(unlabeled(c4, plain), lx);
    BigInt hxt = hom_count(unlabeled(c4, plain), lxt);
    run.item(membership(c4, GraphClass::P, 3, 0), "C4 in P(3,0)");
    run.item(hx == BigInt(64), "hom(C4, X(C4)) = 64, got " + hx.to_string());
    run.item(hxt == BigInt(48), "hom(C4, Xt(C4)) = 48, got " + hxt.to_string());
    run.item(hx != hxt, "distinguishing count");
    return run.report;
}

// --- 7: spasm and subgraph counts ----------------------------------------------

inline SuiteReport suite_spasm_sub(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "spasm-sub";
    std::vector<Graph> patterns;
    for (const Graph& f : enumerate_graphs(5, false))
        if (f.edge_count() >= 1 && f.edge_count() <= 4) patterns.push_back(f);
    std::vector<Graph> targets = enumerate_graphs(7, false);
    std::vector<SubCoefficients> coeffs(patterns.size());
    for (size_t i = 0; i < patterns.size(); ++i) coeffs[i] = sub_coefficients(patterns[i]);
    std::vector<std::pair<int, int>> instances;
    for (size_t i = 0; i < patterns.size(); ++i)
        for (size_t j = 0; j < targets.size(); ++j)
            instances.push_back({static_cast<int>(i), static_cast<int>(j)});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int k) {
        auto [i, j] = instances[k];
        const Graph& f = patterns[i];
        const Graph& g = targets[j];
        Rational via_hom = sub_count_via_hom(coeffs[i], g);
        Rational direct = sub_count_direct(f, g);
        bool pass = via_hom == direct;
        std::ostringstream w;
        w << "F=" << detail::g6(f) << " G=" << detail::g6(g) << " via-hom=" << via_hom.to_string()
          << " direct=" << direct.to_string();
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 8: construction DP --------------------------------------------------------

inline SuiteReport suite_construction_dp(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "construction-dp";
    std::vector<Graph> graphs = enumerate_graphs(5, false);
    PebbleAlphabet a(5, 0);
    std::vector<ConstructionTree> cts(graphs.size());
    for (size_t i = 0; i < graphs.size(); ++i) {
        auto dec = find_tree_decomposition(graphs[i], 5, 0, 5);
        cts[i] = decomposition_to_construction(*dec, graphs[i], 5, 0).ct;
    }
    std::vector<std::pair<int, int>> instances;
    for (size_t i = 0; i < graphs.size(); ++i)
        for (size_t j = 0; j < graphs.size(); ++j)
            instances.push_back({static_cast<int>(i), static_cast<int>(j)});
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int k) {
        auto [i, j] = instances[k];
        LabeledGraph target = unlabeled(graphs[j], a);
        BigInt via_dp = eval_hom_via_construction(cts[i], target);
        BigInt direct = hom_count(unlabeled(graphs[i], a), target);
        bool pass = via_dp == direct;
        std::ostringstream w;
        w << "F=" << detail::g6(graphs[i]) << " G=" << detail::g6(graphs[j])
          << " dp=" << via_dp.to_string() << " hom=" << direct.to_string();
        run.item(pass, w.str());
    });
    return run.report;
}

// --- 9: logic round trips --------------------------------------------------------

inline SuiteReport suite_logic_roundtrip(const SuiteConfig& cfg) {
    using namespace logic;
    homlab::detail::SuiteRun run;
    run.report.name = "logic-roundtrip";
    std::vector<Graph> targets4 = enumerate_graphs(4, false);
    std::vector<Graph> targets5 = enumerate_graphs(5, false);

    // (a) caterpillar formulas against hom counts, connected F <= 5 at three grids
    std::vector<std::pair<int, int>> path_grids{{2, 0}, {2, 1}, {3, 0}};
    for (auto [k1, k2] : path_grids) {
        PebbleAlphabet alphabet(k1, k2);
        std::vector<std::pair<Graph, ConstructionTree>> family;
        for (const Graph& f : enumerate_graphs(5, true)) {
            auto dec = find_path_decomposition(f, k1, k2);
            if (!dec) continue;
            family.push_back({f, decomposition_to_construction(*dec, f, k1, k2).ct});
        }
        homlab::detail::parallel_instances(static_cast<int>(family.size()), cfg.jobs, [&](int i) {
            const auto& [f, ct] = family[i];
            bool pass = true;
            std::string note;
            try {
                FormulaPtr probe = formula_from_construction(ct, 0, false);
                auto rep = analyze(probe, alphabet);
                if (!rep.in_land_c || !rep.restricted_conjunctions) {
                    pass = false;
                    note = "fragment flags";
                }
                for (const Graph& g : targets5) {
                    LabeledGraph lg = unlabeled(g, alphabet);
                    long long m = hom_count(unlabeled(f, alphabet), lg).to_ll();
                    if (!evaluate(formula_from_construction(ct, m, false), lg) ||
                        evaluate(formula_from_construction(ct, m + 1, false), lg)) {
                        pass = false;
                        note = "mismatch on " + homlab::detail::g6(g);
                        break;
                    }
                }
            } catch (const std::exception& e) {
                pass = false;
                note = e.what();
            }
            run.item(pass, "path F=" + homlab::detail::g6(f) + " k1=" + std::to_string(k1) +
                               " k2=" + std::to_string(k2) + " " + note);
        });
    }

    // (b) tree formulas with rank bounds, F <= 4
    std::vector<std::tuple<int, int, int>> tree_grids{{2, 0, 3}, {1, 1, 3}, {3, 0, 4}};
    for (auto [k1, k2, q] : tree_grids) {
        PebbleAlphabet alphabet(k1, k2);
        std::vector<std::pair<Graph, ConstructionTree>> family;
        for (const Graph& f : enumerate_graphs(4, true)) {
            auto dec = find_tree_decomposition(f, k1, k2, q);
            if (!dec) continue;
            family.push_back({f, decomposition_to_construction(*dec, f, k1, k2).ct});
        }
        homlab::detail::parallel_instances(static_cast<int>(family.size()), cfg.jobs, [&](int i) {
            const auto& [f, ct] = family[i];
            bool pass = true;
            std::string note;
            try {
                std::map<int, std::unique_ptr<TreeFormulaBuilder>> builders;
                for (const Graph& g : targets4) {
                    if (!builders.count(g.n))
                        builders[g.n] = std::make_unique<TreeFormulaBuilder>(ct, g.n);
                    TreeFormulaBuilder& builder = *builders[g.n];
                    LabeledGraph lg = unlabeled(g, alphabet);
                    long long m = hom_count(unlabeled(f, alphabet), lg).to_ll();
                    FormulaPtr phi = builder.formula(m);
                    auto rep = analyze(phi, alphabet, q);
                    if (!rep.in_c_q || rep.quantifier_rank > q) {
                        pass = false;
                        note = "rank/fragment on " + homlab::detail::g6(g);
                        break;
                    }
                    if (!evaluate(phi, lg) || evaluate(builder.formula(m + 1), lg)) {
                        pass = false;
                        note = "mismatch on " + homlab::detail::g6(g);
                        break;
                    }
                }
            } catch (const std::exception& e) {
                pass = false;
                note = e.what();
            }
            run.item(pass, "tree F=" + homlab::detail::g6(f) + " k=(" + std::to_string(k1) + "," +
                               std::to_string(k2) + ") q=" + std::to_string(q) + " " + note);
        });
    }

    // (c) path-mode combinations count solutions
    {
        PebbleAlphabet alphabet(2, 1);
        struct Case {
            FormulaPtr body;
            std::vector<Var> frees;
        };
        std::vector<Case> cases;
        cases.push_back({f_eq(Var::x(1), Var::x(2)), {Var::x(1), Var::x(2)}});
        cases.push_back({f_edge(Var::x(1), Var::x(2)), {Var::x(1), Var::x(2)}});
        cases.push_back({f_exists(Var::x(2), f_and({f_eq(Var::x(2), Var::w(1)),
                                                    f_edge(Var::x(1), Var::x(2))})),
                         {Var::x(1)}});
        cases.push_back(
            {f_exists(Var::y(1), f_and({f_eq(Var::y(1), Var::w(1)), f_edge(Var::y(1), Var::x(1)),
                                        f_not(f_eq(Var::y(1), Var::x(1)))})),
             {Var::x(1)}});
        cases.push_back(
            {f_exists(Var::x(1),
                      f_and({f_eq(Var::x(1), Var::w(1)),
                             f_exists(Var::x(2), f_and({f_eq(Var::x(2), Var::w(2)),
                                                        f_edge(Var::x(1), Var::x(2))}))})),
             {}});
        for (size_t ci = 0; ci < cases.size(); ++ci) {
            const auto& c = cases[ci];
            bool pass = true;
            std::string note;
            try {
                auto cc = lincomb_from_formula_path(c.body, alphabet);
                if (!verify_certificates(cc, 2, 1, true)) {
                    pass = false;
                    note = "certificates";
                }
                std::set<Var> tallies;
                for (const Var& v : free_vars(c.body))
                    if (v.kind == Var::Kind::w) tallies.insert(v);
                for (const Graph& g : targets4) {
                    // every assignment of the free pebble variables
                    std::vector<int> choices(c.frees.size(), 0);
                    std::function<bool(size_t)> sweep = [&](size_t fi) -> bool {
                        if (fi == c.frees.size()) {
                            LabeledGraph lg = unlabeled(g, alphabet);
                            for (size_t x = 0; x < c.frees.size(); ++x)
                                lg.labels[c.frees[x].pebble_id(alphabet)] = choices[x];
                            long long solutions = 0;
                            std::vector<Var> ws(tallies.begin(), tallies.end());
                            std::vector<int> wv(ws.size(), 0);
                            std::function<void(size_t)> count = [&](size_t wi) {
                                if (wi == ws.size()) {
                                    Assignment tally;
                                    for (size_t t = 0; t < ws.size(); ++t) tally[ws[t]] = wv[t];
                                    if (evaluate(c.body, lg, tally)) ++solutions;
                                    return;
                                }
                                for (int v = 0; v < g.n; ++v) {
                                    wv[wi] = v;
                                    count(wi + 1);
                                }
                            };
                            count(0);
                            return hom_lincomb(cc.comb, lg) == Rational(solutions);
                        }
                        for (int v = 0; v < g.n; ++v) {
                            choices[fi] = v;
                            if (!sweep(fi + 1)) return false;
                        }
                        return true;
                    };
                    if (!sweep(0)) {
                        pass = false;
                        note = "solution count mismatch on " + homlab::detail::g6(g);
                        break;
                    }
                }
            } catch (const std::exception& e) {
                pass = false;
                note = e.what();
            }
            run.item(pass, "lincomb-path case " + std::to_string(ci) + " " + note);
        }
    }

    // (d) tree-mode combinations model sentences per order
    {
        PebbleAlphabet alphabet(2, 1);
        std::vector<FormulaPtr> sentences{
            f_count_ge(2, Var::x(1), f_count_ge(1, Var::x(2), f_edge(Var::x(1), Var::x(2)))),
            f_forall(Var::x(1), f_count_ge(1, Var::x(2), f_edge(Var::x(1), Var::x(2)))),
            f_count_ge(1, Var::y(1), f_count_ge(2, Var::x(1), f_edge(Var::y(1), Var::x(1)))),
            f_not(f_count_ge(3, Var::x(1), f_count_ge(1, Var::x(2), f_edge(Var::x(1), Var::x(2))))),
            f_or({f_count_ge(4, Var::x(1), f_true()),
                  f_forall(Var::x(1), f_count_ge(1, Var::x(2), f_edge(Var::x(1), Var::x(2))))}),
        };
        for (size_t si = 0; si < sentences.size(); ++si) {
            bool pass = true;
            std::string note;
            try {
                for (int n = 1; n <= 4; ++n) {
                    auto cc = lincomb_from_formula_tree(sentences[si], alphabet, n);
                    if (!verify_certificates(cc, 2, 1, false)) {
                        pass = false;
                        note = "certificates at order " + std::to_string(n);
                        break;
                    }
                    for (const Graph& g : targets4) {
                        if (g.n != n) continue;
                        LabeledGraph lg = unlabeled(g, alphabet);
                        bool truth = evaluate(sentences[si], lg);
                        if (hom_lincomb(cc.comb, lg) != Rational(truth ? 1 : 0)) {
                            pass = false;
                            note = "model mismatch on " + homlab::detail::g6(g);
                            break;
                        }
                    }
                    if (!pass) break;
                }
            } catch (const std::exception& e) {
                pass = false;
                note = e.what();
            }
            run.item(pass, "lincomb-tree sentence " + std::to_string(si) + " " + note);
        }
    }

    // (e) primitive normal form validated semantically on n <= 4
    {
        std::vector<FormulaPtr> sentences;
        // compiled caterpillar sentences
        PebbleAlphabet a20(2, 0);
        ConstructionTree k2ct;
        LabeledGraph k2leaf(path_graph(2), a20);
        k2leaf.labels[0] = 0;
        k2leaf.labels[1] = 1;
        k2ct.root = ct_add_elim(k2ct, ct_add_elim(k2ct, ct_add_leaf(k2ct, k2leaf), 1), 0);
        k2ct.caterpillar = true;
        sentences.push_back(formula_from_construction(k2ct, 4, false));
        // handwritten nested sentence with a non-reusable quantifier
        sentences.push_back(f_count_tuple(
            2, {Var::w(1), Var::w(2)},
            f_exists(Var::x(1),
                     f_and({f_eq(Var::x(1), Var::w(2)),
                            f_exists(Var::y(1), f_and({f_eq(Var::y(1), Var::w(1)),
                                                       f_edge(Var::y(1), Var::x(1))}))}))));
        // sentence-level disjunction
        sentences.push_back(f_or({sentences[0], sentences[1]}));
        for (size_t si = 0; si < sentences.size(); ++si) {
            bool pass = true;
            std::string note;
            try {
                FormulaPtr pnf = to_primitive_normal_form(sentences[si]);
                for (const Graph& g : targets4) {
                    RelStructure s = to_structure(g);
                    if (evaluate(sentences[si], s) != evaluate(pnf, s)) {
                        pass = false;
                        note = "semantic drift on " + homlab::detail::g6(g);
                        break;
                    }
                }
            } catch (const std::exception& e) {
                pass = false;
                note = e.what();
            }
            run.item(pass, "pnf sentence " + std::to_string(si) + " " + note);
        }
    }
    return run.report;
}

// --- 10: comonad laws and the coalgebra bridge ----------------------------------

inline SuiteReport suite_comonad_laws_bridge(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "comonad-laws-bridge";
    run.report.seed = cfg.seed;
    std::mt19937_64 rng(cfg.seed);
    // 20 random structures: graphs and one ternary-relation structure flavor
    struct Instance {
        RelStructure a;
        SeqStructure::Kind kind;
        int k1, k2, bound;
    };
    std::vector<Instance> instances;
    for (int t = 0; t < 20; ++t) {
        int n = 2 + static_cast<int>(rng() % 3);
        RelStructure a;
        if (t % 5 == 4) {
            a = RelStructure(n);
            a.add_relation("T", 3);
            for (int reps = 0; reps < n; ++reps)
                a.add_tuple("T", {static_cast<int>(rng() % n), static_cast<int>(rng() % n),
                                  static_cast<int>(rng() % n)});
        } else {
            Graph g(n);
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (rng() % 2) g.add_edge(u, v);
            a = to_structure(g);
        }
        instances.push_back({a, t % 2 ? SeqStructure::Kind::PR : SeqStructure::Kind::P,
                             1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2), 2});
    }
    detail::parallel_instances(static_cast<int>(instances.size()), cfg.jobs, [&](int i) {
        auto& inst = instances[i];
        if (inst.k1 + inst.k2 < 1) inst.k1 = 1;
        // endomorphism panel
        std::vector<std::vector<int>> endos;
        std::vector<int> f(inst.a.n, 0);
        std::function<void(int)> rec = [&](int v) {
            if (endos.size() >= 6) return;
            if (v == inst.a.n) {
                for (const auto& rel : inst.a.relations)
                    for (const auto& t : rel.tuples) {
                        std::vector<int> img;
                        for (int e : t) img.push_back(f[e]);
                        if (!inst.a.has_tuple(rel.name, img)) return;
                    }
                endos.push_back(f);
                return;
            }
            for (int w = 0; w < inst.a.n; ++w) {
                f[v] = w;
                rec(v + 1);
            }
        };
        rec(0);
        auto res = check_comonad_laws(inst.a, inst.kind, inst.k1, inst.k2, inst.bound, endos);
        run.item(res.ok, "laws instance " + std::to_string(i) + " " + res.counterexample);
    });

    // bridge round trips over all graphs with <= 5 vertices
    std::vector<Graph> graphs = enumerate_graphs(5, false);
    detail::parallel_instances(static_cast<int>(graphs.size()), cfg.jobs, [&](int gi) {
        const Graph& g = graphs[gi];
        RelStructure base = to_structure(g);
        for (auto [k1, k2] : std::vector<std::pair<int, int>>{{2, 1}, {4, 1}}) {
            bool pass = true;
            std::string note;
            long long count = 0;
            const long long cap = 4000; // per graph and variant
            try {
                bool broke = false;
                long long pr_count = 0;
                for_each_linear_component_cover(g, k1, k2, [&](const ForestCover& fc) {
                    Coalgebra c = cover_to_coalgebra(fc, base, SeqStructure::Kind::PR);
                    ForestCover back = coalgebra_to_cover(c);
                    ++count;
                    if (back.parent != fc.parent || back.pebble != fc.pebble) {
                        note = "pr round trip broke";
                        broke = true;
                        return false;
                    }
                    return ++pr_count < cap;
                });
                long long tree_count = 0;
                if (!broke)
                    for_each_forest_cover(g, k1, k2, g.n, false, [&](const ForestCover& fc) {
                        Coalgebra c = cover_to_coalgebra(fc, base, SeqStructure::Kind::P);
                        ForestCover back = coalgebra_to_cover(c);
                        ++count;
                        if (back.parent != fc.parent || back.pebble != fc.pebble) {
                            note = "p round trip broke";
                            broke = true;
                            return false;
                        }
                        return ++tree_count < cap;
                    });
                pass = note.empty();
            } catch (const std::exception& e) {
                pass = false;
                note = e.what();
            }
            run.item(pass, "bridge " + detail::g6(g) + " k=(" + std::to_string(k1) + "," +
                               std::to_string(k2) + ") covers=" + std::to_string(count) + " " +
                               note);
        }
    });
    return run.report;
}

// --- 11: morphism and isomorphism power ------------------------------------------

inline SuiteReport suite_morphism_isomorphism(const SuiteConfig& cfg) {
    detail::SuiteRun run;
    run.report.name = "morphism-isomorphism-power";
    // morphism power: all ordered pairs of graphs with <= 4 vertices
    std::vector<Graph> graphs4 = enumerate_graphs(4, false);
    std::vector<std::pair<int, int>> kgrid{{1, 0}, {2, 0}, {1, 1}, {0, 2}};
    struct MInstance {
        const Graph *a, *b;
        int k1, k2, q;
    };
    std::vector<MInstance> minst;
    for (const Graph& a : graphs4)
        for (const Graph& b : graphs4)
            for (auto [k1, k2] : kgrid)
                for (int q = 1; q <= 3; ++q) minst.push_back({&a, &b, k1, k2, q});
    detail::parallel_instances(static_cast<int>(minst.size()), cfg.jobs, [&](int i) {
        auto [ga, gb, k1, k2, q] = minst[i];
        RelStructure a = to_structure(*ga), b = to_structure(*gb);
        bool game =
            solve_exists_pebble(a, b, k1, k2, q).winner == GameVerdict::Winner::duplicator;
        bool morphism = cokleisli_morphism(a, b, SeqStructure::Kind::P, k1, k2, q).exists;
        std::ostringstream w;
        w << "morphism A=" << detail::g6(*ga) << " B=" << detail::g6(*gb) << " k=(" << k1 << ","
          << k2 << ") q=" << q << " game=" << game << " cokleisli=" << morphism;
        run.item(game == morphism, w.str());
    });

    // isomorphism power: connected same-order pairs (n <= 4 over a small
    // grid, n = 5 at (2,0)), plus the golden C6 / 2C3 pair
    struct IInstance {
        Graph a, b;
        int k1, k2, q;
    };
    std::vector<IInstance> iinst;
    std::vector<Graph> conn4 = enumerate_graphs(4, true);
    for (size_t i = 0; i < conn4.size(); ++i)
        for (size_t j = i; j < conn4.size(); ++j) {
            if (conn4[i].n != conn4[j].n) continue;
            for (auto [k1, k2] : std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {0, 2}})
                for (int q = 1; q <= 3; ++q) iinst.push_back({conn4[i], conn4[j], k1, k2, q});
        }
    std::vector<Graph> conn5 = enumerate_graphs(5, true);
    for (size_t i = 0; i < conn5.size(); ++i)
        for (size_t j = i; j < conn5.size(); ++j) {
            if (conn5[i].n != 5 || conn5[j].n != 5) continue;
            for (int q = 1; q <= 3; ++q) iinst.push_back({conn5[i], conn5[j], 2, 0, q});
        }
    detail::parallel_instances(static_cast<int>(iinst.size()), cfg.jobs, [&](int i) {
        const auto& inst = iinst[i];
        bool game = solve_bijective_pebble(inst.a, inst.b, inst.k1, inst.k2, inst.q).winner ==
                    GameVerdict::Winner::duplicator;
        bool iso = cokleisli_isomorphism(to_structure(inst.a), to_structure(inst.b),
                                         SeqStructure::Kind::P, inst.k1, inst.k2, inst.q)
                       .exists;
        std::ostringstream w;
        w << "iso A=" << detail::g6(inst.a) << " B=" << detail::g6(inst.b) << " k=(" << inst.k1
          << "," << inst.k2 << ") q=" << inst.q << " game=" << game << " cokleisli=" << iso;
        run.item(game == iso, w.str());
    });

    // golden pair
    Graph c6 = cycle_graph(6);
    Graph two_c3 = cycle_graph(3).disjoint_union(cycle_graph(3));
    auto check_pair = [&](int k1, int k2, int q, bool expect_duplicator) {
        bool game = solve_bijective_pebble(c6, two_c3, k1, k2, q).winner ==
                    GameVerdict::Winner::duplicator;
        bool iso = cokleisli_isomorphism(to_structure(c6), to_structure(two_c3),
                                         SeqStructure::Kind::P, k1, k2, q)
                       .exists;
        std::ostringstream w;
        w << "golden C6/2C3 k=(" << k1 << "," << k2 << ") q=" << q << " game=" << game
          << " cokleisli=" << iso << " expected-dup=" << expect_duplicator;
        run.item(game == iso && game == expect_duplicator, w.str());
    };
    check_pair(3, 0, 3, false);
    check_pair(0, 3, 3, false);
    for (int q = 1; q <= 5; ++q) check_pair(2, 0, q, true);
    return run.report;
}

// ---------------------------------------------------------------------------
// Registry.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "characterization-path",  "characterization-tree", "nonreusable-first",
        "monotone-strategies",    "cfi-parity",            "hdc-desk",
        "spasm-sub",              "construction-dp",       "logic-roundtrip",
        "comonad-laws-bridge",    "morphism-isomorphism-power"};
    return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg = {}) {
    if (name == "characterization-path") return suite_characterization_path(cfg);
    if (name == "characterization-tree") return suite_characterization_tree(cfg);
    if (name == "nonreusable-first") return suite_nonreusable_first(cfg);
    if (name == "monotone-strategies") return suite_monotone_strategies(cfg);
    if (name == "cfi-parity") return suite_cfi_parity(cfg);
    if (name == "hdc-desk") return suite_hdc_desk(cfg);
    if (name == "spasm-sub") return suite_spasm_sub(cfg);
    if (name == "construction-dp") return suite_construction_dp(cfg);
    if (name == "logic-roundtrip") return suite_logic_roundtrip(cfg);
    if (name == "comonad-laws-bridge") return suite_comonad_laws_bridge(cfg);
    if (name == "morphism-isomorphism-power") return suite_morphism_isomorphism(cfg);
    std::string options;
    for (const auto& n : suite_names()) options += " " + n;
    throw std::invalid_argument("unknown suite '" + name + "'; available:" + options);
}

} // namespace homlab
