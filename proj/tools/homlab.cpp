// homlab: command-line surface over the laboratory. Graph and structure
// inputs are JSON files (or graph6 strings); outputs are JSON unless a
// format flag says otherwise.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "homlab/json_io.hpp"
#include "homlab/logic_translate.hpp"
#include "homlab/suites.hpp"

using namespace homlab;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

Graph load_graph(const std::string& file, const std::string& g6) {
    if (!g6.empty()) return graph_from_graph6(g6);
    if (file.empty()) throw std::runtime_error("need --graph FILE or --g6 STRING");
    return graph_from_json(load_json(file));
}

LabeledGraph load_labeled(const std::string& file, const std::string& g6, int k1, int k2) {
    if (!g6.empty()) return unlabeled(graph_from_graph6(g6), PebbleAlphabet(std::max(k1, 1), k2));
    json j = load_json(file);
    LabeledGraph lg = labeled_graph_from_json(j);
    if (k1 > lg.alphabet.k1 || k2 > lg.alphabet.k2) {
        LabeledGraph wider(lg.graph, PebbleAlphabet(std::max(k1, lg.alphabet.k1),
                                                    std::max(k2, lg.alphabet.k2)));
        for (int p = 0; p < lg.alphabet.k1; ++p) wider.labels[p] = lg.labels[p];
        for (int p = 0; p < lg.alphabet.k2; ++p)
            wider.labels[wider.alphabet.k1 + p] = lg.labels[lg.alphabet.k1 + p];
        return wider;
    }
    return lg;
}

RelStructure load_structure(const std::string& file, const std::string& g6) {
    if (!g6.empty()) return to_structure(graph_from_graph6(g6));
    json j = load_json(file);
    if (j.contains("relations")) return structure_from_json(j);
    return to_structure(graph_from_json(j));
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
}

std::string read_formula_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '(') return arg;
    std::ifstream in(arg);
    if (!in) throw std::runtime_error("cannot open formula file " + arg);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"homlab: reusability-restricted decompositions, games, "
                 "homomorphism counting and game comonads at desk scale"};
    app.require_subcommand(1);

    uint64_t seed = 12345;
    int jobs = 2;
    int budget = 8;
    app.add_option("--seed", seed, "seed for randomized suites");
    app.add_option("--jobs", jobs, "worker threads for suites");
    app.add_option("--budget", budget, "hard cap on enumeration order (default 8)");

    std::string file, g6, file_b, g6_b, out_path;
    int k1 = 1, k2 = 0, rounds = 0, nmax = 4, order = 0, twist = -1;
    bool connected = false, dot = false, as_g6 = false;

    // graphs: enumerate small graphs up to isomorphism
    auto* graphs = app.add_subcommand("graphs", "enumerate graphs up to isomorphism");
    graphs->add_option("--nmax", nmax, "maximum order (<= 8)")->required();
    graphs->add_flag("--connected", connected, "connected graphs only");
    graphs->add_flag("--g6", as_g6, "emit graph6 lines");
    graphs->add_option("--out", out_path, "output file");

    // family: membership-filtered enumeration
    auto* family = app.add_subcommand("family", "enumerate a graph class");
    std::string cls = "P";
    family->add_option("--class", cls, "P | UP | T | all")->required();
    family->add_option("--k1", k1, "reusable resources");
    family->add_option("--k2", k2, "non-reusable resources");
    family->add_option("--rounds", rounds, "round bound (class T)");
    family->add_option("--nmax", nmax, "maximum order")->required();
    family->add_flag("--connected", connected, "connected graphs only");
    family->add_flag("--g6", as_g6, "emit graph6 lines");
    family->add_option("--out", out_path, "output file");

    // hom: homomorphism counting
    auto* hom = app.add_subcommand("hom", "count homomorphisms F -> G");
    std::string file_f, g6_f;
    hom->add_option("--f", file_f, "pattern graph JSON");
    hom->add_option("--g6f", g6_f, "pattern graph6");
    hom->add_option("--g", file, "target graph JSON");
    hom->add_option("--g6", g6, "target graph6");
    hom->add_option("--k1", k1, "alphabet k1");
    hom->add_option("--k2", k2, "alphabet k2");

    // sub: subgraph counting via the spasm basis
    auto* sub = app.add_subcommand("sub", "count subgraph copies via the spasm basis");
    sub->add_option("--f", file_f, "pattern graph JSON");
    sub->add_option("--g6f", g6_f, "pattern graph6");
    sub->add_option("--g", file, "target graph JSON");
    sub->add_option("--g6", g6, "target graph6");
    bool coefficients_only = false;
    sub->add_flag("--coefficients", coefficients_only, "emit the basis and coefficients only");

    // cfi
    auto* cfi = app.add_subcommand("cfi", "build a CFI graph over a connected base");
    cfi->add_option("--graph", file, "base graph JSON");
    cfi->add_option("--g6", g6, "base graph6");
    cfi->add_option("--twist", twist, "twist vertex (omit for the even graph)");
    cfi->add_option("--out", out_path, "output file");

    // solve ns|cr
    auto* solve = app.add_subcommand("solve", "decide a pursuit game");
    std::string game_kind;
    std::string emit_strategy;
    solve->add_option("game", game_kind, "ns | cr")->required();
    solve->add_option("--graph", file, "graph JSON");
    solve->add_option("--g6", g6, "graph6");
    solve->add_option("--k1", k1, "reusable pursuers")->required();
    solve->add_option("--k2", k2, "non-reusable pursuers");
    solve->add_option("--rounds", rounds, "round bound (cr)");
    solve->add_option("--emit-strategy", emit_strategy, "write the winning strategy JSON here");

    // game exists|bp|ap|abp
    auto* game = app.add_subcommand("game", "decide a model-comparison game");
    std::string mc_kind;
    game->add_option("kind", mc_kind, "exists | bp | ap | abp")->required();
    game->add_option("--a", file, "left structure/graph JSON");
    game->add_option("--g6a", g6, "left graph6");
    game->add_option("--b", file_b, "right structure/graph JSON");
    game->add_option("--g6b", g6_b, "right graph6");
    game->add_option("--k1", k1, "reusable pebbles")->required();
    game->add_option("--k2", k2, "non-reusable pebbles");
    game->add_option("--rounds", rounds, "round bound (exists, bp)");
    game->add_option("--nmax", nmax, "sequence bound (ap, abp)");

    // logic eval|analyze|compile
    auto* logic_cmd = app.add_subcommand("logic", "formula evaluation, analysis, translation");
    std::string logic_op, formula_arg, construction_file, mode = "path";
    long long count_m = 0;
    logic_cmd->add_option("op", logic_op, "eval | analyze | compile")->required();
    logic_cmd->add_option("--formula", formula_arg, "s-expression or file (eval/analyze/compile)");
    logic_cmd->add_option("--graph", file, "graph JSON (eval)");
    logic_cmd->add_option("--g6", g6, "graph6 (eval)");
    logic_cmd->add_option("--k1", k1, "alphabet k1");
    logic_cmd->add_option("--k2", k2, "alphabet k2");
    logic_cmd->add_option("--rounds", rounds, "rank bound for analysis");
    logic_cmd->add_option("--construction", construction_file,
                          "construction tree JSON (compile graph->formula)");
    logic_cmd->add_option("--count", count_m, "target hom count m (compile graph->formula)");
    logic_cmd->add_option("--mode", mode, "path | tree");
    logic_cmd->add_option("--order", order, "target order n (tree mode)");
    logic_cmd->add_option("--out", out_path, "output file");

    // comonad build|laws|bridge|search
    auto* comonad_cmd = app.add_subcommand("comonad", "universes, laws, bridges, searches");
    std::string comonad_op, kind_str = "P", direction = "cover-to-coalgebra", cover_file;
    int bound = 2;
    bool iso_mode = false;
    comonad_cmd->add_option("op", comonad_op, "build | laws | bridge | search")->required();
    comonad_cmd->add_option("--a", file, "structure/graph JSON");
    comonad_cmd->add_option("--g6a", g6, "graph6");
    comonad_cmd->add_option("--b", file_b, "right structure (search)");
    comonad_cmd->add_option("--g6b", g6_b, "right graph6 (search)");
    comonad_cmd->add_option("--kind", kind_str, "P | PR");
    comonad_cmd->add_option("--k1", k1, "alphabet k1");
    comonad_cmd->add_option("--k2", k2, "alphabet k2");
    comonad_cmd->add_option("--length", bound, "universe bound (P: rounds, PR: length)");
    comonad_cmd->add_flag("--iso", iso_mode, "search coKleisli isomorphisms");
    comonad_cmd->add_option("--cover", cover_file, "forest cover JSON (bridge)");
    comonad_cmd->add_option("--direction", direction,
                            "bridge direction: cover-to-coalgebra | coalgebra-to-cover");
    comonad_cmd->add_option("--out", out_path, "output file");

    // convert
    auto* convert_cmd = app.add_subcommand("convert", "convert between decomposition objects");
    std::string convert_in, convert_to;
    convert_cmd->add_option("--in", convert_in, "input JSON (decomposition | cover | construction)")
        ->required();
    convert_cmd->add_option("--graph", file, "underlying graph JSON");
    convert_cmd->add_option("--g6", g6, "underlying graph6");
    convert_cmd->add_option("--to", convert_to, "decomposition | cover | construction | nice")
        ->required();
    convert_cmd->add_option("--k1", k1, "class width k1");
    convert_cmd->add_option("--k2", k2, "class width k2");
    convert_cmd->add_option("--out", out_path, "output file");

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "run a verification suite");
    std::string suite_name;
    bool list_suites = false;
    suite_cmd->add_option("name", suite_name, "suite name");
    suite_cmd->add_flag("--list", list_suites, "list available suites");

    // io: parse/emit round trip and format conversion
    auto* io_cmd = app.add_subcommand("io", "parse and re-emit objects");
    std::string io_kind = "graph";
    io_cmd->add_option("--in", file, "input file")->required();
    io_cmd->add_option("--kind", io_kind,
                       "graph | structure | decomposition | cover | construction | lincomb | "
                       "strategy | formula");
    io_cmd->add_flag("--dot", dot, "emit DOT (graph, decomposition)");
    io_cmd->add_flag("--g6", as_g6, "emit graph6 (graph)");
    io_cmd->add_option("--out", out_path, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*graphs || *family) {
            if (nmax > budget)
                throw std::runtime_error("order " + std::to_string(nmax) +
                                         " exceeds --budget " + std::to_string(budget));
            std::vector<Graph> out;
            if (*graphs) {
                out = enumerate_graphs(nmax, connected);
            } else {
                FamilySpec spec;
                spec.cls = cls == "P"    ? FamilySpec::Class::P
                           : cls == "UP" ? FamilySpec::Class::UP
                           : cls == "T"  ? FamilySpec::Class::T
                                         : FamilySpec::Class::all;
                spec.k1 = k1;
                spec.k2 = k2;
                spec.q = rounds;
                spec.n_max = nmax;
                spec.connected_only = connected;
                out = enumerate_family(spec);
            }
            std::string text;
            if (as_g6) {
                for (const Graph& g : out) text += graph_to_graph6(g) + "\n";
            } else {
                json arr = json::array();
                for (const Graph& g : out) arr.push_back(to_json(g));
                text = emit(arr);
            }
            write_output(out_path, text);
        } else if (*hom) {
            PebbleAlphabet a(std::max(k1, 1), k2);
            LabeledGraph f = load_labeled(file_f, g6_f, a.k1, a.k2);
            LabeledGraph g = load_labeled(file, g6, a.k1, a.k2);
            json j;
            j["hom"] = hom_count(f, g).to_string();
            write_output(out_path, emit(j));
        } else if (*sub) {
            Graph f = load_graph(file_f, g6_f);
            auto sc = sub_coefficients(f);
            json j;
            json basis = json::array();
            for (size_t i = 0; i < sc.basis.size(); ++i)
                basis.push_back({{"coef", sc.coef[i].to_string()}, {"graph", to_json(sc.basis[i])}});
            j["spasm"] = basis;
            if (!coefficients_only) {
                Graph g = load_graph(file, g6);
                j["sub"] = sub_count_via_hom(sc, g).to_string();
                j["sub_direct"] = sub_count_direct(f, g).to_string();
            }
            write_output(out_path, emit(j));
        } else if (*cfi) {
            Graph base = load_graph(file, g6);
            CfiGraph x = twist >= 0 ? build_cfi(base, bit(twist)) : build_cfi(base, 0);
            json j = to_json(x.graph);
            json gadgets = json::array();
            for (int v = 0; v < base.n; ++v) {
                json gj;
                gj["base_vertex"] = v;
                gj["vertices"] = x.gadget[v];
                gadgets.push_back(gj);
            }
            j["gadgets"] = gadgets;
            write_output(out_path, emit(j));
        } else if (*solve) {
            Graph g = load_graph(file, g6);
            json j;
            if (game_kind == "ns") {
                auto res = solve_ns(g, k1, k2);
                j["winner"] = res.outcome == NsOutcome::searchers_win ? "searchers" : "fugitive";
                if (res.strategy && !emit_strategy.empty())
                    write_output(emit_strategy, emit(to_json(*res.strategy)));
                if (res.strategy) j["monotone"] = is_monotone_ns(*res.strategy, g);
            } else if (game_kind == "cr") {
                if (rounds < 1) throw std::runtime_error("cr needs --rounds");
                auto res = solve_cr(g, k1, k2, rounds);
                j["winner"] = res.outcome == CrOutcome::cops_win ? "cops" : "robber";
                if (res.strategy && !emit_strategy.empty())
                    write_output(emit_strategy, emit(to_json(*res.strategy)));
                if (res.strategy) j["monotone"] = is_monotone_cr(*res.strategy, g);
            } else {
                throw std::runtime_error("unknown game " + game_kind);
            }
            write_output(out_path, emit(j));
        } else if (*game) {
            json j;
            if (mc_kind == "bp") {
                Graph a = load_graph(file, g6), b = load_graph(file_b, g6_b);
                if (rounds < 1) throw std::runtime_error("bp needs --rounds");
                auto v = solve_bijective_pebble(a, b, k1, k2, rounds);
                j["winner"] =
                    v.winner == GameVerdict::Winner::duplicator ? "duplicator" : "spoiler";
                if (v.rounds) j["rounds"] = *v.rounds;
            } else {
                RelStructure a = load_structure(file, g6), b = load_structure(file_b, g6_b);
                GameVerdict v;
                if (mc_kind == "exists")
                    v = solve_exists_pebble(a, b, k1, k2,
                                            rounds > 0 ? std::optional<int>(rounds) : std::nullopt);
                else if (mc_kind == "ap")
                    v = solve_all_in_one(a, b, k1, k2, nmax, false);
                else if (mc_kind == "abp")
                    v = solve_all_in_one(a, b, k1, k2, nmax, true);
                else
                    throw std::runtime_error("unknown game " + mc_kind);
                j["winner"] =
                    v.winner == GameVerdict::Winner::duplicator ? "duplicator" : "spoiler";
                if (v.rounds) j["rounds"] = *v.rounds;
                if (v.bounded) j["bounded_up_to"] = nmax;
                if (!v.spoiler_sequence.empty()) {
                    PebbleAlphabet alphabet(k1, k2);
                    json seq = json::array();
                    for (int z : v.spoiler_sequence) seq.push_back(alphabet.name(z));
                    j["spoiler_sequence"] = seq;
                }
            }
            write_output(out_path, emit(j));
        } else if (*logic_cmd) {
            using namespace homlab::logic;
            PebbleAlphabet alphabet(std::max(k1, 1), k2);
            json j;
            if (logic_op == "eval") {
                FormulaPtr f = parse_formula(read_formula_arg(formula_arg));
                LabeledGraph g = load_labeled(file, g6, alphabet.k1, alphabet.k2);
                j["satisfied"] = evaluate(f, g);
            } else if (logic_op == "analyze") {
                FormulaPtr f = parse_formula(read_formula_arg(formula_arg));
                auto rep = analyze(f, alphabet,
                                   rounds > 0 ? std::optional<int>(rounds) : std::nullopt);
                json req = json::array();
                for (const Var& v : rep.requantified) req.push_back(v.name());
                j["requantified"] = req;
                j["restricted_conjunctions"] = rep.restricted_conjunctions;
                j["quantifier_rank"] = rep.quantifier_rank;
                j["in_restricted_conjunction_logic"] = rep.in_land_c;
                j["in_counting_logic"] = rep.in_c;
                if (rounds > 0) j["within_rank_bound"] = rep.in_c_q;
                j["exists_positive"] = rep.exists_positive;
            } else if (logic_op == "compile") {
                if (!construction_file.empty()) {
                    ConstructionTree ct = construction_from_json(load_json(construction_file));
                    FormulaPtr f = mode == "tree"
                                       ? formula_from_construction(ct, count_m, true, order)
                                       : formula_from_construction(ct, count_m, false);
                    j["formula"] = to_sexpr(f);
                } else {
                    FormulaPtr f = parse_formula(read_formula_arg(formula_arg));
                    auto cc = mode == "tree" ? lincomb_from_formula_tree(f, alphabet, order)
                                             : lincomb_from_formula_path(f, alphabet);
                    j["lincomb"] = to_json(cc.comb);
                    j["terms_verified"] =
                        verify_certificates(cc, alphabet.k1, alphabet.k2, mode != "tree");
                }
            } else if (logic_op == "pnf") {
                FormulaPtr f = parse_formula(read_formula_arg(formula_arg));
                j["formula"] = to_sexpr(to_primitive_normal_form(f));
            } else {
                throw std::runtime_error("unknown logic op " + logic_op);
            }
            write_output(out_path, emit(j));
        } else if (*comonad_cmd) {
            SeqStructure::Kind kind =
                kind_str == "PR" ? SeqStructure::Kind::PR : SeqStructure::Kind::P;
            json j;
            if (comonad_op == "build") {
                RelStructure a = load_structure(file, g6);
                SeqStructure u = build_universe(a, kind, k1, k2, bound);
                j = to_json(materialize(u));
                j["universe_size"] = u.universe.size();
            } else if (comonad_op == "laws") {
                RelStructure a = load_structure(file, g6);
                auto res = check_comonad_laws(a, kind, k1, k2, bound, {});
                j["ok"] = res.ok;
                if (!res.ok) j["counterexample"] = res.counterexample;
            } else if (comonad_op == "bridge") {
                RelStructure a = load_structure(file, g6);
                ForestCover fc = cover_from_json(load_json(cover_file));
                Coalgebra c = cover_to_coalgebra(fc, a, kind);
                ForestCover back = coalgebra_to_cover(c);
                j["round_trip_identity"] =
                    back.parent == fc.parent && back.pebble == fc.pebble;
                json alpha = json::array();
                for (int v = 0; v < a.n; ++v) {
                    json entry;
                    entry["element"] = v;
                    json seq = json::array();
                    for (auto [z, e] : c.alpha[v].seq)
                        seq.push_back({{"pebble", c.alphabet.name(z)}, {"value", e}});
                    entry["sequence"] = seq;
                    entry["position"] = c.alpha[v].pos;
                    alpha.push_back(entry);
                }
                j["coalgebra"] = alpha;
            } else if (comonad_op == "search") {
                RelStructure a = load_structure(file, g6), b = load_structure(file_b, g6_b);
                if (iso_mode) {
                    auto res = cokleisli_isomorphism(a, b, kind, k1, k2, bound);
                    j["exists"] = res.exists;
                    if (res.bounded) j["bounded_up_to"] = bound;
                } else {
                    auto res = cokleisli_morphism(a, b, kind, k1, k2, bound);
                    j["exists"] = res.exists;
                    if (res.bounded) j["bounded_up_to"] = bound;
                }
            } else {
                throw std::runtime_error("unknown comonad op " + comonad_op);
            }
            write_output(out_path, emit(j));
        } else if (*convert_cmd) {
            json input = load_json(convert_in);
            Graph g = load_graph(file, g6);
            json j;
            if (input.contains("bags")) {
                RootedDecomposition d = decomposition_from_json(input);
                if (convert_to == "nice") j = to_json(make_nice(d, g));
                else if (convert_to == "cover") j = to_json(decomposition_to_cover(d, g, k1, k2));
                else if (convert_to == "construction")
                    j = to_json(decomposition_to_construction(d, g, k1, k2).ct);
                else j = to_json(d);
            } else if (input.contains("pebbles")) {
                ForestCover fc = cover_from_json(input);
                if (convert_to == "decomposition") j = to_json(cover_to_decomposition(fc, g));
                else throw std::runtime_error("covers convert to decompositions");
            } else if (input.contains("nodes")) {
                ConstructionTree ct = construction_from_json(input);
                if (convert_to == "decomposition")
                    j = to_json(construction_to_decomposition(ct, k1, k2));
                else throw std::runtime_error("constructions convert to decompositions");
            } else {
                throw std::runtime_error("unrecognized input object");
            }
            write_output(out_path, emit(j));
        } else if (*suite_cmd) {
            if (list_suites || suite_name.empty()) {
                for (const auto& n : suite_names()) std::cout << n << "\n";
                return 0;
            }
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.jobs = jobs;
            SuiteReport rep = run_suite(suite_name, cfg);
            std::printf("[%s] %s: %d instances, %d failures\n", rep.ok() ? "PASS" : "FAIL",
                        rep.name.c_str(), rep.instances, rep.failures);
            for (const auto& w : rep.witnesses) std::printf("  witness: %s\n", w.c_str());
            return rep.ok() ? 0 : 1;
        } else if (*io_cmd) {
            if (io_kind == "formula") {
                using namespace homlab::logic;
                std::string sexpr = read_formula_arg(file);
                write_output(out_path, to_sexpr(parse_formula(sexpr)) + "\n");
                return 0;
            }
            json input = load_json(file);
            std::string text;
            if (io_kind == "graph") {
                Graph g = graph_from_json(input);
                if (dot) text = to_dot(g);
                else if (as_g6) text = graph_to_graph6(g) + "\n";
                else text = emit(to_json(g));
            } else if (io_kind == "structure") {
                text = emit(to_json(structure_from_json(input)));
            } else if (io_kind == "decomposition") {
                RootedDecomposition d = decomposition_from_json(input);
                text = dot ? to_dot(d) : emit(to_json(d));
            } else if (io_kind == "cover") {
                text = emit(to_json(cover_from_json(input)));
            } else if (io_kind == "construction") {
                text = emit(to_json(construction_from_json(input)));
            } else if (io_kind == "lincomb") {
                text = emit(to_json(lincomb_from_json(input)));
            } else if (io_kind == "strategy") {
                if (input.at("game").get<std::string>() == "ns")
                    text = emit(to_json(ns_strategy_from_json(input)));
                else
                    text = emit(to_json(cr_strategy_from_json(input)));
            } else {
                throw std::runtime_error("unknown io kind " + io_kind);
            }
            write_output(out_path, text);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
