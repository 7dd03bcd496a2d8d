#pragma once

#include "convert.hpp"
#include "logic.hpp"

namespace homlab::logic {

// ---------------------------------------------------------------------------
// Primitive normal form.
//
// Sentences of the restricted-conjunction logic are disjunctions of tuple
// counts over non-counting bodies. The non-counting layer is normalized
// completely (quantifiers pushed through disjunctions, restricted
// conjunctions distributed, non-reusable quantifiers hoisted to the front).
// A tuple count whose body remains a disjunction after normalization needs
// the infinitary rewrite and is rejected with a diagnostic.
// ---------------------------------------------------------------------------

namespace detail {

/// Disjunctive normal form of a non-counting formula; each disjunct is
/// primitive (no disjunction, negation on atoms only).
inline std::vector<FormulaPtr> primitive_disjuncts(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::truth:
            if (f->truth_value) return {f_true()};
            return {};
        case Formula::Kind::equal:
        case Formula::Kind::rel: return {f};
        case Formula::Kind::neg: {
            if (f->child->kind == Formula::Kind::equal || f->child->kind == Formula::Kind::rel)
                return {f};
            if (f->child->kind == Formula::Kind::truth)
                return f->child->truth_value ? std::vector<FormulaPtr>{}
                                             : std::vector<FormulaPtr>{f_true()};
            throw std::invalid_argument(
                "to_primitive_normal_form: negation on a non-atomic subformula");
        }
        case Formula::Kind::disj: {
            std::vector<FormulaPtr> out;
            for (const auto& c : f->children) {
                auto ds = primitive_disjuncts(c);
                out.insert(out.end(), ds.begin(), ds.end());
            }
            return out;
        }
        case Formula::Kind::conj: {
            std::vector<std::vector<FormulaPtr>> parts;
            for (const auto& c : f->children) parts.push_back(primitive_disjuncts(c));
            std::vector<FormulaPtr> out;
            std::vector<FormulaPtr> combo(parts.size());
            std::function<void(size_t)> rec = [&](size_t i) {
                if (i == parts.size()) {
                    std::vector<FormulaPtr> conjuncts;
                    for (const auto& c : combo) {
                        if (c->kind == Formula::Kind::truth && c->truth_value) continue;
                        if (c->kind == Formula::Kind::conj)
                            conjuncts.insert(conjuncts.end(), c->children.begin(),
                                             c->children.end());
                        else conjuncts.push_back(c);
                    }
                    if (conjuncts.empty()) out.push_back(f_true());
                    else if (conjuncts.size() == 1) out.push_back(conjuncts[0]);
                    else out.push_back(f_and(conjuncts));
                    return;
                }
                for (const auto& c : parts[i]) {
                    combo[i] = c;
                    rec(i + 1);
                }
            };
            if (!parts.empty()) rec(0);
            else out.push_back(f_true());
            return out;
        }
        case Formula::Kind::exists: {
            auto ds = primitive_disjuncts(f->child);
            std::vector<FormulaPtr> out;
            for (const auto& d : ds) out.push_back(f_exists(f->bound, d));
            return out;
        }
        default:
            throw std::invalid_argument(
                "to_primitive_normal_form: counting inside a non-counting body");
    }
}

/// Hoists the non-reusable guarded quantifiers of a primitive body to the
/// front (legal because they are never requantified: no sibling mentions the
/// variable). Returns the prefix of (y, guard tally) pairs and the core.
inline void hoist_y(const FormulaPtr& f, std::vector<std::pair<Var, Var>>& prefix,
                    FormulaPtr& core) {
    if (f->kind == Formula::Kind::exists) {
        // identify the guard inside the body
        const auto& body = f->child;
        auto guard_of = [&](const FormulaPtr& g) -> std::optional<Var> {
            if (g->kind != Formula::Kind::equal) return std::nullopt;
            if (g->a == f->bound && g->b.kind == Var::Kind::w) return g->b;
            if (g->b == f->bound && g->a.kind == Var::Kind::w) return g->a;
            return std::nullopt;
        };
        if (f->bound.kind == Var::Kind::y) {
            std::optional<Var> guard;
            std::vector<FormulaPtr> rest;
            if (auto gv = guard_of(body)) {
                guard = gv;
            } else if (body->kind == Formula::Kind::conj) {
                for (const auto& c : body->children) {
                    if (!guard) {
                        if (auto gv = guard_of(c)) { guard = gv; continue; }
                    }
                    rest.push_back(c);
                }
            }
            if (guard) {
                prefix.push_back({f->bound, *guard});
                FormulaPtr inner = rest.empty()   ? f_true()
                                   : rest.size() == 1 ? rest[0]
                                                      : f_and(rest);
                hoist_y(inner, prefix, core);
                return;
            }
        }
        // reusable quantifier: hoist inside its body, keep it in place
        FormulaPtr inner_core;
        hoist_y(body, prefix, inner_core);
        core = f_exists(f->bound, inner_core);
        return;
    }
    if (f->kind == Formula::Kind::conj) {
        std::vector<FormulaPtr> cores;
        for (const auto& c : f->children) {
            FormulaPtr cc;
            hoist_y(c, prefix, cc);
            if (!(cc->kind == Formula::Kind::truth && cc->truth_value)) cores.push_back(cc);
        }
        core = cores.empty() ? f_true() : cores.size() == 1 ? cores[0] : f_and(cores);
        return;
    }
    core = f;
}

} // namespace detail

/// Prop-primitive normal form of a restricted-conjunction sentence: a
/// disjunction of tuple counts over primitive bodies whose non-reusable
/// quantifiers sit guarded at the front.
inline FormulaPtr to_primitive_normal_form(const FormulaPtr& f) {
    std::function<std::vector<FormulaPtr>(const FormulaPtr&)> sentence_layer =
        [&](const FormulaPtr& g) -> std::vector<FormulaPtr> {
        if (g->kind == Formula::Kind::disj) {
            std::vector<FormulaPtr> out;
            for (const auto& c : g->children) {
                auto ds = sentence_layer(c);
                out.insert(out.end(), ds.begin(), ds.end());
            }
            return out;
        }
        if (g->kind == Formula::Kind::count_tuple) {
            auto bodies = detail::primitive_disjuncts(g->child);
            if (bodies.empty()) {
                // the body is unsatisfiable: the count holds exactly if n = 0
                return {g->count == 0 ? f_true() : f_false()};
            }
            if (bodies.size() > 1)
                throw std::invalid_argument(
                    "to_primitive_normal_form: tuple count over a genuine disjunction is out of "
                    "scope (infinitary rewrite)");
            std::vector<std::pair<Var, Var>> prefix;
            FormulaPtr core;
            detail::hoist_y(bodies[0], prefix, core);
            std::sort(prefix.begin(), prefix.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            FormulaPtr rebuilt = core;
            for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
                FormulaPtr guard = f_eq(it->first, it->second);
                if (rebuilt->kind == Formula::Kind::truth && rebuilt->truth_value)
                    rebuilt = f_exists(it->first, guard);
                else rebuilt = f_exists(it->first, f_and({guard, rebuilt}));
            }
            return {f_count_tuple(g->count, g->tuple, rebuilt)};
        }
        // non-counting sentence (degenerate): normalize directly
        auto ds = detail::primitive_disjuncts(g);
        if (ds.empty()) return {f_false()};
        return ds;
    };
    auto disjuncts = sentence_layer(f);
    if (disjuncts.empty()) return f_false();
    if (disjuncts.size() == 1) return disjuncts[0];
    return f_or(disjuncts);
}

// ---------------------------------------------------------------------------
// Graph -> formula: phi^F_m along a construction tree.
// ---------------------------------------------------------------------------

namespace detail {

inline Var var_of_pebble(const PebbleAlphabet& a, int p) {
    return a.is_x(p) ? Var::x(p + 1) : Var::y(p - a.k1 + 1);
}

/// Atomic description of a fully labeled graph: label equalities and edges.
inline FormulaPtr leaf_formula(const LabeledGraph& leaf) {
    std::vector<FormulaPtr> conjuncts;
    std::vector<int> ls = leaf.label_set();
    for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j) {
            Var vi = var_of_pebble(leaf.alphabet, ls[i]);
            Var vj = var_of_pebble(leaf.alphabet, ls[j]);
            if (leaf.labels[ls[i]] == leaf.labels[ls[j]]) conjuncts.push_back(f_eq(vi, vj));
            else if (leaf.graph.has_edge(leaf.labels[ls[i]], leaf.labels[ls[j]]))
                conjuncts.push_back(f_edge(vi, vj));
        }
    if (conjuncts.empty()) return f_true();
    if (conjuncts.size() == 1) return conjuncts[0];
    return f_and(conjuncts);
}

} // namespace detail

/// Caterpillar mode: the restricted-conjunction formula phi^F_m with
/// free(phi) = L_F such that G |= phi^F_m iff hom(F, G) = m.
inline FormulaPtr formula_from_caterpillar(const ConstructionTree& ct, long long m) {
    if (!ct.caterpillar)
        throw std::invalid_argument("formula_from_caterpillar: construction must be a caterpillar");
    const PebbleAlphabet& alphabet = ct.nodes[ct.root].payload.alphabet;
    // number the elimination nodes root-down
    std::map<int, int> elim_index;
    int counter = 0;
    std::function<void(int)> number = [&](int t) {
        if (ct.nodes[t].tag == ConstructionTree::Node::Tag::elim) elim_index[t] = ++counter;
        for (int c : ct.nodes[t].children) number(c);
    };
    number(ct.root);
    std::function<FormulaPtr(int)> build = [&](int t) -> FormulaPtr {
        const auto& node = ct.nodes[t];
        switch (node.tag) {
            case ConstructionTree::Node::Tag::leaf: return detail::leaf_formula(node.payload);
            case ConstructionTree::Node::Tag::elim: {
                Var z = detail::var_of_pebble(alphabet, node.elim_pebble);
                Var w = Var::w(elim_index.at(t));
                FormulaPtr body = build(node.children[0]);
                if (body->kind == Formula::Kind::truth && body->truth_value)
                    return f_exists(z, f_eq(z, w));
                return f_exists(z, f_and({f_eq(z, w), body}));
            }
            case ConstructionTree::Node::Tag::product: {
                std::vector<FormulaPtr> parts;
                for (int c : node.children) parts.push_back(build(c));
                return parts.size() == 1 ? parts[0] : f_and(parts);
            }
        }
        return f_true();
    };
    FormulaPtr body = build(ct.root);
    std::vector<Var> tuple;
    for (int i = 1; i <= counter; ++i) tuple.push_back(Var::w(i));
    return f_count_tuple(m, tuple, body);
}

/// Tree mode: the bounded-rank counting formulas phi^F_m, valid on graphs
/// of order order_n. The builder computes the hom values achievable per
/// construction node on order-n graphs once (via the construction DP across
/// all adjacency masks of that order); formal decompositions at eliminations
/// then range over those values only.
class TreeFormulaBuilder {
public:
    TreeFormulaBuilder(const ConstructionTree& ct, int order_n) : ct_(ct), order_n_(order_n) {
        if (order_n < 1 || order_n > 5)
            throw std::invalid_argument("TreeFormulaBuilder: order must be in 1..5");
        compute_value_sets();
    }

    FormulaPtr formula(long long m) { return phi(ct_.root, m); }

private:
    const ConstructionTree& ct_;
    int order_n_;
    std::map<int, std::set<long long>> values_;
    std::map<std::pair<int, long long>, FormulaPtr> memo_;

    using Table = std::map<std::vector<int>, BigInt>;

    Table dp(int t, const Graph& g) {
        const auto& node = ct_.nodes[t];
        std::vector<int> ls = node.payload.label_set();
        Table table;
        if (node.tag == ConstructionTree::Node::Tag::leaf) {
            std::vector<int> assign(ls.size(), 0);
            auto rec = [&](auto&& self, size_t i) -> void {
                if (i == ls.size()) {
                    bool ok = true;
                    for (size_t x = 0; x < ls.size() && ok; ++x)
                        for (size_t y = 0; y < ls.size() && ok; ++y) {
                            int va = node.payload.labels[ls[x]];
                            int vb = node.payload.labels[ls[y]];
                            if (va == vb && assign[x] != assign[y]) ok = false;
                            if (node.payload.graph.has_edge(va, vb) &&
                                !g.has_edge(assign[x], assign[y]))
                                ok = false;
                        }
                    if (ok) table[assign] = BigInt(1);
                    return;
                }
                for (int vv = 0; vv < g.n; ++vv) {
                    assign[i] = vv;
                    self(self, i + 1);
                }
            };
            if (g.n > 0 || ls.empty()) rec(rec, 0);
        } else if (node.tag == ConstructionTree::Node::Tag::elim) {
            Table child = dp(node.children[0], g);
            std::vector<int> cls = ct_.nodes[node.children[0]].payload.label_set();
            size_t drop = std::find(cls.begin(), cls.end(), node.elim_pebble) - cls.begin();
            for (const auto& [akey, val] : child) {
                std::vector<int> key = akey;
                key.erase(key.begin() + drop);
                auto it = table.find(key);
                if (it == table.end()) table[key] = val;
                else it->second += val;
            }
        } else {
            std::vector<Table> childs;
            std::vector<std::vector<int>> child_ls;
            for (int c : node.children) {
                childs.push_back(dp(c, g));
                child_ls.push_back(ct_.nodes[c].payload.label_set());
            }
            auto combine = [&](const std::vector<int>& assign) {
                BigInt prod(1);
                for (size_t c = 0; c < childs.size() && !prod.is_zero(); ++c) {
                    std::vector<int> key;
                    for (int p : child_ls[c]) {
                        size_t idx = std::find(ls.begin(), ls.end(), p) - ls.begin();
                        key.push_back(assign[idx]);
                    }
                    auto it = childs[c].find(key);
                    prod = it == childs[c].end() ? BigInt(0) : prod * it->second;
                }
                return prod;
            };
            std::vector<int> assign(ls.size(), 0);
            auto rec = [&](auto&& self, size_t i) -> void {
                if (i == ls.size()) {
                    BigInt prod = combine(assign);
                    if (!prod.is_zero()) table[assign] = prod;
                    return;
                }
                for (int vv = 0; vv < g.n; ++vv) {
                    assign[i] = vv;
                    self(self, i + 1);
                }
            };
            if (ls.empty()) {
                BigInt prod = combine({});
                if (!prod.is_zero()) table[{}] = prod;
            } else {
                rec(rec, 0);
            }
        }
        for (const auto& [akey, val] : table) values_[t].insert(val.to_ll());
        return table;
    }

    void compute_value_sets() {
        for (int v = 0; v < static_cast<int>(ct_.nodes.size()); ++v) values_[v] = {0};
        int bits = order_n_ * (order_n_ - 1) / 2;
        for (int mask = 0; mask < (1 << bits); ++mask) {
            Graph g(order_n_);
            int b = 0;
            for (int u = 0; u < order_n_; ++u)
                for (int w = u + 1; w < order_n_; ++w, ++b)
                    if ((mask >> b) & 1) g.add_edge(u, w);
            dp(ct_.root, g);
        }
    }

    FormulaPtr phi(int t, long long target) {
        auto key = std::make_pair(t, target);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const auto& node = ct_.nodes[t];
        const PebbleAlphabet& alphabet = ct_.nodes[ct_.root].payload.alphabet;
        FormulaPtr out;
        if (!values_.at(t).count(target)) {
            out = f_false();
        } else if (node.tag == ConstructionTree::Node::Tag::leaf) {
            if (target > 1) out = f_false();
            else if (target == 1) out = detail::leaf_formula(node.payload);
            else out = f_not(detail::leaf_formula(node.payload));
        } else if (node.tag == ConstructionTree::Node::Tag::elim) {
            Var z = detail::var_of_pebble(alphabet, node.elim_pebble);
            int s = node.children[0];
            if (target == 0) {
                out = f_forall(z, phi(s, 0));
            } else {
                // formal decompositions: sum c_i * m_i = target over distinct
                // achievable positive child values, at most order_n placements
                std::vector<long long> vals;
                for (long long v : values_.at(s))
                    if (v > 0 && v <= target) vals.push_back(v);
                std::sort(vals.rbegin(), vals.rend());
                std::vector<FormulaPtr> disjuncts;
                std::vector<std::pair<long long, long long>> parts;
                std::function<void(size_t, long long, long long)> rec =
                    [&](size_t i, long long left, long long budget) {
                        if (left == 0) {
                            long long total = 0;
                            std::vector<FormulaPtr> conj;
                            for (auto [v, c] : parts) {
                                total += c;
                                conj.push_back(f_count_eq(c, z, phi(s, v)));
                            }
                            conj.insert(conj.begin(), f_count_eq(total, z, f_not(phi(s, 0))));
                            disjuncts.push_back(conj.size() == 1 ? conj[0] : f_and(conj));
                            return;
                        }
                        if (i == vals.size() || budget == 0) return;
                        long long v = vals[i];
                        rec(i + 1, left, budget);
                        for (long long c = 1; c <= budget && c * v <= left; ++c) {
                            parts.push_back({v, c});
                            rec(i + 1, left - c * v, budget - c);
                            parts.pop_back();
                        }
                    };
                rec(0, target, order_n_);
                if (disjuncts.empty()) out = f_false();
                else if (disjuncts.size() == 1) out = disjuncts[0];
                else out = f_or(disjuncts);
            }
        } else {
            // product node (possibly n-ary, folded left to right)
            std::function<FormulaPtr(size_t, long long)> fold = [&](size_t i,
                                                                    long long want) -> FormulaPtr {
                if (i + 1 == node.children.size()) return phi(node.children[i], want);
                std::vector<FormulaPtr> disjuncts;
                if (want == 0) {
                    disjuncts.push_back(phi(node.children[i], 0));
                    FormulaPtr rest0 = fold(i + 1, 0);
                    if (!(rest0->kind == Formula::Kind::truth && !rest0->truth_value))
                        disjuncts.push_back(rest0);
                } else {
                    for (long long v : values_.at(node.children[i])) {
                        if (v <= 0 || want % v != 0) continue;
                        FormulaPtr left = phi(node.children[i], v);
                        if (left->kind == Formula::Kind::truth && !left->truth_value) continue;
                        FormulaPtr right = fold(i + 1, want / v);
                        if (right->kind == Formula::Kind::truth && !right->truth_value) continue;
                        disjuncts.push_back(f_and({left, right}));
                    }
                }
                if (disjuncts.empty()) return f_false();
                if (disjuncts.size() == 1) return disjuncts[0];
                return f_or(disjuncts);
            };
            out = fold(0, target);
        }
        memo_[key] = out;
        return out;
    }
};

inline FormulaPtr formula_from_tree(const ConstructionTree& ct, long long m, int order_n) {
    TreeFormulaBuilder builder(ct, order_n);
    return builder.formula(m);
}

/// Dispatcher matching the two translation lemmas: caterpillars give
/// restricted-conjunction formulas, general trees bounded-rank counting
/// formulas relative to an evaluation order.
inline FormulaPtr formula_from_construction(const ConstructionTree& ct, long long m,
                                            bool bounded_rank_mode, int order_n = 0) {
    if (bounded_rank_mode) {
        if (order_n <= 0)
            throw std::invalid_argument("formula_from_construction: tree mode needs the order");
        return formula_from_tree(ct, m, order_n);
    }
    return formula_from_caterpillar(ct, m);
}

// ---------------------------------------------------------------------------
// Formula -> linear combination.
// ---------------------------------------------------------------------------

/// A combination whose terms carry construction-tree certificates.
struct CertifiedComb {
    LinComb comb;
    std::vector<ConstructionTree> certificates; // aligned with comb.terms
};

namespace detail {

/// Merge two construction trees into one node pool; returns the new roots.
inline std::pair<int, int> ct_merge(ConstructionTree& into, const ConstructionTree& a,
                                    const ConstructionTree& b) {
    int offset_a = static_cast<int>(into.nodes.size());
    for (auto node : a.nodes) {
        for (int& c : node.children) c += offset_a;
        into.nodes.push_back(std::move(node));
    }
    int offset_b = static_cast<int>(into.nodes.size());
    for (auto node : b.nodes) {
        for (int& c : node.children) c += offset_b;
        into.nodes.push_back(std::move(node));
    }
    return {a.root + offset_a, b.root + offset_b};
}

inline ConstructionTree ct_single_leaf(LabeledGraph g) {
    ConstructionTree ct;
    ct.root = ct_add_leaf(ct, std::move(g));
    ct.caterpillar = true;
    return ct;
}

inline ConstructionTree ct_product_of(const ConstructionTree& a, const ConstructionTree& b) {
    ConstructionTree out;
    auto [ra, rb] = ct_merge(out, a, b);
    bool leaf_side = out.nodes[ra].tag == ConstructionTree::Node::Tag::leaf ||
                     out.nodes[rb].tag == ConstructionTree::Node::Tag::leaf;
    out.root = ct_add_product(out, {ra, rb});
    out.caterpillar = a.caterpillar && b.caterpillar && leaf_side;
    return out;
}

/// Adds a certified term, merging label-isomorphic graphs and dropping
/// cancelled ones together with their certificates.
inline void cc_add(CertifiedComb& out, const Rational& coef, const LabeledGraph& g,
                   ConstructionTree ct) {
    if (coef.is_zero()) return;
    for (size_t i = 0; i < out.comb.terms.size(); ++i) {
        auto& t = out.comb.terms[i];
        if (terms_mergeable(t.graph, g)) {
            t.coef += coef;
            if (t.coef.is_zero()) {
                out.comb.terms.erase(out.comb.terms.begin() + static_cast<long>(i));
                out.certificates.erase(out.certificates.begin() + static_cast<long>(i));
            }
            return;
        }
    }
    out.comb.terms.push_back({coef, g});
    out.certificates.push_back(std::move(ct));
}

inline ConstructionTree ct_eliminate(const ConstructionTree& a, int pebble) {
    ConstructionTree out = a;
    out.root = ct_add_elim(out, out.root, pebble);
    return out;
}

inline CertifiedComb certified_product(const CertifiedComb& a, const CertifiedComb& b) {
    CertifiedComb out;
    for (size_t i = 0; i < a.comb.terms.size(); ++i)
        for (size_t j = 0; j < b.comb.terms.size(); ++j) {
            if (product_with_maps(a.comb.terms[i].graph, b.comb.terms[j].graph).loop_created)
                continue; // jointly unsatisfiable pair
            ConstructionTree ct = ct_product_of(a.certificates[i], b.certificates[j]);
            LabeledGraph g = ct.target();
            cc_add(out, a.comb.terms[i].coef * b.comb.terms[j].coef, g, std::move(ct));
        }
    return out;
}

inline CertifiedComb certified_plus(const CertifiedComb& a, const CertifiedComb& b) {
    CertifiedComb out = a;
    for (size_t j = 0; j < b.comb.terms.size(); ++j)
        cc_add(out, b.comb.terms[j].coef, b.comb.terms[j].graph, b.certificates[j]);
    return out;
}

inline CertifiedComb certified_scale(const Rational& c, const CertifiedComb& a) {
    CertifiedComb out;
    if (c.is_zero()) return out;
    out.comb = c * a.comb;
    out.certificates = a.certificates;
    return out;
}

inline CertifiedComb certified_indicator(const PebbleAlphabet& alphabet,
                                         const std::vector<int>& labels) {
    CertifiedComb out;
    LabeledGraph ind = indicator_graph(alphabet, labels);
    out.comb.add_term(Rational(1), ind);
    out.certificates.push_back(ct_single_leaf(ind));
    return out;
}

/// Every term gains the label z (product with a z-labeled vertex), then the
/// label is deleted: realizes the guarded-quantifier sum uniformly.
inline CertifiedComb certified_project(const CertifiedComb& a, const PebbleAlphabet& alphabet,
                                       int pebble) {
    CertifiedComb ensure;
    LabeledGraph zdot(Graph(1), alphabet);
    zdot.labels[pebble] = 0;
    ensure.comb.add_term(Rational(1), zdot);
    ensure.certificates.push_back(ct_single_leaf(zdot));
    CertifiedComb prod = certified_product(a, ensure);
    CertifiedComb out;
    for (size_t i = 0; i < prod.comb.terms.size(); ++i) {
        ConstructionTree ct = ct_eliminate(prod.certificates[i], pebble);
        LabeledGraph g = ct.target();
        cc_add(out, prod.comb.terms[i].coef, g, std::move(ct));
    }
    return out;
}

/// Interpolation on a certified combination: powers become products of the
/// certified terms.
inline CertifiedComb certified_interpolate(const CertifiedComb& f, const PebbleAlphabet& alphabet,
                                           const std::vector<Rational>& s_minus,
                                           const std::vector<Rational>& s_plus) {
    for (const auto& x : s_minus)
        for (const auto& y : s_plus)
            if (x == y) throw std::invalid_argument("interpolate: S- and S+ overlap");
    std::vector<std::pair<Rational, Rational>> points;
    for (const auto& x : s_minus) points.push_back({x, Rational(0)});
    for (const auto& y : s_plus) points.push_back({y, Rational(1)});
    if (points.empty()) return CertifiedComb{};
    std::vector<Rational> poly(points.size(), Rational(0));
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].second.is_zero()) continue;
        std::vector<Rational> basis{Rational(1)};
        Rational denom(1);
        for (size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            std::vector<Rational> next(basis.size() + 1, Rational(0));
            for (size_t d = 0; d < basis.size(); ++d) {
                next[d + 1] += basis[d];
                next[d] -= basis[d] * points[j].first;
            }
            basis = std::move(next);
            denom *= points[i].first - points[j].first;
        }
        for (size_t d = 0; d < basis.size(); ++d)
            poly[d] += points[i].second * basis[d] / denom;
    }
    CertifiedComb power = certified_indicator(alphabet, f.comb.label_set());
    CertifiedComb out;
    for (size_t d = 0; d < poly.size(); ++d) {
        if (!poly[d].is_zero()) out = certified_plus(out, certified_scale(poly[d], power));
        if (d + 1 < poly.size()) power = certified_product(power, f);
    }
    return out;
}

} // namespace detail

/// Path mode: the combination F_psi over linearly constructible labeled
/// graphs whose hom value counts the satisfying tally tuples of a primitive
/// non-counting formula (the 0/1 truth value for sentences).
inline CertifiedComb lincomb_from_formula_path(const FormulaPtr& f,
                                               const PebbleAlphabet& alphabet) {
    auto disjuncts = detail::primitive_disjuncts(f);
    if (disjuncts.empty()) return CertifiedComb{}; // unsatisfiable: empty combination
    if (disjuncts.size() > 1)
        throw std::invalid_argument(
            "lincomb_from_formula: body must normalize to a single primitive");
    std::function<CertifiedComb(const FormulaPtr&)> build =
        [&](const FormulaPtr& g) -> CertifiedComb {
        switch (g->kind) {
            case Formula::Kind::truth: {
                if (!g->truth_value) return CertifiedComb{};
                return detail::certified_indicator(alphabet, {});
            }
            case Formula::Kind::equal: {
                if (!g->a.is_pebble() || !g->b.is_pebble())
                    throw std::invalid_argument("lincomb_from_formula: equality on tally variables");
                LabeledGraph dot(Graph(1), alphabet);
                dot.labels[g->a.pebble_id(alphabet)] = 0;
                dot.labels[g->b.pebble_id(alphabet)] = 0;
                CertifiedComb out;
                out.comb.add_term(Rational(1), dot);
                out.certificates.push_back(detail::ct_single_leaf(dot));
                return out;
            }
            case Formula::Kind::rel: {
                if (g->rel_name != "E" || g->rel_args.size() != 2)
                    throw std::invalid_argument("lincomb_from_formula: graphs have relation E only");
                int pa = g->rel_args[0].pebble_id(alphabet);
                int pb = g->rel_args[1].pebble_id(alphabet);
                if (pa == pb) return CertifiedComb{}; // E(z,z) never holds
                LabeledGraph edge(path_graph(2), alphabet);
                edge.labels[pa] = 0;
                edge.labels[pb] = 1;
                CertifiedComb out;
                out.comb.add_term(Rational(1), edge);
                out.certificates.push_back(detail::ct_single_leaf(edge));
                return out;
            }
            case Formula::Kind::neg: {
                CertifiedComb inner = build(g->child);
                CertifiedComb ind = detail::certified_indicator(
                    alphabet, inner.comb.terms.empty()
                                  ? [&] {
                                        std::vector<int> ls;
                                        for (const Var& v : free_vars(g->child))
                                            if (v.is_pebble())
                                                ls.push_back(v.pebble_id(alphabet));
                                        return ls;
                                    }()
                                  : inner.comb.label_set());
                return detail::certified_plus(ind,
                                              detail::certified_scale(Rational(-1), inner));
            }
            case Formula::Kind::conj: {
                CertifiedComb acc = detail::certified_indicator(alphabet, {});
                for (const auto& c : g->children) acc = detail::certified_product(acc, build(c));
                return acc;
            }
            case Formula::Kind::exists: {
                // guarded quantifier: drop the guard, project the label out
                const auto& body = g->child;
                auto is_guard = [&](const FormulaPtr& h) {
                    return h->kind == Formula::Kind::equal &&
                           ((h->a == g->bound && h->b.kind == Var::Kind::w) ||
                            (h->b == g->bound && h->a.kind == Var::Kind::w));
                };
                FormulaPtr stripped;
                if (is_guard(body)) stripped = f_true();
                else if (body->kind == Formula::Kind::conj) {
                    std::vector<FormulaPtr> rest;
                    bool found = false;
                    for (const auto& c : body->children) {
                        if (!found && is_guard(c)) { found = true; continue; }
                        rest.push_back(c);
                    }
                    if (!found)
                        throw std::invalid_argument(
                            "lincomb_from_formula: unguarded quantifier in path mode");
                    stripped = rest.empty()   ? f_true()
                               : rest.size() == 1 ? rest[0]
                                                  : f_and(rest);
                } else {
                    throw std::invalid_argument(
                        "lincomb_from_formula: unguarded quantifier in path mode");
                }
                CertifiedComb inner = build(stripped);
                return detail::certified_project(inner, alphabet,
                                                 g->bound.pebble_id(alphabet));
            }
            default:
                throw std::invalid_argument("lincomb_from_formula: not a primitive body");
        }
    };
    return build(disjuncts[0]);
}

/// Tree mode: a combination over (k1,k2,q)-constructible graphs modeling the
/// bounded-rank sentence for graphs of order n (interpolation realizes the
/// boolean structure).
inline CertifiedComb lincomb_from_formula_tree(const FormulaPtr& f, const PebbleAlphabet& alphabet,
                                               int n) {
    if (n < 0) throw std::invalid_argument("lincomb_from_formula: order must be >= 0");
    std::function<CertifiedComb(const FormulaPtr&)> build =
        [&](const FormulaPtr& g) -> CertifiedComb {
        switch (g->kind) {
            case Formula::Kind::truth:
                if (!g->truth_value) return CertifiedComb{};
                return detail::certified_indicator(alphabet, {});
            case Formula::Kind::equal: {
                LabeledGraph dot(Graph(1), alphabet);
                dot.labels[g->a.pebble_id(alphabet)] = 0;
                dot.labels[g->b.pebble_id(alphabet)] = 0;
                CertifiedComb out;
                out.comb.add_term(Rational(1), dot);
                out.certificates.push_back(detail::ct_single_leaf(dot));
                return out;
            }
            case Formula::Kind::rel: {
                if (g->rel_name != "E" || g->rel_args.size() != 2)
                    throw std::invalid_argument("lincomb_from_formula: graphs have relation E only");
                int pa = g->rel_args[0].pebble_id(alphabet);
                int pb = g->rel_args[1].pebble_id(alphabet);
                if (pa == pb) return CertifiedComb{};
                LabeledGraph edge(path_graph(2), alphabet);
                edge.labels[pa] = 0;
                edge.labels[pb] = 1;
                CertifiedComb out;
                out.comb.add_term(Rational(1), edge);
                out.certificates.push_back(detail::ct_single_leaf(edge));
                return out;
            }
            case Formula::Kind::neg: {
                CertifiedComb inner = build(g->child);
                return detail::certified_interpolate(inner, alphabet, {Rational(1)},
                                                     {Rational(0)});
            }
            case Formula::Kind::disj: {
                CertifiedComb sum;
                for (const auto& c : g->children) sum = detail::certified_plus(sum, build(c));
                std::vector<Rational> plus;
                for (size_t i = 1; i <= g->children.size(); ++i)
                    plus.push_back(Rational(static_cast<long long>(i)));
                return detail::certified_interpolate(sum, alphabet, {Rational(0)}, plus);
            }
            case Formula::Kind::conj: {
                CertifiedComb acc = detail::certified_indicator(alphabet, {});
                for (const auto& c : g->children) acc = detail::certified_product(acc, build(c));
                return acc;
            }
            case Formula::Kind::exists:
            case Formula::Kind::count_ge: {
                long long t = g->kind == Formula::Kind::exists ? 1 : g->count;
                CertifiedComb inner = build(g->child);
                CertifiedComb projected =
                    detail::certified_project(inner, alphabet, g->bound.pebble_id(alphabet));
                std::vector<Rational> minus, plus;
                for (long long v = 0; v < t; ++v) minus.push_back(Rational(v));
                for (long long v = t; v <= n; ++v) plus.push_back(Rational(v));
                if (plus.empty()) return CertifiedComb{}; // threshold above the order: never holds
                return detail::certified_interpolate(projected, alphabet, minus, plus);
            }
            case Formula::Kind::count_tuple:
                throw std::invalid_argument(
                    "lincomb_from_formula: tuple counting is not part of the bounded-rank logic");
        }
        return CertifiedComb{};
    };
    return build(f);
}

// ---------------------------------------------------------------------------
// Atomic-type formulas from all-in-one transcripts.
// ---------------------------------------------------------------------------

/// The guarded atomic-type formula of a placement transcript: after each
/// placement the formula pins the literal diagram of the active pairing
/// (edges, non-edges, equalities, inequalities over the pinned pebbles).
/// Free variables are the tally variables w_1..w_n guarding the steps.
inline FormulaPtr tp_formula(const PebbleAlphabet& alphabet, const std::vector<int>& pebbles,
                             const std::vector<int>& placements, const Graph& host) {
    if (pebbles.size() != placements.size())
        throw std::invalid_argument("tp_formula: transcript lengths differ");
    int n = static_cast<int>(pebbles.size());
    // active pairing after step i: pebble -> host vertex (last placement wins)
    auto build = [&](auto&& self, int i) -> FormulaPtr {
        if (i == n) return f_true();
        std::map<int, int> active;
        for (int j = 0; j <= i; ++j) active[pebbles[j]] = placements[j];
        std::vector<FormulaPtr> conj;
        conj.push_back(f_eq(detail::var_of_pebble(alphabet, pebbles[i]), Var::w(i + 1)));
        for (auto it = active.begin(); it != active.end(); ++it)
            for (auto jt = std::next(it); jt != active.end(); ++jt) {
                Var zi = detail::var_of_pebble(alphabet, it->first);
                Var zj = detail::var_of_pebble(alphabet, jt->first);
                if (it->second == jt->second) conj.push_back(f_eq(zi, zj));
                else conj.push_back(f_not(f_eq(zi, zj)));
                if (host.has_edge(it->second, jt->second)) conj.push_back(f_edge(zi, zj));
                else if (it->second != jt->second) conj.push_back(f_not(f_edge(zi, zj)));
            }
        FormulaPtr rest = self(self, i + 1);
        if (!(rest->kind == Formula::Kind::truth && rest->truth_value)) conj.push_back(rest);
        return f_exists(detail::var_of_pebble(alphabet, pebbles[i]),
                        conj.size() == 1 ? conj[0] : f_and(conj));
    };
    return build(build, 0);
}

/// Compiles an all-in-one spoiler witness (the committed pebble sequence)
/// into a restricted-conjunction counting sentence separating the two
/// graphs: some placement tuple's atomic type is realized a different number
/// of times. Returns nothing only if no type count differs, which a genuine
/// witness never produces.
inline std::optional<FormulaPtr> distinguishing_sentence_from_witness(
    const Graph& a, const Graph& b, const PebbleAlphabet& alphabet,
    const std::vector<int>& witness) {
    int n = static_cast<int>(witness.size());
    RelStructure sa = to_structure(a), sb = to_structure(b);
    std::vector<Var> tuple;
    for (int i = 1; i <= n; ++i) tuple.push_back(Var::w(i));
    std::vector<int> placements(n, 0);
    std::function<std::optional<FormulaPtr>(int)> scan = [&](int i) -> std::optional<FormulaPtr> {
        if (i == n) {
            FormulaPtr tp = tp_formula(alphabet, witness, placements, a);
            // count realizations of the type on both sides
            auto count_in = [&](const RelStructure& s, int order) {
                long long c = 0;
                std::vector<int> w(n, 0);
                std::function<void(int)> rec = [&](int j) {
                    if (j == n) {
                        Assignment tally;
                        for (int t = 0; t < n; ++t) tally[Var::w(t + 1)] = w[t];
                        if (evaluate(tp, s, tally)) ++c;
                        return;
                    }
                    for (int v = 0; v < order; ++v) {
                        w[j] = v;
                        rec(j + 1);
                    }
                };
                rec(0);
                return c;
            };
            long long ca = count_in(sa, a.n);
            long long cb = count_in(sb, b.n);
            if (ca != cb) return f_count_tuple(ca, tuple, tp);
            return std::nullopt;
        }
        for (int v = 0; v < a.n; ++v) {
            placements[i] = v;
            if (auto found = scan(i + 1)) return found;
        }
        return std::nullopt;
    };
    return scan(0);
}

/// Verifies every term of a certified combination against the construction
/// verifier; caterpillar certificates additionally carry the flag.
inline bool verify_certificates(const CertifiedComb& cc, int k1, int k2, bool caterpillar) {
    if (cc.comb.terms.size() != cc.certificates.size()) return false;
    for (size_t i = 0; i < cc.comb.terms.size(); ++i) {
        ConstructionTree ct = cc.certificates[i];
        ct.caterpillar = caterpillar && ct.caterpillar;
        if (caterpillar && !ct.caterpillar) return false;
        auto check = verify_construction_tree(ct, &cc.comb.terms[i].graph, k1, k2);
        if (!check.ok) return false;
    }
    return true;
}

} // namespace homlab::logic
