#pragma once

#include <map>
#include <set>

#include "bigint.hpp"
#include "graph.hpp"

namespace homlab {

namespace detail {

/// Counts maps component -> g extending the pinned assignments, where
/// `comp` lists the vertices of one connected piece of f (pins included).
/// Backtracking in a max-adjacent-to-assigned order with bitset pruning.
inline long long count_component_homs(const Graph& f, const Graph& g,
                                      const std::vector<int>& comp,
                                      const std::vector<int>& pin) {
    std::vector<int> order;
    std::vector<bool> in_order(f.n, false);
    for (int v : comp)
        if (pin[v] != kNoVertex) { order.push_back(v); in_order[v] = true; }
    while (order.size() < comp.size()) {
        int best = -1, best_adj = -1, best_deg = -1;
        for (int v : comp) {
            if (in_order[v]) continue;
            int adjc = 0;
            for (int u : order)
                if (f.has_edge(u, v)) ++adjc;
            if (adjc > best_adj || (adjc == best_adj && f.degree(v) > best_deg)) {
                best = v; best_adj = adjc; best_deg = f.degree(v);
            }
        }
        order.push_back(best);
        in_order[best] = true;
    }
    std::vector<int> img(f.n, kNoVertex);
    for (int v : comp) img[v] = pin[v];
    // pins must respect edges among themselves
    for (int u : comp)
        for (int v : comp)
            if (u < v && img[u] != kNoVertex && img[v] != kNoVertex &&
                f.has_edge(u, v) && !g.has_edge(img[u], img[v]))
                return 0;
    size_t first_free = 0;
    while (first_free < order.size() && img[order[first_free]] != kNoVertex) ++first_free;

    long long count = 0;
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == order.size()) { ++count; return; }
        int v = order[i];
        VertexSet candidates = g.all_vertices();
        for (int u : comp)
            if (img[u] != kNoVertex && f.has_edge(u, v)) candidates &= g.adj[img[u]];
        while (candidates) {
            int w = lowest_bit(candidates);
            candidates &= candidates - 1;
            img[v] = w;
            self(self, i + 1);
            img[v] = kNoVertex;
        }
    };
    rec(rec, first_free);
    return count;
}

} // namespace detail

/// hom(F, G) for labeled graphs: maps V(F) -> V(G) preserving edges and
/// sending each label of F to the same label's vertex in G.
/// Throws if F carries a label that G does not.
inline BigInt hom_count(const LabeledGraph& f, const LabeledGraph& g) {
    if (f.alphabet.size() != g.alphabet.size())
        throw std::invalid_argument("hom_count: alphabets differ");
    std::vector<int> pin(f.graph.n, kNoVertex);
    for (int p = 0; p < f.alphabet.size(); ++p) {
        if (f.labels[p] == kNoVertex) continue;
        if (g.labels[p] == kNoVertex)
            throw std::invalid_argument("hom_count: label of F missing in G");
        int v = f.labels[p], w = g.labels[p];
        if (pin[v] != kNoVertex && pin[v] != w) return BigInt(0);
        pin[v] = w;
    }
    if (f.graph.n > 0 && g.graph.n == 0) return BigInt(0);
    BigInt total(1);
    for (VertexSet cs : f.graph.components()) {
        std::vector<int> comp;
        for (int v = 0; v < f.graph.n; ++v)
            if (cs & bit(v)) comp.push_back(v);
        long long c = detail::count_component_homs(f.graph, g.graph, comp, pin);
        total *= BigInt(c);
        if (total.is_zero()) return total;
    }
    return total;
}

inline BigInt hom_count(const Graph& f, const Graph& g) {
    PebbleAlphabet a(1, 0);
    return hom_count(unlabeled(f, a), unlabeled(g, a));
}

// --- linear combinations -----------------------------------------------------

/// Best-effort merge test for combination terms: cheap invariants first,
/// isomorphism only on small graphs. Failing to merge is harmless (the
/// combination stays correct, just longer), so large terms merge only on
/// exact equality.
inline bool terms_mergeable(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.alphabet.size() != b.alphabet.size() || a.labels != b.labels) return false;
    if (a.graph.n != b.graph.n || a.graph.edge_count() != b.graph.edge_count()) return false;
    if (a.graph == b.graph) return true;
    auto degs = [](const Graph& g) {
        std::vector<int> d;
        for (int v = 0; v < g.n; ++v) d.push_back(g.degree(v));
        std::sort(d.begin(), d.end());
        return d;
    };
    if (degs(a.graph) != degs(b.graph)) return false;
    if (a.graph.n > 16) return false;
    return labeled_isomorphic(a, b);
}

/// Formal finite linear combination of labeled graphs with rational
/// coefficients. Zero-coefficient terms are dropped on construction.
struct LinComb {
    struct Term {
        Rational coef;
        LabeledGraph graph;
    };
    std::vector<Term> terms;

    LinComb() = default;

    void add_term(Rational c, LabeledGraph g) {
        if (c.is_zero()) return;
        for (auto& t : terms) {
            if (terms_mergeable(t.graph, g)) {
                t.coef += c;
                if (t.coef.is_zero())
                    terms.erase(terms.begin() + (&t - terms.data()));
                return;
            }
        }
        terms.push_back({std::move(c), std::move(g)});
    }

    std::vector<int> label_set() const {
        std::set<int> s;
        for (const auto& t : terms)
            for (int p : t.graph.label_set()) s.insert(p);
        return std::vector<int>(s.begin(), s.end());
    }

    friend LinComb operator+(const LinComb& a, const LinComb& b) {
        LinComb r = a;
        for (const auto& t : b.terms) r.add_term(t.coef, t.graph);
        return r;
    }
    friend LinComb operator*(const Rational& c, const LinComb& a) {
        LinComb r;
        for (const auto& t : a.terms) r.add_term(c * t.coef, t.graph);
        return r;
    }
    /// Pairwise products of the terms (graph product, coefficient product).
    /// Pairs whose identification collapses an edge are jointly
    /// unsatisfiable as hom-counting terms and vanish.
    friend LinComb operator*(const LinComb& a, const LinComb& b) {
        LinComb r;
        for (const auto& s : a.terms)
            for (const auto& t : b.terms) {
                ProductResult pr = product_with_maps(s.graph, t.graph);
                if (pr.loop_created) continue;
                r.add_term(s.coef * t.coef, pr.graph);
            }
        return r;
    }
};

inline Rational hom_lincomb(const LinComb& lc, const LabeledGraph& g) {
    Rational sum;
    for (const auto& t : lc.terms) sum += t.coef * Rational(hom_count(t.graph, g));
    return sum;
}

/// The graph I_L with hom(I_L, .) == 1: one vertex per label in L, no edges.
inline LabeledGraph indicator_graph(const PebbleAlphabet& a, const std::vector<int>& label_list) {
    LabeledGraph g(Graph(static_cast<int>(label_list.size())), a);
    for (size_t i = 0; i < label_list.size(); ++i) g.labels[label_list[i]] = static_cast<int>(i);
    return g;
}

/// f^j: j-fold product of f with itself (labels shared); f^0 is the
/// fully-labeled vertex-only graph on im(nu_f), the empty graph if unlabeled.
inline LabeledGraph graph_power(const LabeledGraph& f, int j) {
    if (j == 0) {
        // one vertex per labeled vertex of f, carrying the same labels
        std::vector<int> lv;
        for (int v = 0; v < f.graph.n; ++v)
            if (f.labeled_vertices() & bit(v)) lv.push_back(v);
        LabeledGraph g(Graph(static_cast<int>(lv.size())), f.alphabet);
        for (int p = 0; p < f.alphabet.size(); ++p) {
            if (f.labels[p] == kNoVertex) continue;
            auto it = std::find(lv.begin(), lv.end(), f.labels[p]);
            g.labels[p] = static_cast<int>(it - lv.begin());
        }
        return g;
    }
    LabeledGraph acc = f;
    for (int i = 1; i < j; ++i) acc = product(acc, f);
    return acc;
}

/// Lagrange interpolation through S- (value 0) and S+ (value 1), realized as
/// a combination of label-preserving powers of f with
/// hom(f^j, G) = hom(f, G)^j.
inline LinComb interpolate(const LabeledGraph& f, const std::vector<Rational>& s_minus,
                           const std::vector<Rational>& s_plus) {
    for (const auto& a : s_minus)
        for (const auto& b : s_plus)
            if (a == b) throw std::invalid_argument("interpolate: S- and S+ overlap");
    std::vector<std::pair<Rational, Rational>> points; // (x, y)
    for (const auto& a : s_minus) points.push_back({a, Rational(0)});
    for (const auto& b : s_plus) points.push_back({b, Rational(1)});
    // polynomial coefficients, index = power
    std::vector<Rational> poly(points.size(), Rational(0));
    if (points.empty()) return LinComb();
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].second.is_zero()) continue;
        // basis polynomial prod_{j != i} (X - x_j) / (x_i - x_j)
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
    LinComb out;
    for (size_t d = 0; d < poly.size(); ++d)
        if (!poly[d].is_zero()) out.add_term(poly[d], graph_power(f, static_cast<int>(d)));
    return out;
}

/// Interpolation applied to a whole combination: powers of the combination
/// expand multinomially into term products.
inline LinComb interpolate_comb(const LinComb& f, const PebbleAlphabet& alphabet,
                                const std::vector<Rational>& s_minus,
                                const std::vector<Rational>& s_plus) {
    for (const auto& a : s_minus)
        for (const auto& b : s_plus)
            if (a == b) throw std::invalid_argument("interpolate: S- and S+ overlap");
    std::vector<std::pair<Rational, Rational>> points;
    for (const auto& a : s_minus) points.push_back({a, Rational(0)});
    for (const auto& b : s_plus) points.push_back({b, Rational(1)});
    if (points.empty()) return LinComb();
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
    LinComb identity;
    identity.add_term(Rational(1), indicator_graph(alphabet, f.label_set()));
    LinComb out, power = identity;
    for (size_t d = 0; d < poly.size(); ++d) {
        if (!poly[d].is_zero()) out = out + (poly[d] * power);
        if (d + 1 < poly.size()) power = power * f;
    }
    return out;
}

// --- spasm and subgraph counts ------------------------------------------------

/// Quotient of f by a vertex partition given as block index per vertex.
inline Graph quotient(const Graph& f, const std::vector<int>& block, int blocks) {
    Graph q(blocks);
    for (auto [u, v] : f.edges())
        if (block[u] != block[v] && !q.has_edge(block[u], block[v]))
            q.add_edge(block[u], block[v]);
    return q;
}

/// spasm(F): one representative per isomorphism class of the loop-free
/// homomorphic images of F (partitions merging no adjacent pair).
inline std::vector<Graph> spasm(const Graph& f) {
    std::vector<Graph> reps;
    if (f.n == 0) { reps.push_back(f); return reps; }
    std::vector<int> rgs(f.n, 0); // restricted growth string
    auto emit = [&](int blocks) {
        for (auto [u, v] : f.edges())
            if (rgs[u] == rgs[v]) return;
        Graph q = quotient(f, rgs, blocks);
        for (const auto& r : reps)
            if (are_isomorphic(r, q)) return;
        reps.push_back(q);
    };
    auto rec = [&](auto&& self, int v, int maxb) -> void {
        if (v == f.n) { emit(maxb); return; }
        for (int b = 0; b <= maxb; ++b) {
            rgs[v] = b;
            self(self, v + 1, std::max(maxb, b + 1));
        }
    };
    rec(rec, 1, 1); // vertex 0 fixed in block 0
    // canonical-ish order: descending vertex count, then descending edges
    std::sort(reps.begin(), reps.end(), [](const Graph& a, const Graph& b) {
        if (a.n != b.n) return a.n > b.n;
        return a.edge_count() > b.edge_count();
    });
    return reps;
}

/// Number of automorphisms of f (edge-preserving both ways).
inline long long automorphism_count(const Graph& f) {
    long long count = 0;
    std::vector<int> img(f.n, kNoVertex);
    std::vector<bool> used(f.n, false);
    auto rec = [&](auto&& self, int v) -> void {
        if (v == f.n) { ++count; return; }
        for (int w = 0; w < f.n; ++w) {
            if (used[w] || f.degree(v) != f.degree(w)) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (f.has_edge(u, v) != f.has_edge(img[u], w)) ok = false;
            if (!ok) continue;
            img[v] = w; used[w] = true;
            self(self, v + 1);
            img[v] = kNoVertex; used[w] = false;
        }
    };
    rec(rec, 0);
    return count;
}

/// Number of injective edge-preserving maps f -> g.
inline long long injective_hom_count(const Graph& f, const Graph& g) {
    if (f.n > g.n) return 0;
    long long count = 0;
    std::vector<int> img(f.n, kNoVertex);
    std::vector<bool> used(g.n, false);
    std::vector<int> order = detail::connectivity_order(f);
    auto rec = [&](auto&& self, size_t i) -> void {
        if (i == order.size()) { ++count; return; }
        int v = order[i];
        for (int w = 0; w < g.n; ++w) {
            if (used[w] || g.degree(w) < f.degree(v)) continue;
            bool ok = true;
            for (size_t j = 0; j < i && ok; ++j)
                if (f.has_edge(order[j], v) && !g.has_edge(img[order[j]], w)) ok = false;
            if (!ok) continue;
            img[v] = w; used[w] = true;
            self(self, i + 1);
            img[v] = kNoVertex; used[w] = false;
        }
    };
    rec(rec, 0);
    return count;
}

/// sub(F, G): number of subgraphs of G isomorphic to F, by direct enumeration.
inline Rational sub_count_direct(const Graph& f, const Graph& g) {
    return Rational(injective_hom_count(f, g), automorphism_count(f));
}

/// Coefficients alpha with sub(F, G) = sum alpha(F_i) hom(F_i, G) over
/// spasm(F), computed by solving the evaluation system on the spasm members
/// themselves. The system is uniquely solvable; a singular system signals a
/// bug and throws.
struct SubCoefficients {
    std::vector<Graph> basis;   // spasm(F)
    std::vector<Rational> coef; // aligned with basis
};

inline SubCoefficients sub_coefficients(const Graph& f) {
    SubCoefficients out;
    out.basis = spasm(f);
    int m = static_cast<int>(out.basis.size());
    // rows: evaluation on each spasm member; cols: coefficients
    std::vector<std::vector<Rational>> mat(m, std::vector<Rational>(m + 1, Rational(0)));
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c)
            mat[r][c] = Rational(hom_count(out.basis[c], out.basis[r]));
        mat[r][m] = sub_count_direct(f, out.basis[r]);
    }
    // Gaussian elimination, exact
    for (int col = 0; col < m; ++col) {
        int pivot = -1;
        for (int r = col; r < m; ++r)
            if (!mat[r][col].is_zero()) { pivot = r; break; }
        if (pivot == -1) throw std::logic_error("sub_coefficients: singular system");
        std::swap(mat[col], mat[pivot]);
        for (int r = 0; r < m; ++r) {
            if (r == col || mat[r][col].is_zero()) continue;
            Rational factor = mat[r][col] / mat[col][col];
            for (int c = col; c <= m; ++c) mat[r][c] -= factor * mat[col][c];
        }
    }
    out.coef.resize(m);
    for (int r = 0; r < m; ++r) out.coef[r] = mat[r][m] / mat[r][r];
    return out;
}

inline Rational sub_count_via_hom(const SubCoefficients& sc, const Graph& g) {
    Rational sum;
    for (size_t i = 0; i < sc.basis.size(); ++i)
        sum += sc.coef[i] * Rational(hom_count(sc.basis[i], g));
    return sum;
}

/// Exact hom counts of each family member into g.
inline std::vector<BigInt> hom_profile(const std::vector<Graph>& family, const Graph& g) {
    std::vector<BigInt> out;
    out.reserve(family.size());
    for (const auto& f : family) out.push_back(hom_count(f, g));
    return out;
}

} // namespace homlab
