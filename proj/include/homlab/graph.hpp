#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace homlab {

using VertexSet = uint64_t; // bitmask over vertices 0..63

inline int popcount(VertexSet s) { return __builtin_popcountll(s); }
inline int lowest_bit(VertexSet s) { return __builtin_ctzll(s); }
inline VertexSet bit(int v) { return VertexSet(1) << v; }

/// Thrown when a verified construction contradicts a statement it is supposed
/// to witness (e.g. a CFI parity mismatch). Must never fire.
struct theorem_violation : std::logic_error {
    using std::logic_error::logic_error;
};

/// The pebble alphabet [x_1..x_k1] + [y_1..y_k2].
struct PebbleAlphabet {
    int k1 = 0;
    int k2 = 0;

    PebbleAlphabet() = default;
    PebbleAlphabet(int k1_, int k2_) : k1(k1_), k2(k2_) {
        if (k1 < 0 || k2 < 0 || k1 + k2 < 1)
            throw std::invalid_argument("PebbleAlphabet: need k1,k2 >= 0 and k1+k2 >= 1");
    }
    int size() const { return k1 + k2; }
    bool is_x(int p) const { return p >= 0 && p < k1; }
    bool is_y(int p) const { return p >= k1 && p < k1 + k2; }
    // pebbles are indexed 0..k1-1 for x_1..x_k1, then k1..k1+k2-1 for y_1..y_k2
    std::string name(int p) const {
        if (is_x(p)) return "x" + std::to_string(p + 1);
        if (is_y(p)) return "y" + std::to_string(p - k1 + 1);
        throw std::out_of_range("pebble index");
    }
    std::optional<int> index_of(const std::string& name) const {
        if (name.size() < 2) return std::nullopt;
        int i = 0;
        try { i = std::stoi(name.substr(1)); } catch (...) { return std::nullopt; }
        if (name[0] == 'x' && i >= 1 && i <= k1) return i - 1;
        if (name[0] == 'y' && i >= 1 && i <= k2) return k1 + i - 1;
        return std::nullopt;
    }
};

/// Finite simple graph on vertices 0..n-1 with adjacency bitsets.
struct Graph {
    int n = 0;
    std::vector<VertexSet> adj;

    Graph() = default;
    explicit Graph(int n_) : n(n_), adj(n_, 0) {
        if (n_ < 0 || n_ > 63) throw std::invalid_argument("Graph: 0 <= n <= 63");
    }

    void add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw std::invalid_argument("Graph: no self-loops");
        adj[u] |= bit(v);
        adj[v] |= bit(u);
    }
    bool has_edge(int u, int v) const {
        return u != v && u >= 0 && u < n && v >= 0 && v < n && (adj[u] & bit(v));
    }
    void check_vertex(int v) const {
        if (v < 0 || v >= n) throw std::invalid_argument("Graph: vertex out of range");
    }
    int degree(int v) const { return popcount(adj[v]); }
    int edge_count() const {
        int s = 0;
        for (int v = 0; v < n; ++v) s += degree(v);
        return s / 2;
    }
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> e;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (adj[u] & bit(v)) e.push_back({u, v});
        return e;
    }
    VertexSet all_vertices() const { return n == 0 ? 0 : (~VertexSet(0) >> (64 - n)); }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n == b.n && a.adj == b.adj;
    }

    /// Component of v inside the induced subgraph on `within`.
    VertexSet component_of(int v, VertexSet within) const {
        if (!(within & bit(v))) return 0;
        VertexSet comp = bit(v), frontier = bit(v);
        while (frontier) {
            int u = lowest_bit(frontier);
            frontier &= frontier - 1;
            VertexSet nb = adj[u] & within & ~comp;
            comp |= nb;
            frontier |= nb;
        }
        return comp;
    }
    std::vector<VertexSet> components(VertexSet within) const {
        std::vector<VertexSet> out;
        VertexSet left = within;
        while (left) {
            VertexSet c = component_of(lowest_bit(left), within);
            out.push_back(c);
            left &= ~c;
        }
        return out;
    }
    std::vector<VertexSet> components() const { return components(all_vertices()); }
    bool connected() const { return n <= 1 || components().size() == 1; }

    Graph induced(VertexSet keep) const {
        std::vector<int> remap(n, -1);
        Graph g(popcount(keep));
        int idx = 0;
        for (int v = 0; v < n; ++v)
            if (keep & bit(v)) remap[v] = idx++;
        for (int u = 0; u < n; ++u)
            if (keep & bit(u))
                for (int v = u + 1; v < n; ++v)
                    if ((keep & bit(v)) && (adj[u] & bit(v))) g.add_edge(remap[u], remap[v]);
        return g;
    }

    Graph disjoint_union(const Graph& other) const {
        Graph g(n + other.n);
        for (auto [u, v] : edges()) g.add_edge(u, v);
        for (auto [u, v] : other.edges()) g.add_edge(n + u, n + v);
        return g;
    }
};

// --- standard small graphs -------------------------------------------------

inline Graph complete_graph(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}
inline Graph path_graph(int n) {
    Graph g(n);
    for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
    return g;
}
inline Graph cycle_graph(int n) {
    Graph g = path_graph(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
}
inline Graph empty_graph(int n) { return Graph(n); }

// --- minors ----------------------------------------------------------------

inline Graph delete_vertex(const Graph& g, int v) {
    g.check_vertex(v);
    return g.induced(g.all_vertices() & ~bit(v));
}
inline Graph delete_edge(const Graph& g, int u, int v) {
    if (!g.has_edge(u, v)) throw std::invalid_argument("delete_edge: no such edge");
    Graph h = g;
    h.adj[u] &= ~bit(v);
    h.adj[v] &= ~bit(u);
    return h;
}
/// Contracts the edge {u,v}; the merged vertex replaces min(u,v), loops and
/// parallel edges are suppressed by the set representation.
inline Graph contract_edge(const Graph& g, int u, int v) {
    if (!g.has_edge(u, v)) throw std::invalid_argument("contract_edge: no such edge");
    int keep = std::min(u, v), drop = std::max(u, v);
    Graph h = g;
    h.adj[keep] |= h.adj[drop];
    for (int w = 0; w < h.n; ++w)
        if (h.adj[w] & bit(drop)) h.adj[w] |= bit(keep);
    h.adj[keep] &= ~(bit(keep) | bit(drop));
    for (int w = 0; w < h.n; ++w) h.adj[w] &= ~bit(drop);
    return h.induced(h.all_vertices() & ~bit(drop));
}

// --- labeled graphs ----------------------------------------------------------

constexpr int kNoVertex = -1;

/// Graph with a partial labeling from a pebble alphabet. labels[p] is the
/// vertex carrying pebble p, or kNoVertex. Several pebbles may share a vertex.
struct LabeledGraph {
    Graph graph;
    PebbleAlphabet alphabet;
    std::vector<int> labels; // size k1+k2, value in [0,n) or kNoVertex

    LabeledGraph() = default;
    LabeledGraph(Graph g, PebbleAlphabet a)
        : graph(std::move(g)), alphabet(a), labels(a.size(), kNoVertex) {}

    int label(int p) const { return labels.at(p); }
    bool has_label(int p) const { return labels.at(p) != kNoVertex; }
    std::vector<int> label_set() const {
        std::vector<int> out;
        for (int p = 0; p < static_cast<int>(labels.size()); ++p)
            if (labels[p] != kNoVertex) out.push_back(p);
        return out;
    }
    VertexSet labeled_vertices() const {
        VertexSet s = 0;
        for (int v : labels)
            if (v != kNoVertex) s |= bit(v);
        return s;
    }
    bool fully_labeled() const {
        return popcount(labeled_vertices()) == graph.n;
    }

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
        return a.graph == b.graph && a.alphabet.k1 == b.alphabet.k1 &&
               a.alphabet.k2 == b.alphabet.k2 && a.labels == b.labels;
    }
};

inline LabeledGraph unlabeled(Graph g, PebbleAlphabet a) { return LabeledGraph(std::move(g), a); }

/// G[z -> v]; v == kNoVertex removes the label.
inline LabeledGraph relabel(const LabeledGraph& g, int pebble, int v) {
    if (pebble < 0 || pebble >= g.alphabet.size())
        throw std::invalid_argument("relabel: pebble out of range");
    if (v != kNoVertex) g.graph.check_vertex(v);
    LabeledGraph h = g;
    h.labels[pebble] = v;
    return h;
}

/// Product of labeled graphs over the same alphabet: disjoint union with
/// same-labeled vertices identified, loops and parallel edges suppressed.
inline LabeledGraph product(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.alphabet.k1 != b.alphabet.k1 || a.alphabet.k2 != b.alphabet.k2)
        throw std::invalid_argument("product: alphabets differ");
    int total = a.graph.n + b.graph.n;
    std::vector<int> uf(total);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    auto unite = [&](int x, int y) { uf[find(x)] = find(y); };
    for (int p = 0; p < a.alphabet.size(); ++p)
        if (a.labels[p] != kNoVertex && b.labels[p] != kNoVertex)
            unite(a.labels[p], a.graph.n + b.labels[p]);
    // compress to dense ids, a-side vertices first
    std::vector<int> id(total, -1);
    int m = 0;
    for (int x = 0; x < total; ++x)
        if (find(x) == x) id[x] = m++;
    auto vid = [&](int x) { return id[find(x)]; };
    LabeledGraph out(Graph(m), a.alphabet);
    for (auto [u, v] : a.graph.edges())
        if (vid(u) != vid(v)) out.graph.add_edge(vid(u), vid(v));
    for (auto [u, v] : b.graph.edges())
        if (vid(a.graph.n + u) != vid(a.graph.n + v))
            out.graph.add_edge(vid(a.graph.n + u), vid(a.graph.n + v));
    for (int p = 0; p < a.alphabet.size(); ++p) {
        if (a.labels[p] != kNoVertex) out.labels[p] = vid(a.labels[p]);
        else if (b.labels[p] != kNoVertex) out.labels[p] = vid(a.graph.n + b.labels[p]);
    }
    return out;
}

/// Embeddings of the factors into the product (vertex maps), for callers that
/// must track vertex identity across a construction.
struct ProductResult {
    LabeledGraph graph;
    std::vector<int> embed_a;
    std::vector<int> embed_b;
    // an edge collapsed onto a single merged vertex: the factors jointly
    // require a loop, so as a hom-counting term the product vanishes
    bool loop_created = false;
};

inline ProductResult product_with_maps(const LabeledGraph& a, const LabeledGraph& b) {
    // same construction as product(), kept in sync
    if (a.alphabet.k1 != b.alphabet.k1 || a.alphabet.k2 != b.alphabet.k2)
        throw std::invalid_argument("product: alphabets differ");
    int total = a.graph.n + b.graph.n;
    std::vector<int> uf(total);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    };
    for (int p = 0; p < a.alphabet.size(); ++p)
        if (a.labels[p] != kNoVertex && b.labels[p] != kNoVertex)
            uf[find(a.labels[p])] = find(a.graph.n + b.labels[p]);
    std::vector<int> id(total, -1);
    int m = 0;
    for (int x = 0; x < total; ++x)
        if (find(x) == x) id[x] = m++;
    auto vid = [&](int x) { return id[find(x)]; };
    ProductResult r;
    r.graph = LabeledGraph(Graph(m), a.alphabet);
    for (auto [u, v] : a.graph.edges()) {
        if (vid(u) == vid(v)) r.loop_created = true;
        else r.graph.graph.add_edge(vid(u), vid(v));
    }
    for (auto [u, v] : b.graph.edges()) {
        if (vid(a.graph.n + u) == vid(a.graph.n + v)) r.loop_created = true;
        else r.graph.graph.add_edge(vid(a.graph.n + u), vid(a.graph.n + v));
    }
    for (int p = 0; p < a.alphabet.size(); ++p) {
        if (a.labels[p] != kNoVertex) r.graph.labels[p] = vid(a.labels[p]);
        else if (b.labels[p] != kNoVertex) r.graph.labels[p] = vid(a.graph.n + b.labels[p]);
    }
    r.embed_a.resize(a.graph.n);
    r.embed_b.resize(b.graph.n);
    for (int v = 0; v < a.graph.n; ++v) r.embed_a[v] = vid(v);
    for (int v = 0; v < b.graph.n; ++v) r.embed_b[v] = vid(a.graph.n + v);
    return r;
}

// --- isomorphism -------------------------------------------------------------

namespace detail {

struct IsoSearch {
    const Graph& g;
    const Graph& h;
    std::vector<int> map;     // g-vertex -> h-vertex
    std::vector<bool> used;   // h-vertex taken
    std::vector<int> order;   // assignment order over g

    IsoSearch(const Graph& g_, const Graph& h_) : g(g_), h(h_), map(g_.n, -1), used(h_.n, false) {}

    bool consistent(int v, int w) const {
        if (g.degree(v) != h.degree(w)) return false;
        for (int u = 0; u < g.n; ++u) {
            if (map[u] == -1) continue;
            bool ge = g.has_edge(u, v), he = h.has_edge(map[u], w);
            if (ge != he) return false;
        }
        return true;
    }

    bool run(size_t i) {
        if (i == order.size()) return true;
        int v = order[i];
        for (int w = 0; w < h.n; ++w) {
            if (used[w] || !consistent(v, w)) continue;
            map[v] = w;
            used[w] = true;
            if (run(i + 1)) return true;
            map[v] = -1;
            used[w] = false;
        }
        return false;
    }
};

/// Assignment order: vertices adjacent to already-ordered ones first,
/// high degree as tiebreak. Keeps the refutation search close to connected.
inline std::vector<int> connectivity_order(const Graph& g) {
    std::vector<int> order;
    std::vector<bool> placed(g.n, false);
    for (int step = 0; step < g.n; ++step) {
        int best = -1, best_adj = -1, best_deg = -1;
        for (int v = 0; v < g.n; ++v) {
            if (placed[v]) continue;
            int adjc = 0;
            for (int u : order)
                if (g.has_edge(u, v)) ++adjc;
            if (adjc > best_adj || (adjc == best_adj && g.degree(v) > best_deg)) {
                best = v;
                best_adj = adjc;
                best_deg = g.degree(v);
            }
        }
        order.push_back(best);
        placed[best] = true;
    }
    return order;
}

} // namespace detail

/// Exact isomorphism test with verified witness.
inline std::optional<std::vector<int>> find_isomorphism(const Graph& g, const Graph& h) {
    if (g.n != h.n || g.edge_count() != h.edge_count()) return std::nullopt;
    auto dg = [&](const Graph& x) {
        std::vector<int> d;
        for (int v = 0; v < x.n; ++v) d.push_back(x.degree(v));
        std::sort(d.begin(), d.end());
        return d;
    };
    if (dg(g) != dg(h)) return std::nullopt;
    detail::IsoSearch s(g, h);
    s.order = detail::connectivity_order(g);
    if (!s.run(0)) return std::nullopt;
    // verify the witness in both directions before returning it
    for (int u = 0; u < g.n; ++u)
        for (int v = 0; v < g.n; ++v)
            if (u != v && g.has_edge(u, v) != h.has_edge(s.map[u], s.map[v]))
                throw std::logic_error("find_isomorphism: witness failed verification");
    return s.map;
}

inline bool are_isomorphic(const Graph& g, const Graph& h) {
    return find_isomorphism(g, h).has_value();
}

/// Label-preserving isomorphism: pebbled vertices must map to each other.
inline std::optional<std::vector<int>> find_labeled_isomorphism(const LabeledGraph& g,
                                                                const LabeledGraph& h) {
    if (g.graph.n != h.graph.n || g.alphabet.size() != h.alphabet.size()) return std::nullopt;
    for (int p = 0; p < g.alphabet.size(); ++p)
        if ((g.labels[p] == kNoVertex) != (h.labels[p] == kNoVertex)) return std::nullopt;
    detail::IsoSearch s(g.graph, h.graph);
    // pin labeled vertices first
    for (int p = 0; p < g.alphabet.size(); ++p) {
        if (g.labels[p] == kNoVertex) continue;
        int v = g.labels[p], w = h.labels[p];
        if (s.map[v] != -1) {
            if (s.map[v] != w) return std::nullopt;
            continue;
        }
        if (s.used[w] || !s.consistent(v, w)) return std::nullopt;
        s.map[v] = w;
        s.used[w] = true;
    }
    for (int v : detail::connectivity_order(g.graph))
        if (s.map[v] == -1) s.order.push_back(v);
    if (!s.run(0)) return std::nullopt;
    return s.map;
}

inline bool labeled_isomorphic(const LabeledGraph& g, const LabeledGraph& h) {
    return find_labeled_isomorphism(g, h).has_value();
}

// --- relational structures ---------------------------------------------------

/// Finite relational structure with named relations of fixed arity.
struct RelStructure {
    int n = 0;
    struct Relation {
        std::string name;
        int arity = 0;
        std::vector<std::vector<int>> tuples;
    };
    std::vector<Relation> relations;

    RelStructure() = default;
    explicit RelStructure(int n_) : n(n_) {}

    Relation& add_relation(const std::string& name, int arity) {
        if (arity < 1) throw std::invalid_argument("RelStructure: arity >= 1");
        relations.push_back({name, arity, {}});
        return relations.back();
    }
    void add_tuple(const std::string& name, std::vector<int> t) {
        for (auto& r : relations) {
            if (r.name != name) continue;
            if (static_cast<int>(t.size()) != r.arity)
                throw std::invalid_argument("RelStructure: arity mismatch");
            for (int e : t)
                if (e < 0 || e >= n) throw std::invalid_argument("RelStructure: element out of range");
            if (std::find(r.tuples.begin(), r.tuples.end(), t) == r.tuples.end())
                r.tuples.push_back(std::move(t));
            return;
        }
        throw std::invalid_argument("RelStructure: unknown relation " + name);
    }
    const Relation* relation(const std::string& name) const {
        for (auto& r : relations)
            if (r.name == name) return &r;
        return nullptr;
    }
    bool has_tuple(const std::string& name, const std::vector<int>& t) const {
        const Relation* r = relation(name);
        return r && std::find(r->tuples.begin(), r->tuples.end(), t) != r->tuples.end();
    }
};

/// Graph as an {E}-structure with both orientations of each edge.
inline RelStructure to_structure(const Graph& g) {
    RelStructure a(g.n);
    a.add_relation("E", 2);
    for (auto [u, v] : g.edges()) {
        a.add_tuple("E", {u, v});
        a.add_tuple("E", {v, u});
    }
    return a;
}

/// Gaifman graph: distinct elements co-occurring in some tuple are adjacent.
inline Graph gaifman(const RelStructure& a) {
    Graph g(a.n);
    for (const auto& r : a.relations)
        for (const auto& t : r.tuples)
            for (size_t i = 0; i < t.size(); ++i)
                for (size_t j = i + 1; j < t.size(); ++j)
                    if (t[i] != t[j] && !g.has_edge(t[i], t[j])) g.add_edge(t[i], t[j]);
    return g;
}

/// Structure isomorphism (used by tests; brute force with degree pruning on
/// the Gaifman graph).
inline std::optional<std::vector<int>> find_structure_isomorphism(const RelStructure& a,
                                                                  const RelStructure& b) {
    if (a.n != b.n) return std::nullopt;
    for (const auto& r : a.relations) {
        const auto* rb = b.relation(r.name);
        if (!rb || rb->arity != r.arity || rb->tuples.size() != r.tuples.size())
            return std::nullopt;
    }
    std::vector<int> perm(a.n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (const auto& r : a.relations) {
            for (const auto& t : r.tuples) {
                std::vector<int> mt(t.size());
                for (size_t i = 0; i < t.size(); ++i) mt[i] = perm[t[i]];
                if (!b.has_tuple(r.name, mt)) { ok = false; break; }
            }
            if (!ok) break;
        }
        if (ok) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

} // namespace homlab
