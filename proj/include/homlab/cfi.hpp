#pragma once

#include <map>

#include "graph.hpp"

namespace homlab {

/// CFI graph X_U(G) over a connected base graph. Vertices are pairs
/// (base vertex, even/odd subset of its incident edges), encoded with edge
/// subsets as bitmasks over a global edge index of the base.
struct CfiGraph {
    Graph base;
    VertexSet twist; // U
    std::vector<std::pair<int, int>> base_edges;
    std::vector<uint32_t> edge_mask_of_vertex; // base vertex -> incident-edge mask

    struct Vertex {
        int base_vertex;
        uint32_t subset; // S as a mask over base_edges
    };
    std::vector<Vertex> vertices;
    std::vector<std::vector<int>> gadget; // base vertex -> vertex ids
    Graph graph;                          // the CFI graph itself

    int edge_index(int u, int v) const {
        for (size_t i = 0; i < base_edges.size(); ++i)
            if ((base_edges[i].first == u && base_edges[i].second == v) ||
                (base_edges[i].first == v && base_edges[i].second == u))
                return static_cast<int>(i);
        return -1;
    }
    /// rho: projection to the base vertex.
    int project(int cfi_vertex) const { return vertices.at(cfi_vertex).base_vertex; }
    int vertex_id(int base_vertex, uint32_t subset) const {
        for (int id : gadget.at(base_vertex))
            if (vertices[id].subset == subset) return id;
        return -1;
    }
};

inline CfiGraph build_cfi(const Graph& g, VertexSet u_set) {
    if (!g.connected()) throw std::invalid_argument("build_cfi: base graph must be connected");
    CfiGraph x;
    x.base = g;
    x.twist = u_set;
    x.base_edges = g.edges();
    x.edge_mask_of_vertex.assign(g.n, 0);
    for (size_t i = 0; i < x.base_edges.size(); ++i) {
        x.edge_mask_of_vertex[x.base_edges[i].first] |= 1u << i;
        x.edge_mask_of_vertex[x.base_edges[i].second] |= 1u << i;
    }
    x.gadget.assign(g.n, {});
    for (int v = 0; v < g.n; ++v) {
        int parity = (u_set & bit(v)) ? 1 : 0;
        uint32_t incident = x.edge_mask_of_vertex[v];
        // enumerate subsets of the incident edges with the right parity
        uint32_t sub = 0;
        while (true) {
            if ((__builtin_popcount(sub) & 1) == parity) {
                x.gadget[v].push_back(static_cast<int>(x.vertices.size()));
                x.vertices.push_back({v, sub});
            }
            if (sub == incident) break;
            sub = (sub - incident) & incident;
        }
    }
    x.graph = Graph(static_cast<int>(x.vertices.size()));
    for (size_t a = 0; a < x.vertices.size(); ++a)
        for (size_t b = a + 1; b < x.vertices.size(); ++b) {
            const auto& va = x.vertices[a];
            const auto& vb = x.vertices[b];
            if (!g.has_edge(va.base_vertex, vb.base_vertex)) continue;
            int e = x.edge_index(va.base_vertex, vb.base_vertex);
            if (((va.subset ^ vb.subset) >> e) & 1u) continue; // uv in S triangle T
            x.graph.add_edge(static_cast<int>(a), static_cast<int>(b));
        }
    return x;
}

/// X(G) and the twisted companion: twist parity is all that matters, so the
/// representative twists are the empty set and the lowest-index vertex.
inline CfiGraph cfi_even(const Graph& g) { return build_cfi(g, 0); }
inline CfiGraph cfi_odd(const Graph& g) {
    if (g.n == 0) throw std::invalid_argument("cfi_odd: empty base");
    return build_cfi(g, bit(0));
}

/// are_isomorphic(X_S, X_T) checked against the parity criterion; a mismatch
/// is a theorem violation and throws.
inline bool parity_check(const Graph& g, VertexSet s, VertexSet t) {
    CfiGraph xs = build_cfi(g, s);
    CfiGraph xt = build_cfi(g, t);
    bool iso = are_isomorphic(xs.graph, xt.graph);
    bool parity_equal = (popcount(s) % 2) == (popcount(t) % 2);
    if (iso != parity_equal)
        throw theorem_violation("parity_check: isomorphism disagrees with twist parity");
    return iso;
}

/// Explicit isomorphism X_{u}(G) -> X_{v}(G) moving the twist along a u-v
/// path: flips membership of the path edges incident to each path vertex.
/// The result is verified edge-preserving and gadget-respecting.
struct TwistIso {
    CfiGraph from;
    CfiGraph to;
    std::vector<int> map; // vertex of `from` -> vertex of `to`
};

inline TwistIso twist_iso(const Graph& g, int u, int v, const std::vector<int>& path) {
    if (path.empty() || path.front() != u || path.back() != v)
        throw std::invalid_argument("twist_iso: path must run from u to v");
    for (size_t i = 0; i + 1 < path.size(); ++i)
        if (!g.has_edge(path[i], path[i + 1]))
            throw std::invalid_argument("twist_iso: not a path in g");
    TwistIso out;
    out.from = build_cfi(g, bit(u));
    out.to = build_cfi(g, bit(v));
    // flip mask per base vertex: path edges incident to it
    std::vector<uint32_t> flip(g.n, 0);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        int e = out.from.edge_index(path[i], path[i + 1]);
        flip[path[i]] |= 1u << e;
        flip[path[i + 1]] |= 1u << e;
    }
    out.map.assign(out.from.vertices.size(), -1);
    for (size_t a = 0; a < out.from.vertices.size(); ++a) {
        const auto& w = out.from.vertices[a];
        int image = out.to.vertex_id(w.base_vertex, w.subset ^ flip[w.base_vertex]);
        if (image == -1) throw theorem_violation("twist_iso: flipped subset has wrong parity");
        out.map[a] = image;
    }
    // verify bijectivity and edge preservation in both directions
    std::vector<bool> hit(out.to.vertices.size(), false);
    for (int m : out.map) {
        if (hit[m]) throw theorem_violation("twist_iso: not injective");
        hit[m] = true;
    }
    int na = out.from.graph.n;
    for (int a = 0; a < na; ++a)
        for (int b = a + 1; b < na; ++b)
            if (out.from.graph.has_edge(a, b) != out.to.graph.has_edge(out.map[a], out.map[b]))
                throw theorem_violation("twist_iso: not edge-preserving");
    for (int a = 0; a < na; ++a)
        if (out.to.project(out.map[a]) != out.from.project(a))
            throw theorem_violation("twist_iso: gadget not preserved");
    return out;
}

} // namespace homlab
