#pragma once

#include <functional>
#include <map>
#include <set>

#include "graph.hpp"
#include "pursuit.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Canonical forms and isomorphism-free enumeration.
// ---------------------------------------------------------------------------

/// Upper-triangle adjacency mask in column-major pair order ((0,1),(0,2),
/// (1,2),(0,3),...), with pair b stored at bit 63-b: integer order is then
/// lexicographic in placement order, and prefixes settled by placing
/// vertices one at a time occupy the top bits.
inline uint64_t triangle_mask(const Graph& g, const std::vector<int>& perm) {
    uint64_t mask = 0;
    int b = 0;
    for (int j = 1; j < g.n; ++j)
        for (int i = 0; i < j; ++i, ++b)
            if (g.has_edge(perm[i], perm[j])) mask |= uint64_t(1) << (63 - b);
    return mask;
}

/// Minimal triangle mask over all vertex orders, branch-and-bound on the
/// settled prefix.
inline uint64_t canonical_mask(const Graph& g) {
    if (g.n > 11) throw std::invalid_argument("canonical_mask: n <= 11");
    uint64_t best = ~uint64_t(0);
    std::vector<int> perm;
    std::vector<bool> used(g.n, false);
    std::function<void(uint64_t, int)> rec = [&](uint64_t cur, int bits) {
        int t = static_cast<int>(perm.size());
        if (t == g.n) {
            best = std::min(best, cur);
            return;
        }
        for (int v = 0; v < g.n; ++v) {
            if (used[v]) continue;
            uint64_t next = cur;
            for (int i = 0; i < t; ++i)
                if (g.has_edge(perm[i], v)) next |= uint64_t(1) << (63 - (bits + i));
            int next_bits = bits + t;
            if (next_bits > 0 && (next >> (64 - next_bits)) > (best >> (64 - next_bits)))
                continue;
            used[v] = true;
            perm.push_back(v);
            rec(next, next_bits);
            perm.pop_back();
            used[v] = false;
        }
    };
    rec(0, 0);
    return best;
}

inline Graph graph_from_mask(int n, uint64_t mask) {
    Graph g(n);
    int b = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++b)
            if ((mask >> (63 - b)) & 1) g.add_edge(i, j);
    return g;
}

/// One representative per isomorphism class, generated by vertex
/// augmentation with canonical dedup. Hard budget n <= 8.
inline std::vector<Graph> enumerate_graphs(int n_max, bool connected_only) {
    if (n_max < 1) return {};
    if (n_max > 8) throw std::invalid_argument("enumerate_graphs: budget exceeded (n <= 8)");
    std::vector<std::set<uint64_t>> levels(n_max + 1);
    levels[1].insert(0);
    for (int n = 2; n <= n_max; ++n) {
        for (uint64_t parent : levels[n - 1]) {
            Graph base = graph_from_mask(n - 1, parent);
            for (uint64_t nb = 0; nb < (uint64_t(1) << (n - 1)); ++nb) {
                Graph g(n);
                for (auto [u, v] : base.edges()) g.add_edge(u, v);
                for (int v = 0; v < n - 1; ++v)
                    if ((nb >> v) & 1) g.add_edge(v, n - 1);
                levels[n].insert(canonical_mask(g));
            }
        }
    }
    std::vector<Graph> out;
    for (int n = 1; n <= n_max; ++n)
        for (uint64_t mask : levels[n]) {
            Graph g = graph_from_mask(n, mask);
            if (!connected_only || g.connected()) out.push_back(g);
        }
    return out;
}

/// Forests only (every forest arises by attaching a vertex of degree <= 1),
/// which reaches n = 8 cheaply.
inline std::vector<Graph> enumerate_forests(int n_max) {
    if (n_max < 1) return {};
    std::vector<std::set<uint64_t>> levels(n_max + 1);
    levels[1].insert(0);
    for (int n = 2; n <= n_max; ++n) {
        for (uint64_t parent : levels[n - 1]) {
            Graph base = graph_from_mask(n - 1, parent);
            for (int attach = -1; attach < n - 1; ++attach) {
                Graph g(n);
                for (auto [u, v] : base.edges()) g.add_edge(u, v);
                if (attach >= 0) g.add_edge(attach, n - 1);
                levels[n].insert(canonical_mask(g));
            }
        }
    }
    std::vector<Graph> out;
    for (int n = 1; n <= n_max; ++n)
        for (uint64_t mask : levels[n]) out.push_back(graph_from_mask(n, mask));
    return out;
}

// ---------------------------------------------------------------------------
// Families by class membership.
// ---------------------------------------------------------------------------

struct FamilySpec {
    enum class Class { P, UP, T, all };
    Class cls = Class::all;
    int k1 = 1, k2 = 0, q = 1;
    int n_max = 6;
    bool connected_only = false;
};

/// Filtered enumeration with membership decided by the game solvers.
inline std::vector<Graph> enumerate_family(const FamilySpec& spec) {
    std::vector<Graph> graphs = enumerate_graphs(spec.n_max, spec.connected_only);
    if (spec.cls == FamilySpec::Class::all) return graphs;
    std::vector<Graph> out;
    for (const Graph& g : graphs) {
        bool in = false;
        switch (spec.cls) {
            case FamilySpec::Class::P: in = membership(g, GraphClass::P, spec.k1, spec.k2); break;
            case FamilySpec::Class::UP:
                in = membership(g, GraphClass::UP, spec.k1, spec.k2);
                break;
            case FamilySpec::Class::T:
                in = membership(g, GraphClass::T, spec.k1, spec.k2, spec.q);
                break;
            case FamilySpec::Class::all: in = true; break;
        }
        if (in) out.push_back(g);
    }
    return out;
}

} // namespace homlab
