#pragma once

#include <functional>
#include <map>

#include "decomp.hpp"
#include "graph.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Exhaustive decomposition searches. These are deliberately independent of
// the game solvers: the path search enumerates introduce/forget schedules,
// the tree search enumerates bag recursions, the cover searches enumerate
// forests and pebbling functions directly. They serve as oracles for the
// characterization suites and as witness producers.
// ---------------------------------------------------------------------------

namespace detail {

/// Nice path decompositions of g - S with at most `k1` live vertices,
/// searched over introduce/forget schedules. A vertex may be forgotten only
/// once all its neighbours are introduced (forced in any valid schedule), so
/// (introduced, live) is a complete state.
inline bool schedule_exists(const Graph& g, VertexSet s, int k1,
                            std::vector<std::pair<bool, int>>* ops_out) {
    VertexSet region = g.all_vertices() & ~s;
    std::map<std::pair<VertexSet, VertexSet>, bool> memo;
    std::function<bool(VertexSet, VertexSet, std::vector<std::pair<bool, int>>*)> rec =
        [&](VertexSet introduced, VertexSet live, std::vector<std::pair<bool, int>>* trace) -> bool {
        if (introduced == region) return true;
        auto key = std::make_pair(introduced, live);
        auto it = memo.find(key);
        if (it != memo.end() && !trace) return it->second;
        bool ok = false;
        // forget moves first: they only shrink the live set
        VertexSet forgettable = live;
        while (forgettable && !ok) {
            int v = lowest_bit(forgettable);
            forgettable &= forgettable - 1;
            if ((g.adj[v] & region & ~introduced) != 0) continue; // an edge of v is still uncovered
            if (trace) trace->push_back({false, v});
            ok = rec(introduced, live & ~bit(v), trace);
            if (!ok && trace) trace->pop_back();
        }
        if (popcount(live) + 1 <= k1) {
            VertexSet candidates = region & ~introduced;
            while (candidates && !ok) {
                int v = lowest_bit(candidates);
                candidates &= candidates - 1;
                if (trace) trace->push_back({true, v});
                ok = rec(introduced | bit(v), live | bit(v), trace);
                if (!ok && trace) trace->pop_back();
            }
        }
        if (!trace) memo[key] = ok;
        return ok;
    };
    return rec(0, 0, ops_out);
}

} // namespace detail

/// Does g admit a path decomposition of class width (k1,k2)? Exhaustive over
/// exception sets and introduce/forget schedules; returns a verified witness.
inline std::optional<RootedDecomposition> find_path_decomposition(const Graph& g, int k1, int k2) {
    std::vector<VertexSet> exception_sets;
    VertexSet all = g.all_vertices();
    VertexSet s = 0;
    while (true) {
        if (popcount(s) <= k2) exception_sets.push_back(s);
        if (s == all) break;
        s = (s - all) & all;
    }
    std::sort(exception_sets.begin(), exception_sets.end(),
              [](VertexSet a, VertexSet b) {
                  return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
              });
    for (VertexSet sx : exception_sets) {
        std::vector<std::pair<bool, int>> ops;
        if (!detail::schedule_exists(g, sx, k1, &ops)) continue;
        RootedDecomposition d;
        d.kind = RootedDecomposition::Kind::path;
        VertexSet live = 0;
        if (ops.empty()) { // everything is in the exception set
            d.bags.push_back(sx);
            d.parent.push_back(-1);
        } else {
            for (size_t i = 0; i < ops.size(); ++i) {
                live = ops[i].first ? (live | bit(ops[i].second)) : (live & ~bit(ops[i].second));
                d.bags.push_back(live | sx);
                d.parent.push_back(static_cast<int>(i) - 1);
            }
        }
        d.root = 0;
        int leaf = d.node_count() - 1;
        if (sx) d.leaf_exceptions[leaf] = sx;
        auto check = verify_decomposition(d, g, k1, k2);
        if (!check)
            throw std::logic_error("find_path_decomposition: witness failed: " + check.diagnostic);
        return d;
    }
    return std::nullopt;
}

/// Pathwidth via the same schedule search (k2 = 0 sweep).
inline int pathwidth(const Graph& g) {
    for (int k = 0;; ++k)
        if (detail::schedule_exists(g, 0, k + 1, nullptr)) return k;
}

// ---------------------------------------------------------------------------
// Exhaustive bounded-depth tree decompositions with exception sets.
//
// Searches decompositions in separator normal form: each node picks a bag
// from its parent's bag plus a piece of its component, children handle the
// remaining components. Exception commitments are enumerated per subtree so
// different leaves may except different vertices of a shared bag.
// ---------------------------------------------------------------------------

namespace detail {

struct TreeDecSearch {
    const Graph& g;
    int k1, k2, q;
    struct Key {
        VertexSet bag, comp, s;
        int depth_left, budget_left;
        bool operator<(const Key& o) const {
            return std::tie(bag, comp, s, depth_left, budget_left) <
                   std::tie(o.bag, o.comp, o.s, o.depth_left, o.budget_left);
        }
    };
    std::map<Key, bool> memo;
    RootedDecomposition* witness = nullptr; // built when non-null

    // One component `comp` hanging below the bag `bag` whose exception
    // designations `s` are already fixed: choose the child bag together with
    // its designations (made once, binding the whole subtree below it).
    bool component_ok(VertexSet bag, VertexSet comp, VertexSet s, int depth_left, int budget_left,
                      int parent_node) {
        Key key{bag, comp, s & (bag | comp), depth_left, budget_left};
        if (!witness) {
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
        }
        VertexSet required = 0;
        for (int w = 0; w < g.n; ++w)
            if ((bag & bit(w)) && (g.adj[w] & comp)) required |= bit(w);
        bool result = false;
        VertexSet x = 0;
        while (!result) {
            if (x == comp) break;
            x = (x - comp) & comp; // next nonempty subset of comp
            VertexSet nb = required | x;
            int gain = popcount(x);
            if (gain > depth_left) continue;
            VertexSet commit_pool = nb & ~s;
            VertexSet z = 0;
            while (!result) {
                if (popcount(z) <= budget_left) {
                    VertexSet s2 = s | z;
                    if (popcount(nb & ~s2) <= k1) {
                        int my_node = -1;
                        size_t mark = 0;
                        std::map<int, VertexSet> exc_mark;
                        if (witness) {
                            my_node = witness->node_count();
                            mark = witness->bags.size();
                            exc_mark = witness->leaf_exceptions;
                            witness->parent.push_back(parent_node);
                            witness->bags.push_back(nb);
                        }
                        bool all_ok = true;
                        VertexSet rest = comp & ~nb;
                        if (rest == 0) {
                            if (witness && s2) witness->leaf_exceptions[my_node] = s2;
                        } else {
                            for (VertexSet piece : g.components(rest)) {
                                if (!component_ok(nb, piece, s2, depth_left - gain,
                                                  budget_left - popcount(z), my_node)) {
                                    all_ok = false;
                                    break;
                                }
                            }
                        }
                        if (all_ok) result = true;
                        else if (witness) {
                            witness->parent.resize(mark);
                            witness->bags.resize(mark);
                            witness->leaf_exceptions = exc_mark;
                        }
                    }
                }
                if (z == commit_pool) break;
                z = (z - commit_pool) & commit_pool;
            }
        }
        if (!witness) memo[key] = result;
        return result;
    }
};

} // namespace detail

/// Does g admit a tree decomposition of class width (k1,k2) and depth <= q?
/// Returns a verified witness when one exists.
inline std::optional<RootedDecomposition> find_tree_decomposition(const Graph& g, int k1, int k2,
                                                                  int q) {
    RootedDecomposition d;
    d.kind = RootedDecomposition::Kind::tree;
    d.root = 0;
    d.parent.push_back(-1);
    d.bags.push_back(0); // empty root joining the components
    if (g.n == 0) return d;

    detail::TreeDecSearch search{g, k1, k2, q, {}, nullptr};
    for (VertexSet comp : g.components())
        if (!search.component_ok(0, comp, 0, q, k2, -1)) return std::nullopt;

    detail::TreeDecSearch builder{g, k1, k2, q, {}, &d};
    for (VertexSet comp : g.components())
        if (!builder.component_ok(0, comp, 0, q, k2, 0))
            throw std::logic_error("find_tree_decomposition: witness pass diverged");
    auto check = verify_decomposition(d, g, k1, k2, q);
    if (!check)
        throw std::logic_error("find_tree_decomposition: witness failed: " + check.diagnostic);
    return d;
}

// ---------------------------------------------------------------------------
// Exhaustive pebble forest covers.
// ---------------------------------------------------------------------------

/// Enumerates linear (k1,k2) covers of a connected graph (a single chain);
/// calls back with each valid cover until the callback returns false.
/// Returns true iff enumeration was stopped by the callback.
inline bool for_each_linear_cover_connected(const Graph& g, int k1, int k2,
                                            const std::function<bool(const ForestCover&)>& cb) {
    PebbleAlphabet alphabet(k1, k2);
    if (g.n == 0) {
        ForestCover fc;
        fc.variant = ForestCover::Variant::linear;
        fc.alphabet = alphabet;
        return !cb(fc);
    }
    std::vector<int> order;
    std::vector<bool> used_vertex(g.n, false);
    std::vector<int> pebble(g.n, -1);
    std::vector<bool> y_used(std::max(k2, 1), false);

    auto assign_pebbles = [&](auto&& self, size_t i) -> bool {
        if (i == order.size()) {
            ForestCover fc;
            fc.variant = ForestCover::Variant::linear;
            fc.alphabet = alphabet;
            fc.parent.assign(g.n, -1);
            fc.pebble.assign(g.n, 0);
            for (size_t j = 0; j < order.size(); ++j) {
                if (j > 0) fc.parent[order[j]] = order[j - 1];
                fc.pebble[order[j]] = pebble[order[j]];
            }
            return !cb(fc);
        }
        int v = order[i];
        // pebbles forbidden at chain position i: pebble of any earlier vertex
        // whose last edge reaches position i or beyond
        uint32_t forbidden = 0;
        for (size_t j = 0; j < i; ++j) {
            int u = order[j];
            bool open = false;
            for (size_t l = i; l < order.size() && !open; ++l)
                if (g.has_edge(u, order[l])) open = true;
            if (open) forbidden |= 1u << pebble[u];
        }
        for (int p = 0; p < alphabet.size(); ++p) {
            if (forbidden & (1u << p)) continue;
            if (alphabet.is_y(p)) {
                if (y_used[p - k1]) continue;
                y_used[p - k1] = true;
            }
            pebble[v] = p;
            if (self(self, i + 1)) return true;
            pebble[v] = -1;
            if (alphabet.is_y(p)) y_used[p - k1] = false;
        }
        return false;
    };
    auto build_order = [&](auto&& self, size_t i) -> bool {
        if (i == static_cast<size_t>(g.n)) return assign_pebbles(assign_pebbles, 0);
        for (int v = 0; v < g.n; ++v) {
            if (used_vertex[v]) continue;
            used_vertex[v] = true;
            order.push_back(v);
            if (self(self, i + 1)) return true;
            order.pop_back();
            used_vertex[v] = false;
        }
        return false;
    };
    return build_order(build_order, 0);
}

inline bool linear_cover_exists_connected(const Graph& g, int k1, int k2) {
    return for_each_linear_cover_connected(g, k1, k2, [](const ForestCover&) { return false; });
}

/// Enumerates all (k1,k2) pebble forest covers of g with height bound q; the
/// callback returning false stops enumeration (function then returns true).
/// With `linear_component`, restricts to disjoint chains (per-chain y reuse
/// is then exactly the ancestors condition).
inline bool for_each_forest_cover(const Graph& g, int k1, int k2, std::optional<int> q,
                                  bool linear_component,
                                  const std::function<bool(const ForestCover&)>& cb) {
    PebbleAlphabet alphabet(k1, k2);
    int n = g.n;
    ForestCover proto;
    proto.variant =
        linear_component ? ForestCover::Variant::linear_component : ForestCover::Variant::tree;
    proto.alphabet = alphabet;
    if (n == 0) return !cb(proto);

    std::vector<int> parent(n, -1);
    std::vector<int> pebble(n, -1);

    auto try_pebbles = [&](const ForestCover& shape) -> bool {
        // root-down order
        std::vector<std::vector<int>> ch(n);
        std::vector<int> order, stack;
        for (int v = 0; v < n; ++v)
            shape.parent[v] == -1 ? stack.push_back(v) : (void)ch[shape.parent[v]].push_back(v);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int c : ch[v]) stack.push_back(c);
        }
        std::function<bool(size_t)> rec = [&](size_t i) -> bool {
            if (i == order.size()) {
                ForestCover out = shape;
                out.pebble.assign(pebble.begin(), pebble.end());
                return !cb(out);
            }
            int w = order[i];
            uint32_t forbidden = 0;
            for (int u = shape.parent[w]; u != -1; u = shape.parent[u]) {
                bool edge_into = false;
                for (int z = 0; z < n && !edge_into; ++z)
                    if (g.has_edge(u, z) && shape.is_ancestor(w, z)) edge_into = true;
                if (edge_into || alphabet.is_y(pebble[u])) forbidden |= 1u << pebble[u];
            }
            for (int p = 0; p < alphabet.size(); ++p) {
                if (forbidden & (1u << p)) continue;
                pebble[w] = p;
                if (rec(i + 1)) return true;
                pebble[w] = -1;
            }
            return false;
        };
        return rec(0);
    };

    // enumerate all parent arrays, filter to forests with comparable edges
    std::function<bool(int)> assign = [&](int v) -> bool {
        if (v == n) {
            ForestCover shape = proto;
            shape.parent = parent;
            for (int w = 0; w < n; ++w) { // acyclicity
                int steps = 0, u = w;
                while (u != -1) {
                    u = shape.parent[u];
                    if (++steps > n) return false;
                }
            }
            if (q && shape.height() > *q) return false;
            if (linear_component) {
                std::vector<int> cc(n, 0);
                for (int w = 0; w < n; ++w)
                    if (parent[w] != -1) ++cc[parent[w]];
                for (int w = 0; w < n; ++w)
                    if (cc[w] > 1) return false;
            }
            for (auto [a, b] : g.edges())
                if (!shape.is_ancestor(a, b) && !shape.is_ancestor(b, a)) return false;
            return try_pebbles(shape);
        }
        for (int p = -1; p < n; ++p) {
            if (p == v) continue;
            parent[v] = p;
            if (assign(v + 1)) return true;
        }
        parent[v] = -1;
        return false;
    };
    return assign(0);
}

inline bool forest_cover_exists(const Graph& g, int k1, int k2, std::optional<int> q) {
    return for_each_forest_cover(g, k1, k2, q, false, [](const ForestCover&) { return false; });
}

inline bool for_each_linear_component_cover(const Graph& g, int k1, int k2,
                                            const std::function<bool(const ForestCover&)>& cb) {
    return for_each_forest_cover(g, k1, k2, std::nullopt, true, cb);
}

} // namespace homlab
