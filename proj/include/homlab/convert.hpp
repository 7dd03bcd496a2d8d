#pragma once

#include <functional>
#include <map>
#include <set>

#include "decomp.hpp"
#include "graph.hpp"
#include "search.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Nice form.
// ---------------------------------------------------------------------------

namespace detail {

struct Shape { // structural part of a decomposition under rebuild
    RootedDecomposition::Kind kind;
    int root;
    std::vector<int> parent;
    std::vector<VertexSet> bags;
};

inline Shape shape_of(const RootedDecomposition& d) {
    return {d.kind, d.root, d.parent, d.bags};
}

inline std::vector<std::vector<int>> shape_children(const Shape& s) {
    std::vector<std::vector<int>> ch(s.bags.size());
    for (size_t v = 0; v < s.bags.size(); ++v)
        if (s.parent[v] >= 0) ch[s.parent[v]].push_back(static_cast<int>(v));
    return ch;
}

/// Contract adjacent comparable bags until none remain.
inline void contract_redundant(Shape& s) {
    bool changed = true;
    while (changed) {
        changed = false;
        auto ch = shape_children(s);
        for (size_t c = 0; c < s.bags.size() && !changed; ++c) {
            int p = s.parent[c];
            if (p < 0) continue;
            if ((s.bags[c] & ~s.bags[p]) == 0) {
                // child bag inside parent: splice child out
                for (int cc : ch[c]) s.parent[cc] = p;
                s.parent[c] = -2; // mark dead
                changed = true;
            } else if ((s.bags[p] & ~s.bags[c]) == 0 && ch[p].size() == 1) {
                // parent inside its single child: splice parent out
                if (s.parent[p] == -1) {
                    s.root = static_cast<int>(c);
                    s.parent[c] = -1;
                } else {
                    s.parent[c] = s.parent[p];
                }
                s.parent[p] = -2;
                changed = true;
            }
        }
        if (changed) { // compact dead nodes
            std::vector<int> remap(s.bags.size(), -1);
            Shape t;
            t.kind = s.kind;
            for (size_t v = 0; v < s.bags.size(); ++v) {
                if (s.parent[v] == -2) continue;
                remap[v] = static_cast<int>(t.bags.size());
                t.bags.push_back(s.bags[v]);
                t.parent.push_back(s.parent[v]);
            }
            for (int& p : t.parent)
                if (p >= 0) p = remap[p];
            t.root = remap[s.root];
            s = std::move(t);
        }
    }
}

/// Rebuild as a nice decomposition: empty root bag, one-vertex deltas,
/// join nodes with equal bags. Unions along branches are unchanged.
inline Shape nicify(const Shape& input) {
    Shape s = input;
    contract_redundant(s);
    Shape out;
    out.kind = s.kind;
    auto add_node = [&](VertexSet bag, int parent) {
        out.bags.push_back(bag);
        out.parent.push_back(parent);
        return static_cast<int>(out.bags.size()) - 1;
    };
    // chain from `from` morphing bag a to bag b one vertex at a time
    // (removals first); returns the last node of the chain
    auto morph = [&](int from, VertexSet a, VertexSet b) {
        VertexSet cur = a;
        int at = from;
        VertexSet rem = a & ~b;
        while (rem) {
            int v = lowest_bit(rem);
            rem &= rem - 1;
            cur &= ~bit(v);
            at = add_node(cur, at);
        }
        VertexSet add = b & ~a;
        while (add) {
            int v = lowest_bit(add);
            add &= add - 1;
            cur |= bit(v);
            at = add_node(cur, at);
        }
        return at;
    };
    auto ch = shape_children(s);
    std::function<void(int, int)> build = [&](int t, int attach) {
        // attach: node in `out` whose bag equals s.bags[t] and which
        // represents t; create children below it
        const auto& kids = ch[t];
        if (kids.empty()) return;
        if (kids.size() == 1) {
            int last = morph(attach, s.bags[t], s.bags[kids[0]]);
            build(kids[0], last);
            return;
        }
        // binary join tree over copies of this bag; each slot morphs to a child
        std::function<void(int, int, int)> split = [&](int node, int lo, int hi) {
            if (hi - lo == 1) {
                int last = morph(node, s.bags[t], s.bags[kids[lo]]);
                build(kids[lo], last);
                return;
            }
            int mid = (lo + hi) / 2;
            int left = add_node(s.bags[t], node);
            int right = add_node(s.bags[t], node);
            split(left, lo, mid);
            split(right, mid, hi);
        };
        split(attach, 0, static_cast<int>(kids.size()));
    };
    out.root = add_node(0, -1);
    int start = morph(out.root, 0, s.bags[s.root]);
    build(s.root, start);
    return out;
}

inline VertexSet union_to_node(const Shape& s, int t) {
    VertexSet u = 0;
    for (int v = t; v != -1; v = s.parent[v]) u |= s.bags[v];
    return u;
}

/// Extend every Y-vertex's occurrence downward to all leaves below its top
/// occurrence (exception persistence).
inline void persistence_extend(Shape& s, VertexSet y) {
    auto ch = shape_children(s);
    for (int v = 0; v < 64; ++v) {
        if (!(y & bit(v))) continue;
        int top = -1;
        std::vector<int> depth(s.bags.size(), 0);
        std::vector<int> order;
        std::vector<int> stack{s.root};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            order.push_back(t);
            for (int c : ch[t]) stack.push_back(c);
        }
        for (int t : order)
            depth[t] = t == s.root ? 0 : depth[s.parent[t]] + 1;
        for (int t : order)
            if ((s.bags[t] & bit(v)) && (top == -1 || depth[t] < depth[top])) top = t;
        if (top == -1) continue;
        // add v to the whole subtree below top
        std::vector<int> sub{top};
        while (!sub.empty()) {
            int t = sub.back();
            sub.pop_back();
            s.bags[t] |= bit(v);
            for (int c : ch[t]) sub.push_back(c);
        }
    }
}

inline bool is_nice(const Shape& s) {
    auto ch = shape_children(s);
    for (size_t t = 0; t < s.bags.size(); ++t) {
        if (ch[t].empty()) continue;
        if (ch[t].size() == 1) {
            VertexSet a = s.bags[t], b = s.bags[ch[t][0]];
            int d = popcount(a ^ b);
            if (d != 1 || (popcount(a & ~b) != 0 && popcount(b & ~a) != 0)) return false;
        } else if (ch[t].size() == 2) {
            if (s.bags[ch[t][0]] != s.bags[t] || s.bags[ch[t][1]] != s.bags[t]) return false;
        } else {
            return false;
        }
    }
    return true;
}

/// Y-vertices must persist: the occurrence of each Y-vertex is exactly the
/// subtree below its top occurrence.
inline bool is_persistent(const Shape& s, VertexSet y) {
    auto ch = shape_children(s);
    for (int v = 0; v < 64; ++v) {
        if (!(y & bit(v))) continue;
        bool seen = false;
        std::function<bool(int, bool)> walk = [&](int t, bool above_has) -> bool {
            bool here = (s.bags[t] & bit(v)) != 0;
            if (here) seen = true;
            if (above_has && !here) return false; // dropped, must not reappear below
            for (int c : ch[t])
                if (!walk(c, here)) return false;
            return true;
        };
        if (!walk(s.root, false)) return false;
        (void)seen;
    }
    return true;
}

inline RootedDecomposition assemble(const Shape& s, const Graph& g, VertexSet y,
                                    bool component_mode) {
    RootedDecomposition d;
    d.kind = s.kind;
    d.root = s.root;
    d.parent = s.parent;
    d.bags = s.bags;
    d.component_mode = component_mode;
    if (component_mode) {
        for (VertexSet c : g.components()) d.component_exceptions.push_back(y & c);
    } else {
        for (int leaf : d.leaves()) {
            VertexSet u = union_to_node(s, leaf);
            if (y & u) d.leaf_exceptions[leaf] = y & u;
        }
    }
    return d;
}

} // namespace detail

struct WidthParams {
    int k1 = 0;
    int k2 = 0;
    int depth = 0;
};

inline RootedDecomposition cover_to_decomposition(const ForestCover& fc, const Graph& g);

/// The tightest class-width parameters certified by d's own exception sets.
inline WidthParams measure_width(const RootedDecomposition& d, const Graph& g) {
    auto base = verify_decomposition(d, g, g.n, g.n);
    if (!base) throw std::invalid_argument("measure_width: invalid decomposition: " + base.diagnostic);
    WidthParams w;
    w.depth = base.depth;
    if (d.component_mode) {
        VertexSet s_all = 0;
        for (VertexSet s : d.component_exceptions) {
            w.k2 = std::max(w.k2, popcount(s));
            s_all |= s;
        }
        for (VertexSet b : d.bags) w.k1 = std::max(w.k1, popcount(b & ~s_all));
    } else {
        for (int leaf : d.leaves()) {
            VertexSet s = d.exceptions_for_leaf(leaf);
            w.k2 = std::max(w.k2, popcount(s));
            for (int t = leaf;; t = d.parent[t]) {
                w.k1 = std::max(w.k1, popcount(d.bags[t] & ~s));
                if (t == d.root) break;
            }
        }
    }
    return w;
}

/// Nice decomposition of equal width and depth whose exception vertices
/// persist downward. Searches small global exception designations first and
/// falls back to rebuilding from an exhaustive cover search.
inline RootedDecomposition make_nice(const RootedDecomposition& d, const Graph& g) {
    WidthParams w = measure_width(d, g);
    detail::Shape nice = detail::nicify(detail::shape_of(d));

    VertexSet y0 = 0;
    for (auto& [leaf, s] : d.leaf_exceptions) y0 |= s;
    for (VertexSet s : d.component_exceptions) y0 |= s;

    std::vector<VertexSet> candidates{y0};
    if (g.n <= 16) {
        VertexSet all = g.all_vertices();
        VertexSet s = 0;
        while (true) {
            if (s != y0) candidates.push_back(s);
            if (s == all) break;
            s = (s - all) & all;
        }
        std::stable_sort(candidates.begin() + 1, candidates.end(),
                         [](VertexSet a, VertexSet b) { return popcount(a) < popcount(b); });
    }
    for (VertexSet y : candidates) {
        detail::Shape ext = nice;
        detail::persistence_extend(ext, y);
        for (int rounds = 0; rounds < 4; ++rounds) {
            ext = detail::nicify(ext);
            if (detail::is_persistent(ext, y)) break;
            detail::persistence_extend(ext, y);
        }
        if (!detail::is_nice(ext) || !detail::is_persistent(ext, y)) continue;
        RootedDecomposition out = detail::assemble(ext, g, y, d.component_mode);
        auto check = verify_decomposition(out, g, w.k1, w.k2, w.depth);
        if (check) return out;
    }
    // fallback: rebuild from an exhaustive cover of the same parameters
    ForestCover found;
    bool have = false;
    bool path_kind = d.kind == RootedDecomposition::Kind::path;
    auto grab = [&](const ForestCover& fc) {
        if (path_kind && !d.component_mode) {
            // leaf-mode path width needs a single global exception budget
            int ys = 0;
            for (int v = 0; v < g.n; ++v)
                if (fc.alphabet.is_y(fc.pebble[v])) ++ys;
            if (ys > w.k2) return true; // keep searching
        }
        found = fc;
        return false;
    };
    if (path_kind && !d.component_mode && g.connected()) {
        have = for_each_linear_cover_connected(g, std::max(w.k1, 1), w.k2, grab);
    } else {
        have = for_each_forest_cover(g, std::max(w.k1, 1), w.k2,
                                     path_kind ? std::optional<int>() : std::optional<int>(w.depth),
                                     path_kind, grab);
    }
    if (!have) throw std::logic_error("make_nice: no equivalent nice decomposition found");
    VertexSet y = 0;
    for (int v = 0; v < g.n; ++v)
        if (found.alphabet.is_y(found.pebble[v])) y |= bit(v);
    // cover-derived bags are persistent by construction; nicify preserves it
    RootedDecomposition raw = cover_to_decomposition(found, g);
    detail::Shape ext = detail::nicify(detail::shape_of(raw));
    if (!detail::is_persistent(ext, y))
        throw std::logic_error("make_nice: persistence lost in fallback");
    RootedDecomposition out = detail::assemble(ext, g, y, d.component_mode);
    auto check = verify_decomposition(out, g, w.k1, w.k2, w.depth);
    if (!check) throw std::logic_error("make_nice: fallback failed: " + check.diagnostic);
    return out;
}

// ---------------------------------------------------------------------------
// Decomposition <-> forest cover.
// ---------------------------------------------------------------------------

/// First-occurrence node of each vertex in a nice decomposition (unique and
/// injective because bags change by one vertex per step).
inline std::vector<int> first_occurrence(const RootedDecomposition& d, const Graph& g) {
    std::vector<int> tau(g.n, -1);
    for (int t : detail::topo_order(d)) { // root-down order
        VertexSet fresh = d.bags[t] & (d.parent[t] == -1 ? d.bags[t] : ~d.bags[d.parent[t]]);
        // in a nice decomposition with empty root, fresh has at most one bit
        while (fresh) {
            int v = lowest_bit(fresh);
            fresh &= fresh - 1;
            if (tau[v] == -1) tau[v] = t;
        }
    }
    return tau;
}

/// Nice, persistent decomposition -> pebble forest cover with matching
/// parameters. Path kind yields a linear cover (component variant for
/// component-mode inputs), tree kind a forest cover of equal depth.
inline ForestCover decomposition_to_cover(const RootedDecomposition& d_in, const Graph& g, int k1,
                                          int k2) {
    RootedDecomposition d = make_nice(d_in, g);
    std::vector<int> tau = first_occurrence(d, g);
    for (int v = 0; v < g.n; ++v)
        if (tau[v] == -1) throw std::logic_error("decomposition_to_cover: uncovered vertex");
    VertexSet y_set = 0;
    for (auto& [leaf, s] : d.leaf_exceptions) y_set |= s;
    for (VertexSet s : d.component_exceptions) y_set |= s;

    std::vector<int> node_depth(d.node_count(), 0);
    for (int t : detail::topo_order(d))
        node_depth[t] = t == d.root ? 0 : node_depth[d.parent[t]] + 1;
    std::vector<int> vertex_of_node(d.node_count(), -1);
    for (int v = 0; v < g.n; ++v) vertex_of_node[tau[v]] = v;

    ForestCover fc;
    fc.alphabet = PebbleAlphabet(k1, k2);
    bool path_kind = d.kind == RootedDecomposition::Kind::path;
    fc.variant = !path_kind ? ForestCover::Variant::tree
                 : d.component_mode ? ForestCover::Variant::linear_component
                                    : ForestCover::Variant::linear;
    fc.parent.assign(g.n, -1);
    fc.pebble.assign(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        for (int t = d.parent[tau[v]]; t != -1; t = d.parent[t]) {
            if (vertex_of_node[t] != -1) { fc.parent[v] = vertex_of_node[t]; break; }
        }
    }
    // for linear covers the chains follow the path order but split per
    // component of g (the cover forest must not link separate components)
    if (path_kind) {
        std::vector<int> order(g.n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return node_depth[tau[a]] < node_depth[tau[b]]; });
        std::map<VertexSet, int> last_in_comp;
        for (int v : order) {
            VertexSet comp = g.component_of(v, g.all_vertices());
            auto it = last_in_comp.find(comp);
            fc.parent[v] = it == last_in_comp.end() ? -1 : it->second;
            last_in_comp[comp] = v;
        }
    }
    // pebbles root-down
    {
        std::vector<int> order(g.n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return node_depth[tau[a]] < node_depth[tau[b]]; });
        std::map<VertexSet, int> y_next_in_comp; // component -> next y index (component mode)
        int y_next = 0;
        for (int v : order) {
            VertexSet avoid_bag = d.bags[tau[v]] & ~bit(v);
            uint32_t used = 0;
            VertexSet it = avoid_bag;
            while (it) {
                int u = lowest_bit(it);
                it &= it - 1;
                if (fc.pebble[u] >= 0) used |= 1u << fc.pebble[u];
            }
            if (y_set & bit(v)) {
                int idx;
                if (!path_kind) {
                    // tree covers reuse non-reusable pebbles across branches:
                    // take the least y free in the introducing bag
                    idx = 0;
                    while (idx < k2 && (used & (1u << (k1 + idx)))) ++idx;
                } else if (d.component_mode) {
                    VertexSet comp = g.component_of(v, g.all_vertices());
                    idx = y_next_in_comp[comp]++;
                } else {
                    idx = y_next++;
                }
                if (idx >= k2) throw std::logic_error("decomposition_to_cover: y budget exceeded");
                fc.pebble[v] = k1 + idx;
            } else {
                int p = 0;
                while (p < k1 && (used & (1u << p))) ++p;
                if (p == k1) throw std::logic_error("decomposition_to_cover: x budget exceeded");
                fc.pebble[v] = p;
            }
        }
    }
    auto check = verify_forest_cover(fc, g);
    if (!check) throw std::logic_error("decomposition_to_cover: output invalid: " + check.diagnostic);
    return fc;
}

/// Forest cover -> decomposition with bags read off the pebbling. Linear
/// covers yield path decompositions, general covers tree decompositions
/// (with an empty root above the forest roots).
inline RootedDecomposition cover_to_decomposition(const ForestCover& fc, const Graph& g) {
    auto check_in = verify_forest_cover(fc, g);
    if (!check_in) throw std::invalid_argument("cover_to_decomposition: invalid cover: " +
                                               check_in.diagnostic);
    auto bag_at = [&](int v) {
        VertexSet b = bit(v);
        for (int u = fc.parent[v]; u != -1; u = fc.parent[u]) {
            bool blocked = false;
            for (int w = v; w != u; w = fc.parent[w])
                if (fc.pebble[w] == fc.pebble[u]) { blocked = true; break; }
            if (!blocked) b |= bit(u);
        }
        return b;
    };
    RootedDecomposition d;
    bool linear = fc.variant != ForestCover::Variant::tree;
    d.kind = linear ? RootedDecomposition::Kind::path : RootedDecomposition::Kind::tree;
    if (linear) {
        // concatenate the chains
        std::vector<int> order;
        std::vector<std::vector<int>> ch(g.n);
        std::vector<int> roots;
        for (int v = 0; v < g.n; ++v)
            fc.parent[v] == -1 ? roots.push_back(v) : (void)ch[fc.parent[v]].push_back(v);
        for (int r : roots) {
            int v = r;
            while (true) {
                order.push_back(v);
                if (ch[v].empty()) break;
                v = ch[v][0];
            }
        }
        if (order.empty()) {
            d.bags = {0};
            d.parent = {-1};
            d.root = 0;
            return d;
        }
        for (size_t i = 0; i < order.size(); ++i) {
            d.bags.push_back(bag_at(order[i]));
            d.parent.push_back(static_cast<int>(i) - 1);
        }
        d.root = 0;
        VertexSet ys = 0;
        for (int v = 0; v < g.n; ++v)
            if (fc.alphabet.is_y(fc.pebble[v])) ys |= bit(v);
        if (fc.variant == ForestCover::Variant::linear) {
            if (ys) d.leaf_exceptions[d.node_count() - 1] = ys;
        } else {
            d.component_mode = true;
            for (VertexSet c : g.components()) d.component_exceptions.push_back(ys & c);
        }
    } else {
        d.bags.push_back(0); // empty root
        d.parent.push_back(-1);
        d.root = 0;
        std::vector<int> node_of(g.n, -1);
        std::vector<std::vector<int>> ch(g.n);
        std::vector<int> stack;
        for (int v = 0; v < g.n; ++v)
            fc.parent[v] == -1 ? stack.push_back(v) : (void)ch[fc.parent[v]].push_back(v);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            node_of[v] = d.node_count();
            d.bags.push_back(bag_at(v));
            d.parent.push_back(fc.parent[v] == -1 ? 0 : node_of[fc.parent[v]]);
            for (int c : ch[v]) stack.push_back(c);
        }
        for (int leaf : d.leaves()) {
            // leaf node corresponds to a vertex; collect y-pebbled ancestors
            int v = -1;
            for (int u = 0; u < g.n; ++u)
                if (node_of[u] == leaf) v = u;
            if (v == -1) continue; // the empty root as a leaf (edgeless graph)
            VertexSet s = 0;
            for (int u = v; u != -1; u = fc.parent[u])
                if (fc.alphabet.is_y(fc.pebble[u])) s |= bit(u);
            if (s) d.leaf_exceptions[leaf] = s;
        }
    }
    auto check = verify_decomposition(d, g, fc.alphabet.k1, fc.alphabet.k2);
    if (!check)
        throw std::logic_error("cover_to_decomposition: output invalid: " + check.diagnostic);
    return d;
}

// ---------------------------------------------------------------------------
// Decomposition <-> construction tree.
// ---------------------------------------------------------------------------

struct ConstructionWithMap {
    ConstructionTree ct;
    // per construction node: payload vertex -> vertex of the decomposed graph
    std::vector<std::vector<int>> to_graph;
};

/// Nice, persistent decomposition of g -> construction tree whose root
/// payload is (an isomorphic copy of) g. Forget nodes become eliminations,
/// introduce nodes product-with-leaf nodes, join nodes products.
inline ConstructionWithMap decomposition_to_construction(const RootedDecomposition& d_in,
                                                         const Graph& g, int k1, int k2) {
    RootedDecomposition d = make_nice(d_in, g);
    PebbleAlphabet alphabet(k1, k2);
    VertexSet y_set = 0;
    for (auto& [leaf, s] : d.leaf_exceptions) y_set |= s;
    for (VertexSet s : d.component_exceptions) y_set |= s;

    // label assignment: entering vertex picks the least free pebble of its
    // block relative to the parent bag
    std::vector<int> label_of(g.n, -1);
    auto ch = d.children();
    std::function<void(int)> assign = [&](int t) {
        VertexSet fresh = t == d.root ? d.bags[t] : d.bags[t] & ~d.bags[d.parent[t]];
        while (fresh) {
            int v = lowest_bit(fresh);
            fresh &= fresh - 1;
            VertexSet bag_ref = t == d.root ? (d.bags[t] & ~bit(v)) : d.bags[d.parent[t]];
            uint32_t used = 0;
            VertexSet it = bag_ref;
            while (it) {
                int u = lowest_bit(it);
                it &= it - 1;
                if (label_of[u] >= 0) used |= 1u << label_of[u];
            }
            int p = -1;
            if (y_set & bit(v)) {
                for (int cand = k1; cand < k1 + k2 && p == -1; ++cand)
                    if (!(used & (1u << cand))) p = cand;
            } else {
                for (int cand = 0; cand < k1 && p == -1; ++cand)
                    if (!(used & (1u << cand))) p = cand;
            }
            if (p == -1)
                throw std::logic_error("decomposition_to_construction: pebble budget exceeded");
            label_of[v] = p;
        }
        for (int c : ch[t]) assign(c);
    };
    assign(d.root);

    ConstructionWithMap out;
    auto make_leaf_payload = [&](VertexSet bag) {
        std::vector<int> verts;
        for (int v = 0; v < g.n; ++v)
            if (bag & bit(v)) verts.push_back(v);
        LabeledGraph lg(Graph(static_cast<int>(verts.size())), alphabet);
        for (size_t i = 0; i < verts.size(); ++i)
            for (size_t j = i + 1; j < verts.size(); ++j)
                if (g.has_edge(verts[i], verts[j]))
                    lg.graph.add_edge(static_cast<int>(i), static_cast<int>(j));
        for (size_t i = 0; i < verts.size(); ++i) lg.labels[label_of[verts[i]]] = static_cast<int>(i);
        return std::make_pair(lg, verts);
    };

    // build bottom-up; returns construction node for the subtree of t
    std::function<int(int)> build = [&](int t) -> int {
        const auto& kids = ch[t];
        if (kids.empty()) {
            auto [payload, verts] = make_leaf_payload(d.bags[t]);
            int id = ct_add_leaf(out.ct, payload);
            out.to_graph.resize(out.ct.nodes.size());
            out.to_graph[id] = verts;
            return id;
        }
        if (kids.size() == 1) {
            int c = kids[0];
            int child_id = build(c);
            if ((d.bags[c] & ~d.bags[t]) != 0) {
                // forget node: the vertex entering below loses its label here
                int v = lowest_bit(d.bags[c] & ~d.bags[t]);
                int id = ct_add_elim(out.ct, child_id, label_of[v]);
                out.to_graph.resize(out.ct.nodes.size());
                out.to_graph[id] = out.to_graph[child_id];
                return id;
            }
            // introduce node: product with the fully labeled bag graph
            auto [payload, verts] = make_leaf_payload(d.bags[t]);
            int leaf_id = ct_add_leaf(out.ct, payload);
            out.to_graph.resize(out.ct.nodes.size());
            out.to_graph[leaf_id] = verts;
            int id = ct_add_product(out.ct, {leaf_id, child_id});
            out.to_graph.resize(out.ct.nodes.size());
            const auto& node = out.ct.nodes[id];
            out.to_graph[id].assign(node.payload.graph.n, -1);
            for (int v = 0; v < out.ct.nodes[leaf_id].payload.graph.n; ++v)
                out.to_graph[id][node.embeddings[0][v]] = out.to_graph[leaf_id][v];
            for (int v = 0; v < out.ct.nodes[child_id].payload.graph.n; ++v)
                out.to_graph[id][node.embeddings[1][v]] = out.to_graph[child_id][v];
            return id;
        }
        // join node
        std::vector<int> child_ids;
        for (int c : kids) child_ids.push_back(build(c));
        int id = ct_add_product(out.ct, child_ids);
        out.to_graph.resize(out.ct.nodes.size());
        const auto& node = out.ct.nodes[id];
        out.to_graph[id].assign(node.payload.graph.n, -1);
        for (size_t i = 0; i < child_ids.size(); ++i)
            for (int v = 0; v < out.ct.nodes[child_ids[i]].payload.graph.n; ++v)
                out.to_graph[id][node.embeddings[i][v]] = out.to_graph[child_ids[i]][v];
        return id;
    };
    out.ct.root = build(d.root);
    out.ct.caterpillar = d.kind == RootedDecomposition::Kind::path;
    auto check = verify_construction_tree(out.ct, nullptr, k1, k2);
    if (!check)
        throw std::logic_error("decomposition_to_construction: invalid output: " +
                               check.diagnostic);
    // the root payload must be g up to the tracked correspondence
    const auto& root_payload = out.ct.nodes[out.ct.root].payload;
    if (root_payload.graph.n != g.n)
        throw std::logic_error("decomposition_to_construction: root size mismatch");
    for (auto [u, v] : root_payload.graph.edges())
        if (!g.has_edge(out.to_graph[out.ct.root][u], out.to_graph[out.ct.root][v]))
            throw std::logic_error("decomposition_to_construction: root edge mismatch");
    if (root_payload.graph.edge_count() != g.edge_count())
        throw std::logic_error("decomposition_to_construction: root edge count mismatch");
    return out;
}

/// Construction tree -> decomposition of the root payload graph. Caterpillars
/// yield path decompositions over the central path; general trees yield tree
/// decompositions over all nodes.
inline RootedDecomposition construction_to_decomposition(const ConstructionTree& ct, int k1,
                                                         int k2) {
    auto check_in = verify_construction_tree(ct, nullptr, k1, k2);
    if (!check_in)
        throw std::invalid_argument("construction_to_decomposition: invalid input: " +
                                    check_in.diagnostic);
    const auto& alphabet = ct.nodes[ct.root].payload.alphabet;
    int m = static_cast<int>(ct.nodes.size());
    // payload vertex -> root payload vertex, composed along embeddings
    std::vector<std::vector<int>> to_root(m);
    std::function<void(int)> down = [&](int t) {
        const auto& node = ct.nodes[t];
        for (size_t i = 0; i < node.children.size(); ++i) {
            int c = node.children[i];
            const auto& child = ct.nodes[c];
            to_root[c].assign(child.payload.graph.n, -1);
            for (int v = 0; v < child.payload.graph.n; ++v) {
                int up = node.tag == ConstructionTree::Node::Tag::product ? node.embeddings[i][v]
                                                                          : v;
                to_root[c][v] = to_root[t][up];
            }
            down(c);
        }
    };
    to_root[ct.root].resize(ct.nodes[ct.root].payload.graph.n);
    std::iota(to_root[ct.root].begin(), to_root[ct.root].end(), 0);
    down(ct.root);

    auto bag_of = [&](int t) {
        VertexSet b = 0;
        for (int p : ct.nodes[t].payload.label_set())
            b |= bit(to_root[t][ct.nodes[t].payload.labels[p]]);
        return b;
    };
    auto y_vertices_of = [&](int t) {
        VertexSet b = 0;
        for (int p : ct.nodes[t].payload.label_set())
            if (alphabet.is_y(p)) b |= bit(to_root[t][ct.nodes[t].payload.labels[p]]);
        return b;
    };

    RootedDecomposition d;
    if (ct.caterpillar) {
        d.kind = RootedDecomposition::Kind::path;
        // central path: from the root, follow the unique non-leaf child
        std::vector<int> path{ct.root};
        while (true) {
            const auto& node = ct.nodes[path.back()];
            int next = -1;
            for (int c : node.children)
                if (ct.nodes[c].tag != ConstructionTree::Node::Tag::leaf) next = c;
            if (next == -1 && !node.children.empty()) next = node.children[0];
            if (next == -1) break;
            path.push_back(next);
        }
        VertexSet ys = 0;
        for (size_t i = 0; i < path.size(); ++i) {
            d.bags.push_back(bag_of(path[i]));
            d.parent.push_back(static_cast<int>(i) - 1);
            ys |= y_vertices_of(path[i]);
        }
        d.root = 0;
        if (ys) d.leaf_exceptions[d.node_count() - 1] = ys;
    } else {
        d.kind = RootedDecomposition::Kind::tree;
        d.parent.assign(m, -1);
        d.bags.assign(m, 0);
        std::function<void(int)> walk = [&](int t) {
            d.bags[t] = bag_of(t);
            for (int c : ct.nodes[t].children) {
                d.parent[c] = t;
                walk(c);
            }
        };
        d.root = ct.root;
        walk(ct.root);
        for (int leaf : d.leaves()) {
            VertexSet s = 0;
            for (int t = leaf; t != -1;) {
                s |= y_vertices_of(t);
                bool found = false;
                for (int p = 0; p < m && !found; ++p)
                    if (std::find(ct.nodes[p].children.begin(), ct.nodes[p].children.end(), t) !=
                        ct.nodes[p].children.end()) {
                        t = p;
                        found = true;
                    }
                if (!found) t = -1;
            }
            if (s) d.leaf_exceptions[leaf] = s;
        }
    }
    const Graph& target = ct.nodes[ct.root].payload.graph;
    auto check = verify_decomposition(d, target, k1, k2);
    if (!check)
        throw std::logic_error("construction_to_decomposition: output invalid: " +
                               check.diagnostic);
    return d;
}

} // namespace homlab
