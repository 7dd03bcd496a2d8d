#pragma once

#include <functional>
#include <map>
#include <set>

#include "bigint.hpp"
#include "graph.hpp"
#include "homcount.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Decomposition objects.
//
// Width parameters are taken in the class sense throughout: a decomposition
// certifies membership in P^(k1,k2) / T^(k1,k2)_q when every bag minus the
// branch's exception set has at most k1 vertices and every exception set has
// at most k2. (The literature's width is one less; the offset lives here and
// nowhere else.)
// ---------------------------------------------------------------------------

struct RootedDecomposition {
    enum class Kind { path, tree };
    Kind kind = Kind::tree;
    int root = 0;
    std::vector<int> parent;      // node -> parent node, -1 at root
    std::vector<VertexSet> bags;  // node -> bag

    // width mode: per-leaf exception sets (default), or per-component
    // exception sets (component width, path decompositions only)
    bool component_mode = false;
    std::map<int, VertexSet> leaf_exceptions;   // leaf node -> S_leaf
    std::vector<VertexSet> component_exceptions;

    int node_count() const { return static_cast<int>(bags.size()); }
    std::vector<std::vector<int>> children() const {
        std::vector<std::vector<int>> ch(node_count());
        for (int v = 0; v < node_count(); ++v)
            if (parent[v] >= 0) ch[parent[v]].push_back(v);
        return ch;
    }
    std::vector<int> leaves() const {
        std::vector<int> ls;
        auto ch = children();
        for (int v = 0; v < node_count(); ++v)
            if (ch[v].empty()) ls.push_back(v);
        return ls;
    }
    VertexSet exceptions_for_leaf(int leaf) const {
        auto it = leaf_exceptions.find(leaf);
        return it == leaf_exceptions.end() ? 0 : it->second;
    }
};

struct VerifyResult {
    bool ok = true;
    int depth = 0; // measured depth (max union of bags along a branch)
    std::string diagnostic;

    static VerifyResult fail(std::string why) { return {false, 0, std::move(why)}; }
    explicit operator bool() const { return ok; }
};

namespace detail {

inline bool tree_shape_ok(const RootedDecomposition& d, std::string& why) {
    int m = d.node_count();
    if (m == 0) { why = "no nodes"; return false; }
    if (d.root < 0 || d.root >= m || d.parent.size() != d.bags.size()) {
        why = "malformed root/parent";
        return false;
    }
    if (d.parent[d.root] != -1) { why = "root has a parent"; return false; }
    // every node must reach the root without cycles
    for (int v = 0; v < m; ++v) {
        int steps = 0, u = v;
        while (u != d.root) {
            u = d.parent[u];
            if (u < 0 || u >= m || ++steps > m) { why = "cycle or dangling parent"; return false; }
        }
    }
    if (d.kind == RootedDecomposition::Kind::path) {
        auto ch = d.children();
        for (int v = 0; v < m; ++v)
            if (ch[v].size() > 1) { why = "path decomposition branches"; return false; }
    }
    return true;
}

inline std::vector<int> topo_order(const RootedDecomposition& d) {
    std::vector<int> order;
    std::vector<std::vector<int>> ch = d.children();
    std::vector<int> stack{d.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (int c : ch[v]) stack.push_back(c);
    }
    return order;
}

} // namespace detail

/// Checks that d is a rooted tree/path decomposition of g certifying class
/// width (k1,k2), and depth <= q when q is given. Diagnostics name the first
/// violated condition.
inline VerifyResult verify_decomposition(const RootedDecomposition& d, const Graph& g, int k1,
                                         int k2, std::optional<int> q = std::nullopt) {
    std::string why;
    if (!detail::tree_shape_ok(d, why)) return VerifyResult::fail(why);
    int m = d.node_count();
    VertexSet all = 0;
    for (int t = 0; t < m; ++t) {
        if (d.bags[t] & ~g.all_vertices()) return VerifyResult::fail("bag has out-of-range vertex");
        all |= d.bags[t];
    }
    if (all != g.all_vertices()) return VerifyResult::fail("bags do not cover V(G)");
    for (auto [u, v] : g.edges()) {
        bool covered = false;
        for (int t = 0; t < m && !covered; ++t)
            if ((d.bags[t] & bit(u)) && (d.bags[t] & bit(v))) covered = true;
        if (!covered)
            return VerifyResult::fail("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                      "} in no bag");
    }
    // occurrence connectivity: for each vertex, the nodes whose bags contain
    // it induce a connected subtree
    for (int v = 0; v < g.n; ++v) {
        std::vector<int> occ;
        for (int t = 0; t < m; ++t)
            if (d.bags[t] & bit(v)) occ.push_back(t);
        int top = -1; // node in occ closest to root
        std::vector<int> depth_of(m, 0);
        for (int t : detail::topo_order(d))
            depth_of[t] = t == d.root ? 0 : depth_of[d.parent[t]] + 1;
        for (int t : occ)
            if (top == -1 || depth_of[t] < depth_of[top]) top = t;
        for (int t : occ) {
            int u = t;
            while (u != top) {
                u = d.parent[u];
                if (u == -1 || !(d.bags[u] & bit(v)))
                    return VerifyResult::fail("occurrence of vertex " + std::to_string(v) +
                                              " disconnected");
            }
        }
    }
    // width
    auto ch = d.children();
    if (d.component_mode) {
        if (d.kind != RootedDecomposition::Kind::path)
            return VerifyResult::fail("component width applies to path decompositions");
        auto comps = g.components();
        if (d.component_exceptions.size() != comps.size())
            return VerifyResult::fail("component exception count mismatch");
        VertexSet s_all = 0;
        for (size_t i = 0; i < comps.size(); ++i) {
            if (d.component_exceptions[i] & ~comps[i])
                return VerifyResult::fail("component exception outside its component");
            if (popcount(d.component_exceptions[i]) > k2)
                return VerifyResult::fail("component exception set larger than k2");
            s_all |= d.component_exceptions[i];
        }
        for (int t = 0; t < m; ++t)
            if (popcount(d.bags[t] & ~s_all) > k1)
                return VerifyResult::fail("bag " + std::to_string(t) + " exceeds width k1");
    } else {
        // Exception status is non-reusable: a designation happens at a node
        // of the vertex's bag occurrence and binds every leaf below it. The
        // per-leaf sets are certificates; verification searches for
        // designation events realizing them: at each node a subset of the
        // bag may be designated (allowed only if every leaf certificate
        // below contains it), designations accumulate along branches within
        // the k2 budget, and each bag keeps at most k1 undesignated
        // vertices at its own time.
        for (int leaf : d.leaves()) {
            VertexSet s = d.exceptions_for_leaf(leaf);
            if (popcount(s) > k2)
                return VerifyResult::fail("exception set at leaf " + std::to_string(leaf) +
                                          " larger than k2");
        }
        std::vector<VertexSet> allowed(m, ~VertexSet(0));
        {
            // allowed(t) = intersection of the leaf certificates below t
            std::function<VertexSet(int)> post = [&](int t) -> VertexSet {
                if (ch[t].empty()) {
                    allowed[t] = d.exceptions_for_leaf(t);
                } else {
                    VertexSet inter = ~VertexSet(0);
                    for (int c : ch[t]) inter &= post(c);
                    allowed[t] = inter;
                }
                return allowed[t];
            };
            post(d.root);
        }
        std::map<std::pair<int, VertexSet>, bool> memo;
        std::function<bool(int, VertexSet)> realizable = [&](int t, VertexSet committed) -> bool {
            auto key = std::make_pair(t, committed);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            bool ok = false;
            VertexSet pool = d.bags[t] & allowed[t] & ~committed;
            VertexSet z = 0;
            while (true) {
                VertexSet now = committed | z;
                if (popcount(now) <= k2 && popcount(d.bags[t] & ~now) <= k1) {
                    bool kids = true;
                    for (int c : ch[t])
                        if (!realizable(c, now)) { kids = false; break; }
                    if (kids) { ok = true; break; }
                }
                if (z == pool) break;
                z = (z - pool) & pool;
            }
            memo[key] = ok;
            return ok;
        };
        if (!realizable(d.root, 0))
            return VerifyResult::fail(
                "exception sets are not realizable by non-reusable designations");
    }
    // depth
    VerifyResult res;
    std::vector<VertexSet> un(m);
    for (int t : detail::topo_order(d)) {
        un[t] = d.bags[t] | (t == d.root ? 0 : un[d.parent[t]]);
        res.depth = std::max(res.depth, popcount(un[t]));
    }
    if (q && res.depth > *q)
        return VerifyResult::fail("depth " + std::to_string(res.depth) + " exceeds bound " +
                                  std::to_string(*q));
    return res;
}

// ---------------------------------------------------------------------------
// Pebble forest covers.
// ---------------------------------------------------------------------------

struct ForestCover {
    enum class Variant { tree, linear, linear_component };
    Variant variant = Variant::tree;
    PebbleAlphabet alphabet;
    std::vector<int> parent; // vertex -> parent vertex in the forest, -1 at roots
    std::vector<int> pebble; // vertex -> pebble index

    int n() const { return static_cast<int>(parent.size()); }
    bool is_ancestor(int u, int v) const { // u `preceq` v
        while (v != -1) {
            if (v == u) return true;
            v = parent[v];
        }
        return false;
    }
    int depth_of(int v) const {
        int d = 0;
        while (v != -1) { ++d; v = parent[v]; }
        return d;
    }
    int height() const {
        int h = 0;
        for (int v = 0; v < n(); ++v) h = std::max(h, depth_of(v));
        return h;
    }
};

inline VerifyResult verify_forest_cover(const ForestCover& fc, const Graph& g,
                                        std::optional<int> q = std::nullopt) {
    if (fc.n() != g.n) return VerifyResult::fail("cover is not over V(G)");
    int n = g.n;
    for (int v = 0; v < n; ++v) {
        if (fc.parent[v] < -1 || fc.parent[v] >= n) return VerifyResult::fail("bad parent");
        if (fc.pebble[v] < 0 || fc.pebble[v] >= fc.alphabet.size())
            return VerifyResult::fail("bad pebble");
        int steps = 0, u = v;
        while (u != -1) {
            u = fc.parent[u];
            if (++steps > n) return VerifyResult::fail("cycle in forest");
        }
    }
    for (auto [u, v] : g.edges())
        if (!fc.is_ancestor(u, v) && !fc.is_ancestor(v, u))
            return VerifyResult::fail("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                      "} incomparable");
    // condition 2: no pebble repetition on the half-open interval of an edge
    for (auto [a, b] : g.edges()) {
        int u = fc.is_ancestor(a, b) ? a : b;
        int v = u == a ? b : a;
        for (int w = v; w != u; w = fc.parent[w])
            if (fc.pebble[w] == fc.pebble[u] && w != u)
                return VerifyResult::fail("pebble of " + std::to_string(u) +
                                          " repeats inside edge interval at " + std::to_string(w));
    }
    // condition 3: a non-reusable pebble never repeats below itself
    for (int v = 0; v < n; ++v) {
        if (!fc.alphabet.is_y(fc.pebble[v])) continue;
        for (int w = 0; w < n; ++w)
            if (w != v && fc.is_ancestor(v, w) && fc.pebble[w] == fc.pebble[v])
                return VerifyResult::fail("non-reusable pebble repeats below vertex " +
                                          std::to_string(v));
    }
    if (fc.variant != ForestCover::Variant::tree) {
        std::vector<int> child_count(n, 0);
        for (int v = 0; v < n; ++v)
            if (fc.parent[v] != -1) ++child_count[fc.parent[v]];
        for (int v = 0; v < n; ++v)
            if (child_count[v] > 1) return VerifyResult::fail("linear cover branches");
        for (int v = 0; v < n; ++v) {
            if (!fc.alphabet.is_y(fc.pebble[v])) continue;
            for (int w = 0; w < n; ++w) {
                if (w == v || fc.pebble[w] != fc.pebble[v]) continue;
                bool same_path = fc.is_ancestor(v, w) || fc.is_ancestor(w, v);
                if (fc.variant == ForestCover::Variant::linear ||
                    (fc.variant == ForestCover::Variant::linear_component && same_path))
                    return VerifyResult::fail("non-reusable pebble reused at vertex " +
                                              std::to_string(w));
            }
        }
    }
    VerifyResult res;
    res.depth = fc.height();
    if (q && res.depth > *q)
        return VerifyResult::fail("cover depth " + std::to_string(res.depth) + " exceeds " +
                                  std::to_string(*q));
    return res;
}

// ---------------------------------------------------------------------------
// Construction trees.
// ---------------------------------------------------------------------------

struct ConstructionTree {
    struct Node {
        enum class Tag { leaf, elim, product };
        Tag tag = Tag::leaf;
        LabeledGraph payload;
        int elim_pebble = -1;       // elim nodes: the deleted label
        std::vector<int> children;  // elim: one child; product: >= 2
        // product nodes: embeddings[i][v] maps child i's payload vertex v into
        // this node's payload
        std::vector<std::vector<int>> embeddings;
    };
    std::vector<Node> nodes;
    int root = -1;
    bool caterpillar = false;

    const LabeledGraph& target() const { return nodes.at(root).payload; }
};

/// Builders keep payloads and embeddings consistent by construction.
inline int ct_add_leaf(ConstructionTree& ct, LabeledGraph g) {
    ConstructionTree::Node n;
    n.tag = ConstructionTree::Node::Tag::leaf;
    n.payload = std::move(g);
    ct.nodes.push_back(std::move(n));
    return static_cast<int>(ct.nodes.size()) - 1;
}
inline int ct_add_elim(ConstructionTree& ct, int child, int pebble) {
    ConstructionTree::Node n;
    n.tag = ConstructionTree::Node::Tag::elim;
    n.elim_pebble = pebble;
    n.children = {child};
    n.payload = relabel(ct.nodes[child].payload, pebble, kNoVertex);
    ct.nodes.push_back(std::move(n));
    return static_cast<int>(ct.nodes.size()) - 1;
}
inline int ct_add_product(ConstructionTree& ct, const std::vector<int>& children) {
    if (children.size() < 2) throw std::invalid_argument("product node needs >= 2 children");
    ConstructionTree::Node n;
    n.tag = ConstructionTree::Node::Tag::product;
    n.children = children;
    LabeledGraph acc = ct.nodes[children[0]].payload;
    std::vector<std::vector<int>> embeds;
    embeds.push_back([&] {
        std::vector<int> id(acc.graph.n);
        std::iota(id.begin(), id.end(), 0);
        return id;
    }());
    for (size_t i = 1; i < children.size(); ++i) {
        ProductResult pr = product_with_maps(acc, ct.nodes[children[i]].payload);
        for (auto& e : embeds)
            for (int& v : e) v = pr.embed_a[v];
        embeds.push_back(pr.embed_b);
        acc = pr.graph;
    }
    n.payload = std::move(acc);
    n.embeddings = std::move(embeds);
    ct.nodes.push_back(std::move(n));
    return static_cast<int>(ct.nodes.size()) - 1;
}

struct CtVerifyResult {
    bool ok = true;
    int elimination_depth = 0;
    std::string diagnostic;
    explicit operator bool() const { return ok; }
    static CtVerifyResult fail(std::string why) { return {false, 0, std::move(why)}; }
};

/// Structural verification. The target, when given, must match the root
/// payload up to label-preserving isomorphism.
inline CtVerifyResult verify_construction_tree(const ConstructionTree& ct,
                                               const LabeledGraph* target, int k1, int k2) {
    if (ct.root < 0 || ct.root >= static_cast<int>(ct.nodes.size()))
        return CtVerifyResult::fail("bad root");
    for (const auto& n : ct.nodes) {
        if (n.payload.alphabet.k1 != k1 || n.payload.alphabet.k2 != k2)
            return CtVerifyResult::fail("payload alphabet mismatch");
    }
    std::vector<int> par(ct.nodes.size(), -1);
    for (size_t t = 0; t < ct.nodes.size(); ++t)
        for (int c : ct.nodes[t].children) {
            if (c < 0 || c >= static_cast<int>(ct.nodes.size()) || par[c] != -1)
                return CtVerifyResult::fail("node sharing or bad child index");
            par[c] = static_cast<int>(t);
        }
    if (par[ct.root] != -1) return CtVerifyResult::fail("root has a parent");
    // reachability + acyclicity via DFS from root
    std::vector<bool> seen(ct.nodes.size(), false);
    std::vector<int> stack{ct.root};
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        if (seen[t]) return CtVerifyResult::fail("cycle");
        seen[t] = true;
        for (int c : ct.nodes[t].children) stack.push_back(c);
    }
    for (size_t t = 0; t < ct.nodes.size(); ++t)
        if (!seen[t]) return CtVerifyResult::fail("unreachable node");

    auto alphabet = ct.nodes[ct.root].payload.alphabet;
    for (size_t t = 0; t < ct.nodes.size(); ++t) {
        const auto& n = ct.nodes[t];
        switch (n.tag) {
            case ConstructionTree::Node::Tag::leaf:
                if (!n.children.empty()) return CtVerifyResult::fail("leaf with children");
                if (!n.payload.fully_labeled())
                    return CtVerifyResult::fail("leaf " + std::to_string(t) + " not fully labeled");
                break;
            case ConstructionTree::Node::Tag::elim: {
                if (n.children.size() != 1) return CtVerifyResult::fail("elim child count");
                const auto& child = ct.nodes[n.children[0]];
                if (n.elim_pebble < 0 || n.elim_pebble >= alphabet.size())
                    return CtVerifyResult::fail("bad elim label");
                if (child.payload.labels[n.elim_pebble] == kNoVertex)
                    return CtVerifyResult::fail("elim node deletes absent label");
                LabeledGraph expect = relabel(child.payload, n.elim_pebble, kNoVertex);
                if (!(expect == n.payload))
                    return CtVerifyResult::fail("elim payload mismatch at node " +
                                                std::to_string(t));
                break;
            }
            case ConstructionTree::Node::Tag::product: {
                if (n.children.size() < 2) return CtVerifyResult::fail("product child count");
                LabeledGraph acc = ct.nodes[n.children[0]].payload;
                for (size_t i = 1; i < n.children.size(); ++i)
                    acc = product(acc, ct.nodes[n.children[i]].payload);
                if (!labeled_isomorphic(acc, n.payload))
                    return CtVerifyResult::fail("product payload mismatch at node " +
                                                std::to_string(t));
                break;
            }
        }
    }
    // once a non-reusable label is eliminated, it must not occur above
    for (size_t t = 0; t < ct.nodes.size(); ++t) {
        const auto& n = ct.nodes[t];
        if (n.tag != ConstructionTree::Node::Tag::elim || !alphabet.is_y(n.elim_pebble)) continue;
        for (int s = par[t]; s != -1; s = par[s])
            if (ct.nodes[s].payload.labels[n.elim_pebble] != kNoVertex)
                return CtVerifyResult::fail("non-reusable label reappears above its elimination");
    }
    if (ct.caterpillar) {
        for (const auto& n : ct.nodes) {
            if (n.tag != ConstructionTree::Node::Tag::product) continue;
            int non_leaf = 0;
            for (int c : n.children)
                if (ct.nodes[c].tag != ConstructionTree::Node::Tag::leaf) ++non_leaf;
            if (non_leaf > 1) return CtVerifyResult::fail("caterpillar flag violated");
        }
    }
    if (target && !labeled_isomorphic(*target, ct.nodes[ct.root].payload))
        return CtVerifyResult::fail("root payload differs from target");

    // elimination depth: max number of elim nodes on a root-leaf path
    CtVerifyResult res;
    std::function<int(int)> depth = [&](int t) -> int {
        int self = ct.nodes[t].tag == ConstructionTree::Node::Tag::elim ? 1 : 0;
        int best = 0;
        for (int c : ct.nodes[t].children) best = std::max(best, depth(c));
        return self + best;
    };
    res.elimination_depth = depth(ct.root);
    return res;
}

/// hom(target, g) evaluated along the construction: tables keyed by the
/// assignment of the node's live labels; sums at eliminations, multiplies at
/// products (equation-level recursion of the hom-count lemma).
inline BigInt eval_hom_via_construction(const ConstructionTree& ct, const LabeledGraph& g) {
    const auto& alphabet = ct.nodes[ct.root].payload.alphabet;
    if (alphabet.size() != g.alphabet.size())
        throw std::invalid_argument("eval_hom_via_construction: alphabets differ");
    using Table = std::map<std::vector<int>, BigInt>; // assignment over sorted label set
    std::function<Table(int)> eval = [&](int t) -> Table {
        const auto& node = ct.nodes[t];
        std::vector<int> ls = node.payload.label_set();
        Table table;
        if (node.tag == ConstructionTree::Node::Tag::leaf) {
            // enumerate assignments of the leaf's labels; value per the
            // fully-labeled hom criterion
            std::vector<int> assign(ls.size(), 0);
            auto rec = [&](auto&& self, size_t i) -> void {
                if (i == ls.size()) {
                    bool ok = true;
                    for (size_t a = 0; a < ls.size() && ok; ++a)
                        for (size_t b = 0; b < ls.size() && ok; ++b) {
                            int va = node.payload.labels[ls[a]], vb = node.payload.labels[ls[b]];
                            if (va == vb && assign[a] != assign[b]) ok = false;
                            if (node.payload.graph.has_edge(va, vb) &&
                                !g.graph.has_edge(assign[a], assign[b]))
                                ok = false;
                        }
                    if (ok) table[assign] = BigInt(1);
                    return;
                }
                for (int v = 0; v < g.graph.n; ++v) {
                    assign[i] = v;
                    self(self, i + 1);
                }
            };
            if (g.graph.n > 0 || ls.empty()) rec(rec, 0);
            if (ls.empty() && node.payload.graph.n == 0) table[{}] = BigInt(1);
            return table;
        }
        if (node.tag == ConstructionTree::Node::Tag::elim) {
            Table child = eval(node.children[0]);
            std::vector<int> cls = ct.nodes[node.children[0]].payload.label_set();
            size_t drop = std::find(cls.begin(), cls.end(), node.elim_pebble) - cls.begin();
            for (const auto& [a, v] : child) {
                std::vector<int> key = a;
                key.erase(key.begin() + drop);
                auto it = table.find(key);
                if (it == table.end()) table[key] = v;
                else it->second += v;
            }
            return table;
        }
        // product: combine children over the union of label sets
        std::vector<Table> childs;
        std::vector<std::vector<int>> child_ls;
        for (int c : node.children) {
            childs.push_back(eval(c));
            child_ls.push_back(ct.nodes[c].payload.label_set());
        }
        std::vector<int> assign(ls.size(), 0);
        auto rec = [&](auto&& self, size_t i) -> void {
            if (i == ls.size()) {
                BigInt prod(1);
                for (size_t c = 0; c < childs.size() && !prod.is_zero(); ++c) {
                    std::vector<int> key;
                    for (int p : child_ls[c]) {
                        size_t idx = std::find(ls.begin(), ls.end(), p) - ls.begin();
                        key.push_back(assign[idx]);
                    }
                    auto it = childs[c].find(key);
                    if (it == childs[c].end()) { prod = BigInt(0); break; }
                    prod *= it->second;
                }
                if (!prod.is_zero()) table[assign] = prod;
                return;
            }
            for (int v = 0; v < g.graph.n; ++v) {
                assign[i] = v;
                self(self, i + 1);
            }
        };
        if (ls.empty()) {
            BigInt prod(1);
            for (size_t c = 0; c < childs.size(); ++c) {
                auto it = childs[c].find({});
                prod *= it == childs[c].end() ? BigInt(0) : it->second;
            }
            if (!prod.is_zero()) table[{}] = prod;
        } else {
            rec(rec, 0);
        }
        return table;
    };
    Table top = eval(ct.root);
    std::vector<int> ls = ct.nodes[ct.root].payload.label_set();
    std::vector<int> key;
    for (int p : ls) {
        if (g.labels[p] == kNoVertex)
            throw std::invalid_argument("eval_hom_via_construction: target label missing in g");
        key.push_back(g.labels[p]);
    }
    auto it = top.find(key);
    return it == top.end() ? BigInt(0) : it->second;
}

} // namespace homlab
