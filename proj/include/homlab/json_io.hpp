#pragma once

#include <json.hpp>
#include <sstream>

#include "comonad.hpp"
#include "decomp.hpp"
#include "homcount.hpp"
#include "pursuit.hpp"

namespace homlab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Graphs.
// ---------------------------------------------------------------------------

inline json to_json(const Graph& g) {
    json j;
    j["n"] = g.n;
    j["edges"] = json::array();
    for (auto [u, v] : g.edges()) j["edges"].push_back({u, v});
    return j;
}

inline Graph graph_from_json(const json& j) {
    Graph g(j.at("n").get<int>());
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("graph json: edge must be a pair");
        g.add_edge(e[0].get<int>(), e[1].get<int>());
    }
    return g;
}

inline json to_json(const LabeledGraph& g) {
    json j = to_json(g.graph);
    j["k1"] = g.alphabet.k1;
    j["k2"] = g.alphabet.k2;
    json labels = json::object();
    for (int p = 0; p < g.alphabet.size(); ++p)
        if (g.labels[p] != kNoVertex) labels[g.alphabet.name(p)] = g.labels[p];
    j["labels"] = labels;
    return j;
}

inline LabeledGraph labeled_graph_from_json(const json& j) {
    Graph g = graph_from_json(j);
    int k1 = j.value("k1", 0), k2 = j.value("k2", 0);
    json labels = j.value("labels", json::object());
    if (k1 + k2 == 0) {
        // infer a minimal alphabet from the label names
        for (auto it = labels.begin(); it != labels.end(); ++it) {
            const std::string& name = it.key();
            int idx = std::stoi(name.substr(1));
            if (name[0] == 'x') k1 = std::max(k1, idx);
            else if (name[0] == 'y') k2 = std::max(k2, idx);
        }
        if (k1 + k2 == 0) k1 = 1;
    }
    LabeledGraph lg(g, PebbleAlphabet(k1, k2));
    for (auto it = labels.begin(); it != labels.end(); ++it) {
        auto p = lg.alphabet.index_of(it.key());
        if (!p) throw std::invalid_argument("labeled graph json: unknown label " + it.key());
        int v = it.value().get<int>();
        g.check_vertex(v);
        lg.labels[*p] = v;
    }
    return lg;
}

// ---------------------------------------------------------------------------
// graph6 (unlabeled graphs, n <= 62).
// ---------------------------------------------------------------------------

inline Graph graph_from_graph6(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("graph6: empty string");
    size_t pos = 0;
    int n = s[pos] - 63;
    if (n < 0 || n > 62) throw std::invalid_argument("graph6: order out of range");
    ++pos;
    Graph g(n);
    int bits_needed = n * (n - 1) / 2;
    int bit = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++bit) {
            int byte = bit / 6;
            int offset = 5 - bit % 6;
            if (pos + byte >= s.size()) throw std::invalid_argument("graph6: truncated");
            int c = s[pos + byte] - 63;
            if (c < 0 || c > 63) throw std::invalid_argument("graph6: bad character");
            if ((c >> offset) & 1) g.add_edge(i, j);
        }
    size_t expect = pos + (bits_needed + 5) / 6;
    if (s.size() != expect) throw std::invalid_argument("graph6: length mismatch");
    return g;
}

inline std::string graph_to_graph6(const Graph& g) {
    if (g.n > 62) throw std::invalid_argument("graph6: order out of range");
    std::string out(1, static_cast<char>(g.n + 63));
    int bits = g.n * (g.n - 1) / 2;
    std::vector<int> chunk((bits + 5) / 6, 0);
    int bit = 0;
    for (int j = 1; j < g.n; ++j)
        for (int i = 0; i < j; ++i, ++bit)
            if (g.has_edge(i, j)) chunk[bit / 6] |= 1 << (5 - bit % 6);
    for (int c : chunk) out.push_back(static_cast<char>(c + 63));
    return out;
}

// ---------------------------------------------------------------------------
// DOT export.
// ---------------------------------------------------------------------------

inline std::string to_dot(const Graph& g, const std::string& name = "G") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (int v = 0; v < g.n; ++v) os << "  v" << v << ";\n";
    for (auto [u, v] : g.edges()) os << "  v" << u << " -- v" << v << ";\n";
    os << "}\n";
    return os.str();
}

inline std::string to_dot(const RootedDecomposition& d, const std::string& name = "D") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (int t = 0; t < d.node_count(); ++t) {
        os << "  b" << t << " [label=\"{";
        bool first = true;
        VertexSet bag = d.bags[t];
        while (bag) {
            int v = lowest_bit(bag);
            bag &= bag - 1;
            os << (first ? "" : ",") << v;
            first = false;
        }
        os << "}\"];\n";
    }
    for (int t = 0; t < d.node_count(); ++t)
        if (d.parent[t] >= 0) os << "  b" << d.parent[t] << " -- b" << t << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Decompositions, covers, construction trees.
// ---------------------------------------------------------------------------

inline json vertex_set_to_json(VertexSet s) {
    json arr = json::array();
    while (s) {
        arr.push_back(lowest_bit(s));
        s &= s - 1;
    }
    return arr;
}
inline VertexSet vertex_set_from_json(const json& arr) {
    VertexSet s = 0;
    for (const auto& v : arr) s |= bit(v.get<int>());
    return s;
}

inline json to_json(const RootedDecomposition& d) {
    json j;
    j["kind"] = d.kind == RootedDecomposition::Kind::path ? "path" : "tree";
    j["root"] = d.root;
    j["parent"] = d.parent;
    j["bags"] = json::array();
    for (VertexSet b : d.bags) j["bags"].push_back(vertex_set_to_json(b));
    if (d.component_mode) {
        j["component_exceptions"] = json::array();
        for (VertexSet s : d.component_exceptions)
            j["component_exceptions"].push_back(vertex_set_to_json(s));
    } else {
        json exc = json::object();
        for (auto& [leaf, s] : d.leaf_exceptions) exc[std::to_string(leaf)] = vertex_set_to_json(s);
        j["exceptions"] = exc;
    }
    return j;
}

inline RootedDecomposition decomposition_from_json(const json& j) {
    RootedDecomposition d;
    d.kind = j.at("kind").get<std::string>() == "path" ? RootedDecomposition::Kind::path
                                                       : RootedDecomposition::Kind::tree;
    d.root = j.at("root").get<int>();
    d.parent = j.at("parent").get<std::vector<int>>();
    for (const auto& b : j.at("bags")) d.bags.push_back(vertex_set_from_json(b));
    if (j.contains("component_exceptions")) {
        d.component_mode = true;
        for (const auto& s : j["component_exceptions"])
            d.component_exceptions.push_back(vertex_set_from_json(s));
    } else if (j.contains("exceptions")) {
        for (auto it = j["exceptions"].begin(); it != j["exceptions"].end(); ++it)
            d.leaf_exceptions[std::stoi(it.key())] = vertex_set_from_json(it.value());
    }
    return d;
}

inline json to_json(const ForestCover& fc) {
    json j;
    switch (fc.variant) {
        case ForestCover::Variant::tree: j["variant"] = "tree"; break;
        case ForestCover::Variant::linear: j["variant"] = "linear"; break;
        case ForestCover::Variant::linear_component: j["variant"] = "linear-component"; break;
    }
    j["k1"] = fc.alphabet.k1;
    j["k2"] = fc.alphabet.k2;
    j["parent"] = fc.parent;
    json pebbles = json::array();
    for (int p : fc.pebble) pebbles.push_back(fc.alphabet.name(p));
    j["pebbles"] = pebbles;
    return j;
}

inline ForestCover cover_from_json(const json& j) {
    ForestCover fc;
    std::string variant = j.at("variant").get<std::string>();
    fc.variant = variant == "tree"     ? ForestCover::Variant::tree
                 : variant == "linear" ? ForestCover::Variant::linear
                                       : ForestCover::Variant::linear_component;
    fc.alphabet = PebbleAlphabet(j.at("k1").get<int>(), j.at("k2").get<int>());
    fc.parent = j.at("parent").get<std::vector<int>>();
    for (const auto& p : j.at("pebbles")) {
        auto idx = fc.alphabet.index_of(p.get<std::string>());
        if (!idx) throw std::invalid_argument("cover json: unknown pebble");
        fc.pebble.push_back(*idx);
    }
    return fc;
}

/// Construction trees serialize leaves plus structure; payloads of inner
/// nodes are rebuilt through the constructors on import, so imported trees
/// are consistent by construction.
inline json to_json(const ConstructionTree& ct) {
    json j;
    j["caterpillar"] = ct.caterpillar;
    j["root"] = ct.root;
    json nodes = json::array();
    for (const auto& n : ct.nodes) {
        json nj;
        switch (n.tag) {
            case ConstructionTree::Node::Tag::leaf:
                nj["tag"] = "leaf";
                nj["graph"] = to_json(n.payload);
                break;
            case ConstructionTree::Node::Tag::elim:
                nj["tag"] = "elim";
                nj["label"] = n.payload.alphabet.name(n.elim_pebble);
                nj["children"] = n.children;
                break;
            case ConstructionTree::Node::Tag::product:
                nj["tag"] = "product";
                nj["children"] = n.children;
                break;
        }
        nodes.push_back(nj);
    }
    j["nodes"] = nodes;
    return j;
}

inline ConstructionTree construction_from_json(const json& j) {
    const json& nodes = j.at("nodes");
    ConstructionTree ct;
    std::vector<int> remap(nodes.size(), -1);
    // rebuild in dependency order
    std::function<int(int)> build = [&](int idx) -> int {
        if (remap[idx] != -1) return remap[idx];
        const json& nj = nodes.at(idx);
        std::string tag = nj.at("tag").get<std::string>();
        int id;
        if (tag == "leaf") {
            id = ct_add_leaf(ct, labeled_graph_from_json(nj.at("graph")));
        } else if (tag == "elim") {
            int child = build(nj.at("children").at(0).get<int>());
            auto& alphabet = ct.nodes[child].payload.alphabet;
            auto p = alphabet.index_of(nj.at("label").get<std::string>());
            if (!p) throw std::invalid_argument("construction json: unknown label");
            id = ct_add_elim(ct, child, *p);
        } else {
            std::vector<int> children;
            for (const auto& c : nj.at("children")) children.push_back(build(c.get<int>()));
            id = ct_add_product(ct, children);
        }
        remap[idx] = id;
        return id;
    };
    ct.root = build(j.at("root").get<int>());
    ct.caterpillar = j.value("caterpillar", false);
    return ct;
}

// ---------------------------------------------------------------------------
// Structures, combinations, strategies.
// ---------------------------------------------------------------------------

inline json to_json(const RelStructure& a) {
    json j;
    j["n"] = a.n;
    json rels = json::array();
    for (const auto& r : a.relations) {
        json rj;
        rj["name"] = r.name;
        rj["arity"] = r.arity;
        rj["tuples"] = r.tuples;
        rels.push_back(rj);
    }
    j["relations"] = rels;
    return j;
}

inline RelStructure structure_from_json(const json& j) {
    RelStructure a(j.at("n").get<int>());
    for (const auto& rj : j.value("relations", json::array())) {
        a.add_relation(rj.at("name").get<std::string>(), rj.at("arity").get<int>());
        for (const auto& t : rj.value("tuples", json::array()))
            a.add_tuple(rj.at("name").get<std::string>(), t.get<std::vector<int>>());
    }
    return a;
}

inline json to_json(const LinComb& lc) {
    json j = json::array();
    for (const auto& t : lc.terms) {
        json tj;
        tj["coef"] = t.coef.to_string();
        tj["graph"] = to_json(t.graph);
        j.push_back(tj);
    }
    return j;
}

inline LinComb lincomb_from_json(const json& j) {
    LinComb lc;
    for (const auto& tj : j)
        lc.add_term(Rational::from_string(tj.at("coef").get<std::string>()),
                    labeled_graph_from_json(tj.at("graph")));
    return lc;
}

inline json to_json(const NsStrategy& s) {
    json j;
    j["game"] = "ns";
    j["k1"] = s.alphabet.k1;
    j["k2"] = s.alphabet.k2;
    json moves = json::array();
    for (const auto& m : s.moves) {
        json mj;
        mj["pebble"] = s.alphabet.name(m.pebble);
        if (m.to == kNoVertex) mj["to"] = nullptr;
        else mj["to"] = m.to;
        moves.push_back(mj);
    }
    j["moves"] = moves;
    return j;
}

inline json to_json(const CrStrategy& s) {
    json j;
    j["game"] = "cr";
    j["k1"] = s.alphabet.k1;
    j["k2"] = s.alphabet.k2;
    j["rounds"] = s.rounds;
    json table = json::array();
    for (const auto& [pos, mv] : s.table) {
        json pj;
        pj["xs"] = pos.xs;
        pj["ys"] = pos.ys;
        pj["region"] = vertex_set_to_json(pos.region);
        pj["rounds_left"] = pos.rounds_left;
        json mj;
        mj["use_y"] = mv.use_y;
        if (mv.lift_vertex == kNoVertex) mj["lift"] = nullptr;
        else mj["lift"] = mv.lift_vertex;
        if (mv.to == kNoVertex) mj["to"] = nullptr;
        else mj["to"] = mv.to;
        table.push_back({{"position", pj}, {"move", mj}});
    }
    j["table"] = table;
    return j;
}

inline NsStrategy ns_strategy_from_json(const json& j) {
    NsStrategy s;
    s.alphabet = PebbleAlphabet(j.at("k1").get<int>(), j.at("k2").get<int>());
    for (const auto& mj : j.at("moves")) {
        PursuitMove m;
        auto p = s.alphabet.index_of(mj.at("pebble").get<std::string>());
        if (!p) throw std::invalid_argument("strategy json: unknown pebble");
        m.pebble = *p;
        m.to = mj.at("to").is_null() ? kNoVertex : mj.at("to").get<int>();
        s.moves.push_back(m);
    }
    return s;
}

inline CrStrategy cr_strategy_from_json(const json& j) {
    CrStrategy s;
    s.alphabet = PebbleAlphabet(j.at("k1").get<int>(), j.at("k2").get<int>());
    s.rounds = j.at("rounds").get<int>();
    for (const auto& entry : j.at("table")) {
        const json& pj = entry.at("position");
        CrPosition pos;
        pos.xs = pj.at("xs").get<std::vector<int>>();
        pos.ys = pj.at("ys").get<std::vector<int>>();
        pos.region = vertex_set_from_json(pj.at("region"));
        pos.rounds_left = pj.at("rounds_left").get<int>();
        const json& mj = entry.at("move");
        CrMove mv;
        mv.use_y = mj.at("use_y").get<bool>();
        mv.lift_vertex = mj.at("lift").is_null() ? kNoVertex : mj.at("lift").get<int>();
        mv.to = mj.at("to").is_null() ? kNoVertex : mj.at("to").get<int>();
        s.table[pos] = mv;
    }
    return s;
}

/// Canonical pretty emission used by the CLI (stable key order, two-space
/// indentation) so that emit(parse(x)) is byte-stable.
inline std::string emit(const json& j) { return j.dump(2) + "\n"; }

} // namespace homlab
