#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "convert.hpp"
#include "decomp.hpp"
#include "graph.hpp"
#include "homcount.hpp"

namespace homlab::logic {

// ---------------------------------------------------------------------------
// Variables and formulas.
// ---------------------------------------------------------------------------

struct Var {
    enum class Kind { x, y, w };
    Kind kind = Kind::x;
    int index = 1; // 1-based

    bool operator<(const Var& o) const {
        return std::tie(kind, index) < std::tie(o.kind, o.index);
    }
    bool operator==(const Var& o) const { return kind == o.kind && index == o.index; }
    bool is_pebble() const { return kind != Kind::w; }
    /// alphabet slot of a pebble variable
    int pebble_id(const PebbleAlphabet& a) const {
        if (kind == Kind::x) {
            if (index < 1 || index > a.k1) throw std::invalid_argument("unknown variable x");
            return index - 1;
        }
        if (kind == Kind::y) {
            if (index < 1 || index > a.k2) throw std::invalid_argument("unknown variable y");
            return a.k1 + index - 1;
        }
        throw std::invalid_argument("tally variable has no pebble id");
    }
    std::string name() const {
        const char* prefix = kind == Kind::x ? "x" : kind == Kind::y ? "y" : "w";
        return prefix + std::to_string(index);
    }
    static Var x(int i) { return {Kind::x, i}; }
    static Var y(int i) { return {Kind::y, i}; }
    static Var w(int i) { return {Kind::w, i}; }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Counting-logic AST. Shared subtrees are permitted (the tree-mode
/// translation produces DAGs).
struct Formula {
    enum class Kind {
        truth,      // constant
        equal,      // a = b
        rel,        // R(args)
        neg,        // not child
        conj,       // and children
        disj,       // or children
        exists,     // exists bound . child       (plain FO quantifier)
        count_ge,   // exists^{>=count} bound . child
        count_tuple // exists^{=count} (tuple) . child   (tally variables)
    };
    Kind kind = Kind::truth;
    bool truth_value = true;
    Var a, b;                     // equal
    std::string rel_name;         // rel
    std::vector<Var> rel_args;    // rel
    FormulaPtr child;             // neg, exists, count_ge, count_tuple
    std::vector<FormulaPtr> children; // conj, disj
    Var bound;                    // exists, count_ge
    long long count = 0;          // count_ge, count_tuple
    std::vector<Var> tuple;       // count_tuple
};

inline FormulaPtr f_true() {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::truth;
    f->truth_value = true;
    return f;
}
inline FormulaPtr f_false() {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::truth;
    f->truth_value = false;
    return f;
}
inline FormulaPtr f_eq(Var a, Var b) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::equal;
    f->a = a;
    f->b = b;
    return f;
}
inline FormulaPtr f_rel(std::string name, std::vector<Var> args) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::rel;
    f->rel_name = std::move(name);
    f->rel_args = std::move(args);
    return f;
}
inline FormulaPtr f_edge(Var a, Var b) { return f_rel("E", {a, b}); }
inline FormulaPtr f_not(FormulaPtr c) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::neg;
    f->child = std::move(c);
    return f;
}
inline FormulaPtr f_and(std::vector<FormulaPtr> cs) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::conj;
    f->children = std::move(cs);
    return f;
}
inline FormulaPtr f_or(std::vector<FormulaPtr> cs) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::disj;
    f->children = std::move(cs);
    return f;
}
inline FormulaPtr f_exists(Var z, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::exists;
    f->bound = z;
    f->child = std::move(body);
    return f;
}
inline FormulaPtr f_count_ge(long long n, Var z, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::count_ge;
    f->count = n;
    f->bound = z;
    f->child = std::move(body);
    return f;
}
inline FormulaPtr f_count_tuple(long long n, std::vector<Var> tuple, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::count_tuple;
    f->count = n;
    f->tuple = std::move(tuple);
    f->child = std::move(body);
    return f;
}
/// exists^{=c} z body, normalized through count_ge
inline FormulaPtr f_count_eq(long long c, Var z, FormulaPtr body) {
    return f_and({f_count_ge(c, z, body), f_not(f_count_ge(c + 1, z, body))});
}
inline FormulaPtr f_forall(Var z, FormulaPtr body) {
    return f_not(f_count_ge(1, z, f_not(std::move(body))));
}

// ---------------------------------------------------------------------------
// Free variables, printing, parsing.
// ---------------------------------------------------------------------------

inline void collect_free(const FormulaPtr& f, std::set<Var>& out) {
    switch (f->kind) {
        case Formula::Kind::truth: break;
        case Formula::Kind::equal:
            out.insert(f->a);
            out.insert(f->b);
            break;
        case Formula::Kind::rel:
            for (const Var& v : f->rel_args) out.insert(v);
            break;
        case Formula::Kind::neg: collect_free(f->child, out); break;
        case Formula::Kind::conj:
        case Formula::Kind::disj:
            for (const auto& c : f->children) collect_free(c, out);
            break;
        case Formula::Kind::exists:
        case Formula::Kind::count_ge: {
            std::set<Var> inner;
            collect_free(f->child, inner);
            inner.erase(f->bound);
            out.insert(inner.begin(), inner.end());
            break;
        }
        case Formula::Kind::count_tuple: {
            std::set<Var> inner;
            collect_free(f->child, inner);
            for (const Var& v : f->tuple) inner.erase(v);
            out.insert(inner.begin(), inner.end());
            break;
        }
    }
}
inline std::set<Var> free_vars(const FormulaPtr& f) {
    std::set<Var> out;
    collect_free(f, out);
    return out;
}

inline std::string to_sexpr(const FormulaPtr& f) {
    std::ostringstream os;
    switch (f->kind) {
        case Formula::Kind::truth: os << (f->truth_value ? "(true)" : "(false)"); break;
        case Formula::Kind::equal: os << "(= " << f->a.name() << " " << f->b.name() << ")"; break;
        case Formula::Kind::rel:
            if (f->rel_name == "E" && f->rel_args.size() == 2)
                os << "(E " << f->rel_args[0].name() << " " << f->rel_args[1].name() << ")";
            else {
                os << "(rel " << f->rel_name;
                for (const Var& v : f->rel_args) os << " " << v.name();
                os << ")";
            }
            break;
        case Formula::Kind::neg: os << "(not " << to_sexpr(f->child) << ")"; break;
        case Formula::Kind::conj:
        case Formula::Kind::disj: {
            os << (f->kind == Formula::Kind::conj ? "(and" : "(or");
            for (const auto& c : f->children) os << " " << to_sexpr(c);
            os << ")";
            break;
        }
        case Formula::Kind::exists:
            os << "(exists " << f->bound.name() << " " << to_sexpr(f->child) << ")";
            break;
        case Formula::Kind::count_ge:
            os << "(count>= " << f->count << " " << f->bound.name() << " " << to_sexpr(f->child)
               << ")";
            break;
        case Formula::Kind::count_tuple: {
            os << "(count= " << f->count << " (";
            for (size_t i = 0; i < f->tuple.size(); ++i)
                os << (i ? " " : "") << f->tuple[i].name();
            os << ") " << to_sexpr(f->child) << ")";
            break;
        }
    }
    return os.str();
}

namespace detail {

struct SexprParser {
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    std::string token() {
        skip();
        size_t start = pos;
        while (pos < s.size() && !isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
               s[pos] != ')')
            ++pos;
        if (start == pos) throw std::invalid_argument("formula parse error at " + std::to_string(pos));
        return s.substr(start, pos - start);
    }
    void expect(char c) {
        skip();
        if (pos >= s.size() || s[pos] != c)
            throw std::invalid_argument(std::string("formula parse: expected '") + c + "' at " +
                                        std::to_string(pos));
        ++pos;
    }
    bool peek(char c) {
        skip();
        return pos < s.size() && s[pos] == c;
    }

    Var variable() {
        std::string t = token();
        if (t.size() < 2) throw std::invalid_argument("bad variable: " + t);
        int idx = std::stoi(t.substr(1));
        switch (t[0]) {
            case 'x': return Var::x(idx);
            case 'y': return Var::y(idx);
            case 'w': return Var::w(idx);
        }
        throw std::invalid_argument("bad variable: " + t);
    }

    FormulaPtr formula() {
        expect('(');
        std::string head = token();
        FormulaPtr out;
        if (head == "true") out = f_true();
        else if (head == "false") out = f_false();
        else if (head == "=") {
            Var a = variable(), b = variable();
            out = f_eq(a, b);
        } else if (head == "E") {
            Var a = variable(), b = variable();
            out = f_edge(a, b);
        } else if (head == "rel") {
            std::string name = token();
            std::vector<Var> args;
            while (!peek(')')) args.push_back(variable());
            out = f_rel(name, args);
        } else if (head == "not") {
            out = f_not(formula());
        } else if (head == "and" || head == "or") {
            std::vector<FormulaPtr> cs;
            while (!peek(')')) cs.push_back(formula());
            out = head == "and" ? f_and(cs) : f_or(cs);
        } else if (head == "exists") {
            Var z = variable();
            out = f_exists(z, formula());
        } else if (head == "count>=") {
            long long n = std::stoll(token());
            Var z = variable();
            out = f_count_ge(n, z, formula());
        } else if (head == "count=") {
            long long n = std::stoll(token());
            expect('(');
            std::vector<Var> tuple;
            while (!peek(')')) tuple.push_back(variable());
            expect(')');
            out = f_count_tuple(n, tuple, formula());
        } else {
            throw std::invalid_argument("unknown formula head: " + head);
        }
        expect(')');
        return out;
    }
};

} // namespace detail

inline FormulaPtr parse_formula(const std::string& s) {
    detail::SexprParser p{s, 0};
    FormulaPtr f = p.formula();
    p.skip();
    if (p.pos != s.size()) throw std::invalid_argument("trailing formula input");
    return f;
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

using Assignment = std::map<Var, int>;

namespace detail {

struct Evaluator {
    const RelStructure& a;
    std::map<const Formula*, std::vector<Var>> free_cache;
    std::map<std::pair<const Formula*, std::vector<int>>, bool> memo;

    const std::vector<Var>& frees(const FormulaPtr& f) {
        auto it = free_cache.find(f.get());
        if (it != free_cache.end()) return it->second;
        std::set<Var> s = free_vars(f);
        return free_cache.emplace(f.get(), std::vector<Var>(s.begin(), s.end())).first->second;
    }

    bool eval(const FormulaPtr& f, Assignment& alpha) {
        const auto& fv = frees(f);
        std::vector<int> key;
        key.reserve(fv.size());
        for (const Var& v : fv) {
            auto it = alpha.find(v);
            if (it == alpha.end())
                throw std::invalid_argument("evaluate: unbound variable " + v.name());
            key.push_back(it->second);
        }
        auto memo_key = std::make_pair(f.get(), key);
        auto mit = memo.find(memo_key);
        if (mit != memo.end()) return mit->second;
        bool result = false;
        switch (f->kind) {
            case Formula::Kind::truth: result = f->truth_value; break;
            case Formula::Kind::equal: result = alpha.at(f->a) == alpha.at(f->b); break;
            case Formula::Kind::rel: {
                std::vector<int> t;
                for (const Var& v : f->rel_args) t.push_back(alpha.at(v));
                result = a.has_tuple(f->rel_name, t);
                break;
            }
            case Formula::Kind::neg: result = !eval(f->child, alpha); break;
            case Formula::Kind::conj: {
                result = true;
                for (const auto& c : f->children)
                    if (!eval(c, alpha)) { result = false; break; }
                break;
            }
            case Formula::Kind::disj: {
                result = false;
                for (const auto& c : f->children)
                    if (eval(c, alpha)) { result = true; break; }
                break;
            }
            case Formula::Kind::exists:
            case Formula::Kind::count_ge: {
                long long need = f->kind == Formula::Kind::exists ? 1 : f->count;
                long long hits = 0;
                auto saved = alpha.find(f->bound);
                std::optional<int> old;
                if (saved != alpha.end()) old = saved->second;
                for (int v = 0; v < a.n && hits < need; ++v) {
                    alpha[f->bound] = v;
                    if (eval(f->child, alpha)) ++hits;
                }
                if (old) alpha[f->bound] = *old;
                else alpha.erase(f->bound);
                result = hits >= need && need >= 0;
                if (need <= 0) result = true;
                break;
            }
            case Formula::Kind::count_tuple: {
                long long hits = 0;
                std::vector<std::optional<int>> old;
                for (const Var& v : f->tuple) {
                    auto it = alpha.find(v);
                    old.push_back(it == alpha.end() ? std::nullopt : std::optional<int>(it->second));
                }
                std::function<void(size_t)> rec = [&](size_t i) {
                    if (i == f->tuple.size()) {
                        if (eval(f->child, alpha)) ++hits;
                        return;
                    }
                    for (int v = 0; v < a.n; ++v) {
                        alpha[f->tuple[i]] = v;
                        rec(i + 1);
                    }
                };
                rec(0);
                for (size_t i = 0; i < f->tuple.size(); ++i) {
                    if (old[i]) alpha[f->tuple[i]] = *old[i];
                    else alpha.erase(f->tuple[i]);
                }
                result = hits == f->count;
                break;
            }
        }
        memo[memo_key] = result;
        return result;
    }
};

} // namespace detail

/// Counting-logic satisfaction over a relational structure.
inline bool evaluate(const FormulaPtr& f, const RelStructure& a, const Assignment& alpha = {}) {
    detail::Evaluator ev{a, {}, {}};
    Assignment mutable_alpha = alpha;
    return ev.eval(f, mutable_alpha);
}

/// Satisfaction over a labeled graph: pebble variables read their values
/// from the labeling, tally variables from the extra assignment.
inline bool evaluate(const FormulaPtr& f, const LabeledGraph& g, const Assignment& tally = {}) {
    RelStructure a = to_structure(g.graph);
    Assignment alpha = tally;
    for (const Var& v : free_vars(f)) {
        if (!v.is_pebble()) continue;
        int p = v.pebble_id(g.alphabet);
        if (g.labels[p] == kNoVertex)
            throw std::invalid_argument("evaluate: free variable " + v.name() + " unlabeled in G");
        alpha[v] = g.labels[p];
    }
    return evaluate(f, a, alpha);
}

// ---------------------------------------------------------------------------
// Requantification analysis and fragment membership.
// ---------------------------------------------------------------------------

struct FragmentReport {
    std::set<Var> requantified;       // pebble variables
    bool restricted_conjunctions = true;
    int quantifier_rank = 0;
    bool in_land_c = false;           // restricted-conjunction logic over (k1,k2)
    bool in_c = false;                // counting logic over (k1,k2) (no tuple counts)
    bool in_c_q = false;              // additionally quantifier rank <= q (when q given)
    bool exists_positive = false;     // no negation, no counting
};

namespace detail {

inline bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }

inline bool contains_quantifier(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::truth:
        case Formula::Kind::equal:
        case Formula::Kind::rel: return false;
        case Formula::Kind::neg: return contains_quantifier(f->child);
        case Formula::Kind::conj:
        case Formula::Kind::disj: {
            for (const auto& c : f->children)
                if (contains_quantifier(c)) return true;
            return false;
        }
        default: return true;
    }
}

inline void scan(const FormulaPtr& f, std::set<Var>& in_scope, std::set<Var>& bound,
                 std::set<Var>& requant, bool& restricted, int& qr) {
    switch (f->kind) {
        case Formula::Kind::truth:
        case Formula::Kind::equal:
        case Formula::Kind::rel: qr = 0; return;
        case Formula::Kind::neg: scan(f->child, in_scope, bound, requant, restricted, qr); return;
        case Formula::Kind::conj:
        case Formula::Kind::disj: {
            if (f->kind == Formula::Kind::conj) {
                int quantified_non_sentences = 0;
                for (const auto& c : f->children)
                    if (contains_quantifier(c) && !is_sentence(c)) ++quantified_non_sentences;
                if (quantified_non_sentences > 1) restricted = false;
            }
            qr = 0;
            for (const auto& c : f->children) {
                int cq = 0;
                scan(c, in_scope, bound, requant, restricted, cq);
                qr = std::max(qr, cq);
            }
            return;
        }
        case Formula::Kind::exists:
        case Formula::Kind::count_ge: {
            if (f->bound.is_pebble()) {
                bound.insert(f->bound);
                if (in_scope.count(f->bound)) requant.insert(f->bound);
            }
            bool fresh = !in_scope.count(f->bound);
            if (fresh) in_scope.insert(f->bound);
            int cq = 0;
            scan(f->child, in_scope, bound, requant, restricted, cq);
            if (fresh) in_scope.erase(f->bound);
            qr = cq + 1;
            return;
        }
        case Formula::Kind::count_tuple: {
            int cq = 0;
            scan(f->child, in_scope, bound, requant, restricted, cq);
            qr = cq; // binds tally variables only
            return;
        }
    }
}

/// Syntactic shape check of the restricted-conjunction logic: negation on
/// atoms only, quantification guarded by a tally equality, tuple counting at
/// the sentence layer only.
inline bool land_c_shape(const FormulaPtr& f, bool top_layer) {
    switch (f->kind) {
        case Formula::Kind::truth: return true;
        case Formula::Kind::equal:
            return f->a.is_pebble() && f->b.is_pebble();
        case Formula::Kind::rel:
            for (const Var& v : f->rel_args)
                if (!v.is_pebble()) return false;
            return true;
        case Formula::Kind::neg: {
            const auto& c = f->child;
            return (c->kind == Formula::Kind::equal || c->kind == Formula::Kind::rel) &&
                   land_c_shape(c, false);
        }
        case Formula::Kind::disj: {
            for (const auto& c : f->children)
                if (!land_c_shape(c, top_layer)) return false;
            return true;
        }
        case Formula::Kind::conj: {
            for (const auto& c : f->children)
                if (!land_c_shape(c, false)) return false;
            return true;
        }
        case Formula::Kind::exists: {
            if (!f->bound.is_pebble()) return false;
            // body must carry the guard bound = w as a conjunct (or be it);
            // the guard atom itself belongs to the quantifier production
            const auto& body = f->child;
            auto is_guard = [&](const FormulaPtr& g) {
                return g->kind == Formula::Kind::equal &&
                       ((g->a == f->bound && g->b.kind == Var::Kind::w) ||
                        (g->b == f->bound && g->a.kind == Var::Kind::w));
            };
            if (is_guard(body)) return true;
            if (body->kind != Formula::Kind::conj) return false;
            bool guarded = false;
            for (const auto& c : body->children) {
                if (!guarded && is_guard(c)) {
                    guarded = true;
                    continue;
                }
                if (!land_c_shape(c, false)) return false;
            }
            return guarded;
        }
        case Formula::Kind::count_ge: return false;
        case Formula::Kind::count_tuple: {
            if (!top_layer) return false;
            for (const Var& v : f->tuple)
                if (v.kind != Var::Kind::w) return false;
            return land_c_shape(f->child, false);
        }
    }
    return false;
}

inline bool c_shape(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::truth: return true;
        case Formula::Kind::equal: return f->a.is_pebble() && f->b.is_pebble();
        case Formula::Kind::rel:
            for (const Var& v : f->rel_args)
                if (!v.is_pebble()) return false;
            return true;
        case Formula::Kind::neg: return c_shape(f->child);
        case Formula::Kind::conj:
        case Formula::Kind::disj:
            for (const auto& c : f->children)
                if (!c_shape(c)) return false;
            return true;
        case Formula::Kind::exists:
        case Formula::Kind::count_ge:
            return f->bound.is_pebble() && c_shape(f->child);
        case Formula::Kind::count_tuple: return false;
    }
    return false;
}

inline bool positive_shape(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::truth: return true;
        case Formula::Kind::equal:
        case Formula::Kind::rel: return true;
        case Formula::Kind::neg:
        case Formula::Kind::count_ge:
        case Formula::Kind::count_tuple: return false;
        case Formula::Kind::conj:
        case Formula::Kind::disj:
            for (const auto& c : f->children)
                if (!positive_shape(c)) return false;
            return true;
        case Formula::Kind::exists: return positive_shape(f->child);
    }
    return false;
}

} // namespace detail

/// Requantified variables, restricted-conjunction check, quantifier rank and
/// fragment flags relative to the alphabet (and rank bound q when given).
inline FragmentReport analyze(const FormulaPtr& f, const PebbleAlphabet& alphabet,
                              std::optional<int> q = std::nullopt) {
    // validate variable indices against the alphabet
    std::function<void(const FormulaPtr&)> check = [&](const FormulaPtr& g) {
        auto check_var = [&](const Var& v) {
            if (v.is_pebble()) (void)v.pebble_id(alphabet);
        };
        if (g->kind == Formula::Kind::equal) {
            check_var(g->a);
            check_var(g->b);
        }
        for (const Var& v : g->rel_args) check_var(v);
        if (g->kind == Formula::Kind::exists || g->kind == Formula::Kind::count_ge)
            check_var(g->bound);
        if (g->child) check(g->child);
        for (const auto& c : g->children) check(c);
    };
    check(f);

    FragmentReport rep;
    std::set<Var> in_scope, bound;
    int qr = 0;
    detail::scan(f, in_scope, bound, rep.requantified, rep.restricted_conjunctions, qr);
    // free-and-bound variables are requantified too
    for (const Var& v : free_vars(f))
        if (v.is_pebble() && bound.count(v)) rep.requantified.insert(v);
    rep.quantifier_rank = qr;

    bool requant_x_only = true;
    for (const Var& v : rep.requantified)
        if (v.kind == Var::Kind::y) requant_x_only = false;
    rep.in_land_c = detail::land_c_shape(f, true) && rep.restricted_conjunctions && requant_x_only;
    rep.in_c = detail::c_shape(f) && requant_x_only;
    rep.in_c_q = rep.in_c && (!q || qr <= *q);
    rep.exists_positive = detail::positive_shape(f) && requant_x_only;
    return rep;
}

} // namespace homlab::logic
