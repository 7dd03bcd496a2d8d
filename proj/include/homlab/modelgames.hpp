#pragma once

#include <functional>
#include <map>
#include <set>

#include "graph.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Pebble pairings and partial maps.
// ---------------------------------------------------------------------------

/// The partial map induced by a set of element pairs; `iso` additionally
/// demands injectivity and reverse preservation. A pairing that is not a
/// partial function is not a partial homomorphism.
inline bool is_partial_hom(const RelStructure& a, const RelStructure& b,
                           const std::vector<std::pair<int, int>>& pairs, bool iso) {
    std::map<int, int> fwd, bwd;
    for (auto [x, y] : pairs) {
        auto it = fwd.find(x);
        if (it != fwd.end() && it->second != y) return false;
        fwd[x] = y;
        if (iso) {
            auto jt = bwd.find(y);
            if (jt != bwd.end() && jt->second != x) return false;
            bwd[y] = x;
        }
    }
    for (const auto& rel : a.relations) {
        for (const auto& t : rel.tuples) {
            bool in_domain = true;
            std::vector<int> img(t.size());
            for (size_t i = 0; i < t.size() && in_domain; ++i) {
                auto it = fwd.find(t[i]);
                if (it == fwd.end()) in_domain = false;
                else img[i] = it->second;
            }
            if (in_domain && !b.has_tuple(rel.name, img)) return false;
        }
    }
    if (iso) {
        for (const auto& rel : b.relations) {
            for (const auto& t : rel.tuples) {
                bool in_image = true;
                std::vector<int> pre(t.size());
                for (size_t i = 0; i < t.size() && in_image; ++i) {
                    auto it = bwd.find(t[i]);
                    if (it == bwd.end()) in_image = false;
                    else pre[i] = it->second;
                }
                if (in_image && !a.has_tuple(rel.name, pre)) return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Game state: one (a,b) pair per placed pebble; placed ys are frozen.
// x slots are interchangeable, so states are canonicalized by sorting.
// ---------------------------------------------------------------------------

struct PairingState {
    std::vector<std::pair<int, int>> xs; // sorted placed-x pairs
    std::vector<std::pair<int, int>> ys; // sorted placed-y pairs
    bool operator<(const PairingState& o) const {
        return std::tie(xs, ys) < std::tie(o.xs, o.ys);
    }
    std::vector<std::pair<int, int>> all_pairs() const {
        std::vector<std::pair<int, int>> p = xs;
        p.insert(p.end(), ys.begin(), ys.end());
        return p;
    }
};

struct GameVerdict {
    enum class Winner { spoiler, duplicator };
    Winner winner = Winner::duplicator;
    std::optional<int> rounds;         // spoiler: winning round / witness length
    bool bounded = false;              // duplicator verdict holds up to the bound only
    std::vector<int> spoiler_sequence; // all-in-one games: witness pebble sequence
};

namespace detail {

inline bool pairing_ok(const RelStructure& a, const RelStructure& b, const PairingState& st,
                       bool iso) {
    return is_partial_hom(a, b, st.all_pairs(), iso);
}

/// Perfect matching on an n x n compatibility relation (Kuhn's augmenting
/// paths); decides Duplicator's bijection choices.
inline bool has_perfect_matching(int n, const std::function<bool(int, int)>& ok) {
    std::vector<int> match_b(n, -1);
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            if (ok(v, w)) adj[v].push_back(w);
    std::function<bool(int, std::vector<bool>&)> try_kuhn = [&](int v,
                                                                std::vector<bool>& used) -> bool {
        for (int w : adj[v]) {
            if (used[w]) continue;
            used[w] = true;
            if (match_b[w] == -1 || try_kuhn(match_b[w], used)) {
                match_b[w] = v;
                return true;
            }
        }
        return false;
    };
    for (int v = 0; v < n; ++v) {
        std::vector<bool> used(n, false);
        if (!try_kuhn(v, used)) return false;
    }
    return true;
}

/// Per-sequence Duplicator decision for the all-in-one games: level-wise
/// responses (arbitrary in hom mode, bijection levels in bijective mode),
/// memoized on (exact placement, position).
struct AllInOne {
    const RelStructure& a;
    const RelStructure& b;
    const PebbleAlphabet& alphabet;
    bool bijective;
    const std::vector<int>& seq;
    std::map<std::pair<std::vector<std::pair<int, int>>, size_t>, bool> memo;

    bool decide(size_t i, std::map<int, std::pair<int, int>>& placement) {
        std::vector<std::pair<int, int>> pairs;
        for (auto& [p, pr] : placement) pairs.push_back(pr);
        if (!is_partial_hom(a, b, pairs, bijective)) return false;
        if (i == seq.size()) return true;
        std::vector<std::pair<int, int>> key_pl; // (pebble, a*n_b + b) exact
        for (auto& [p, pr] : placement) key_pl.push_back({p, pr.first * (b.n + 1) + pr.second});
        auto key = std::make_pair(key_pl, i);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int z = seq[i];
        auto old = placement.find(z);
        std::optional<std::pair<int, int>> saved;
        if (old != placement.end()) saved = old->second;
        auto child = [&](int va, int vb) {
            placement[z] = {va, vb};
            bool ok = decide(i + 1, placement);
            if (saved) placement[z] = *saved;
            else placement.erase(z);
            return ok;
        };
        bool result;
        if (bijective) {
            result = has_perfect_matching(a.n, child);
        } else {
            result = true;
            for (int va = 0; va < a.n && result; ++va) {
                bool ok = false;
                for (int vb = 0; vb < b.n && !ok; ++vb) ok = child(va, vb);
                result = ok;
            }
        }
        memo[key] = result;
        return result;
    }
};

inline bool all_in_one_duplicator_wins(const RelStructure& a, const RelStructure& b,
                                       const PebbleAlphabet& alphabet, bool bijective,
                                       const std::vector<int>& seq) {
    detail::AllInOne engine{a, b, alphabet, bijective, seq, {}};
    std::map<int, std::pair<int, int>> placement;
    return engine.decide(0, placement);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Existential (k1,k2)-pebble game.
// ---------------------------------------------------------------------------

/// Decides the exists-(k1,k2)-pebble game from the empty position: Spoiler
/// re-places reusable pebbles or places fresh non-reusable ones, Duplicator
/// answers; Duplicator survives while the pairing stays a partial
/// homomorphism. Unbounded play is a greatest fixpoint; q bounds rounds.
inline GameVerdict solve_exists_pebble(const RelStructure& a, const RelStructure& b, int k1,
                                       int k2, std::optional<int> q = std::nullopt) {
    PebbleAlphabet alphabet(k1, k2);
    struct Move {
        bool use_y;
        int x_slot; // index into xs, or -1 for a fresh slot
        int elem_a;
    };
    auto legal_moves = [&](const PairingState& st) {
        std::vector<Move> moves;
        for (int ea = 0; ea < a.n; ++ea) {
            if (static_cast<int>(st.xs.size()) < k1) moves.push_back({false, -1, ea});
            for (size_t i = 0; i < st.xs.size(); ++i)
                if (i == 0 || st.xs[i] != st.xs[i - 1])
                    moves.push_back({false, static_cast<int>(i), ea});
            if (static_cast<int>(st.ys.size()) < k2) moves.push_back({true, -1, ea});
        }
        return moves;
    };
    auto apply = [&](const PairingState& st, const Move& mv, int eb) {
        PairingState next = st;
        if (mv.use_y) {
            next.ys.push_back({mv.elem_a, eb});
            std::sort(next.ys.begin(), next.ys.end());
        } else {
            if (mv.x_slot >= 0) next.xs.erase(next.xs.begin() + mv.x_slot);
            next.xs.push_back({mv.elem_a, eb});
            std::sort(next.xs.begin(), next.xs.end());
        }
        return next;
    };

    if (q) {
        std::map<std::pair<PairingState, int>, bool> memo;
        std::function<bool(const PairingState&, int)> dup_wins = [&](const PairingState& st,
                                                                     int r) -> bool {
            if (!detail::pairing_ok(a, b, st, false)) return false;
            if (r == 0) return true;
            auto key = std::make_pair(st, r);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            bool ok = true;
            for (const Move& mv : legal_moves(st)) {
                bool answered = false;
                for (int eb = 0; eb < b.n && !answered; ++eb)
                    if (dup_wins(apply(st, mv, eb), r - 1)) answered = true;
                if (!answered) { ok = false; break; }
            }
            memo[key] = ok;
            return ok;
        };
        PairingState start;
        bool dup = dup_wins(start, *q);
        GameVerdict v;
        v.winner = dup ? GameVerdict::Winner::duplicator : GameVerdict::Winner::spoiler;
        if (!dup) {
            for (int r = 0; r <= *q; ++r)
                if (!dup_wins(start, r)) { v.rounds = r; break; }
        }
        return v;
    }

    // unbounded: greatest fixpoint over all canonical partial-hom states
    std::set<PairingState> alive;
    {
        std::function<void(PairingState, int, std::pair<int, int>)> gen_y =
            [&](PairingState st, int left, std::pair<int, int> minq) {
                if (detail::pairing_ok(a, b, st, false)) alive.insert(st);
                if (left == 0) return;
                for (int ea = 0; ea < a.n; ++ea)
                    for (int eb = 0; eb < b.n; ++eb) {
                        std::pair<int, int> p{ea, eb};
                        if (p < minq) continue;
                        PairingState nx = st;
                        nx.ys.push_back(p);
                        gen_y(nx, left - 1, p);
                    }
            };
        std::function<void(PairingState, int, std::pair<int, int>)> gen_x =
            [&](PairingState st, int left, std::pair<int, int> minp) {
                gen_y(st, k2, {0, 0});
                if (left == 0) return;
                for (int ea = 0; ea < a.n; ++ea)
                    for (int eb = 0; eb < b.n; ++eb) {
                        std::pair<int, int> p{ea, eb};
                        if (p < minp) continue;
                        PairingState nx = st;
                        nx.xs.push_back(p);
                        gen_x(nx, left - 1, p);
                    }
            };
        gen_x(PairingState{}, k1, {0, 0});
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = alive.begin(); it != alive.end();) {
            bool survives = true;
            for (const Move& mv : legal_moves(*it)) {
                bool answered = false;
                for (int eb = 0; eb < b.n && !answered; ++eb)
                    if (alive.count(apply(*it, mv, eb))) answered = true;
                if (!answered) { survives = false; break; }
            }
            if (!survives) {
                it = alive.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    GameVerdict v;
    v.winner = alive.count(PairingState{}) ? GameVerdict::Winner::duplicator
                                           : GameVerdict::Winner::spoiler;
    return v;
}

// ---------------------------------------------------------------------------
// q-round bijective (k1,k2)-pebble game.
// ---------------------------------------------------------------------------

/// Each round Spoiler lifts a legal pebble, Duplicator offers a bijection
/// V(a) -> V(b), Spoiler places the pebble on (v, f(v)). Duplicator survives
/// while every pairing is a partial isomorphism. The bijection choice is
/// decided by a perfect matching on pairs whose successor positions are
/// Duplicator wins.
inline GameVerdict solve_bijective_pebble(const Graph& ga, const Graph& gb, int k1, int k2,
                                          int q) {
    PebbleAlphabet alphabet(k1, k2);
    GameVerdict v;
    if (ga.n != gb.n) {
        v.winner = GameVerdict::Winner::spoiler;
        v.rounds = 0;
        return v;
    }
    RelStructure a = to_structure(ga), b = to_structure(gb);
    std::map<std::pair<PairingState, int>, bool> memo;
    std::function<bool(const PairingState&, int)> dup_wins = [&](const PairingState& st,
                                                                 int r) -> bool {
        if (!detail::pairing_ok(a, b, st, true)) return false;
        if (r == 0) return true;
        auto key = std::make_pair(st, r);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool ok = true;
        struct Lift {
            bool use_y;
            int x_slot;
        };
        std::vector<Lift> lifts;
        if (static_cast<int>(st.xs.size()) < k1) lifts.push_back({false, -1});
        for (size_t i = 0; i < st.xs.size(); ++i)
            if (i == 0 || st.xs[i] != st.xs[i - 1]) lifts.push_back({false, static_cast<int>(i)});
        if (static_cast<int>(st.ys.size()) < k2) lifts.push_back({true, -1});
        for (const Lift& lf : lifts) {
            PairingState base = st;
            if (!lf.use_y && lf.x_slot >= 0) base.xs.erase(base.xs.begin() + lf.x_slot);
            auto child_ok = [&](int va, int vb) {
                PairingState next = base;
                if (lf.use_y) {
                    next.ys.push_back({va, vb});
                    std::sort(next.ys.begin(), next.ys.end());
                } else {
                    next.xs.push_back({va, vb});
                    std::sort(next.xs.begin(), next.xs.end());
                }
                return dup_wins(next, r - 1);
            };
            if (!detail::has_perfect_matching(ga.n, child_ok)) { ok = false; break; }
        }
        memo[key] = ok;
        return ok;
    };
    PairingState start;
    bool dup = dup_wins(start, q);
    v.winner = dup ? GameVerdict::Winner::duplicator : GameVerdict::Winner::spoiler;
    if (!dup)
        for (int r = 0; r <= q; ++r)
            if (!dup_wins(start, r)) { v.rounds = r; break; }
    return v;
}

// ---------------------------------------------------------------------------
// All-in-one games (single round, Spoiler commits the pebble sequence).
// ---------------------------------------------------------------------------

/// Bounded decision of AP^(k1,k2) (hom mode) and ABP^(k1,k2) (bijective
/// mode). Spoiler sequences up to n_max are enumerated length-first; per
/// sequence Duplicator plays level-wise. A Spoiler witness is conclusive for
/// the unbounded game; Duplicator verdicts hold up to n_max only.
inline GameVerdict solve_all_in_one(const RelStructure& a, const RelStructure& b, int k1, int k2,
                                    int n_max, bool bijective) {
    PebbleAlphabet alphabet(k1, k2);
    if (n_max < 1) throw std::invalid_argument("solve_all_in_one: n_max >= 1");
    GameVerdict v;
    if (bijective && a.n != b.n) {
        v.winner = GameVerdict::Winner::spoiler;
        v.rounds = 1;
        v.spoiler_sequence = {0};
        return v;
    }
    std::vector<int> seq;
    std::function<std::optional<std::vector<int>>(int)> search =
        [&](int remaining) -> std::optional<std::vector<int>> {
        if (!seq.empty() && !detail::all_in_one_duplicator_wins(a, b, alphabet, bijective, seq))
            return seq;
        if (remaining == 0) return std::nullopt;
        for (int z = 0; z < alphabet.size(); ++z) {
            if (alphabet.is_y(z) && std::find(seq.begin(), seq.end(), z) != seq.end()) continue;
            seq.push_back(z);
            auto found = search(remaining - 1);
            seq.pop_back();
            if (found) return found;
        }
        return std::nullopt;
    };
    auto witness = search(n_max);
    if (witness) {
        v.winner = GameVerdict::Winner::spoiler;
        v.rounds = static_cast<int>(witness->size());
        v.spoiler_sequence = *witness;
    } else {
        v.winner = GameVerdict::Winner::duplicator;
        v.bounded = true;
        v.rounds = n_max;
    }
    return v;
}

/// Replays an all-in-one spoiler witness: the sequence must again defeat
/// every level-wise Duplicator response.
inline bool replay_all_in_one_witness(const RelStructure& a, const RelStructure& b, int k1,
                                      int k2, bool bijective, const std::vector<int>& seq) {
    PebbleAlphabet alphabet(k1, k2);
    std::vector<int> counts(alphabet.size(), 0);
    for (int z : seq) {
        if (z < 0 || z >= alphabet.size()) return false;
        if (alphabet.is_y(z) && ++counts[z] > 1) return false;
    }
    return !detail::all_in_one_duplicator_wins(a, b, alphabet, bijective, seq);
}

} // namespace homlab
