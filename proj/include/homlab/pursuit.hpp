#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>

#include "graph.hpp"

namespace homlab {

// ---------------------------------------------------------------------------
// Node searching NS^(k1,k2): invisible fugitive, k2 place-once searchers.
// Cops-and-robber CR^(k1,k2)_q: visible robber, q rounds.
// ---------------------------------------------------------------------------

struct PursuitMove {
    int pebble = -1; // alphabet index
    int to = kNoVertex;
};

struct NsStrategy {
    PebbleAlphabet alphabet;
    std::vector<PursuitMove> moves;
};

enum class NsOutcome { searchers_win, fugitive_wins };
enum class NsDirectOutcome { searchers_win, fugitive_wins, inconclusive };
enum class CrOutcome { cops_win, robber_wins };

namespace detail {

/// Fugitive region after lifting the searcher at `lifted` (kNoVertex if the
/// move uses an unplaced searcher): union of components of G - occupied that
/// meet the old region.
inline VertexSet spread(const Graph& g, VertexSet region, VertexSet occupied) {
    VertexSet out = 0, rest = region & ~occupied;
    while (rest) {
        VertexSet c = g.component_of(lowest_bit(rest), g.all_vertices() & ~occupied);
        out |= c;
        rest &= ~c;
    }
    return out;
}

/// Classic k1-searcher node search on g - blocked, set semantics. States are
/// (placement set, contaminated set); `monotone_only` restricts to moves
/// whose lift does not recontaminate.
struct InnerNs {
    const Graph& g;
    VertexSet blocked;
    int k1;
    bool monotone_only;

    struct State {
        VertexSet placed, region;
        bool operator<(const State& o) const {
            return std::tie(placed, region) < std::tie(o.placed, o.region);
        }
    };
    // parent pointers for strategy extraction: state -> (prev, lifted, placed_at)
    std::map<State, std::tuple<State, int, int>> parent;

    std::optional<State> solve() {
        VertexSet start_region = g.all_vertices() & ~blocked;
        State start{0, start_region};
        if (start_region == 0) return start;
        std::deque<State> queue{start};
        parent[start] = {start, kNoVertex, kNoVertex};
        while (!queue.empty()) {
            State cur = queue.front();
            queue.pop_front();
            // moves: (lift u | fresh) x (place w | nothing)
            std::vector<int> lifts{kNoVertex};
            VertexSet it = cur.placed;
            while (it) {
                lifts.push_back(lowest_bit(it));
                it &= it - 1;
            }
            for (int u : lifts) {
                VertexSet placed_mid = cur.placed & ~(u == kNoVertex ? 0 : bit(u));
                if (u == kNoVertex && popcount(cur.placed) >= k1) continue;
                if (monotone_only && u != kNoVertex && (g.adj[u] & cur.region)) continue;
                VertexSet mid = spread(g, cur.region, placed_mid | blocked);
                for (int w = 0; w <= g.n; ++w) {
                    VertexSet place_bit = w == g.n ? 0 : bit(w); // w == g.n means lift only
                    if (place_bit) {
                        if (place_bit & (placed_mid | blocked)) continue;
                        if (u == kNoVertex && popcount(cur.placed) + 1 > k1) continue;
                    } else if (u == kNoVertex) {
                        continue; // no-op
                    }
                    State next{placed_mid | place_bit, mid & ~(placed_mid | place_bit | blocked)};
                    if (parent.count(next)) continue;
                    parent[next] = {cur, u, place_bit ? w : kNoVertex};
                    if (next.region == 0) return next;
                    queue.push_back(next);
                }
            }
        }
        return std::nullopt;
    }
};

} // namespace detail

struct NsResult {
    NsOutcome outcome;
    std::optional<NsStrategy> strategy; // present iff searchers win
};

/// Exact decision of NS^(k1,k2)(g): exception sets of size <= k2 are
/// enumerated in increasing size (the non-reusable-first normal form), the
/// rest is the classic reusable game on g - I. The emitted strategy is
/// monotone; a monotone/unrestricted disagreement would be a theorem
/// violation and throws.
inline NsResult solve_ns(const Graph& g, int k1, int k2) {
    PebbleAlphabet alphabet(k1, k2);
    std::vector<VertexSet> sets;
    VertexSet all = g.all_vertices();
    VertexSet s = 0;
    while (true) {
        if (popcount(s) <= k2) sets.push_back(s);
        if (s == all) break;
        s = (s - all) & all;
    }
    std::sort(sets.begin(), sets.end(), [](VertexSet a, VertexSet b) {
        return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
    });
    for (VertexSet blocked : sets) {
        detail::InnerNs mono{g, blocked, k1, true, {}};
        auto win = mono.solve();
        if (!win) {
            detail::InnerNs full{g, blocked, k1, false, {}};
            if (full.solve())
                throw theorem_violation("solve_ns: non-monotone win without monotone win");
            continue;
        }
        // assemble: y placements on the exception set, then the inner moves
        NsStrategy strat{alphabet, {}};
        int y_index = 0;
        VertexSet it = blocked;
        while (it) {
            int v = lowest_bit(it);
            it &= it - 1;
            strat.moves.push_back({k1 + y_index++, v});
        }
        // unwind parent pointers
        std::vector<std::pair<int, int>> inner; // (lift vertex, place vertex)
        detail::InnerNs::State cur = *win;
        detail::InnerNs::State start{0, g.all_vertices() & ~blocked};
        while (!(cur.placed == start.placed && cur.region == start.region)) {
            auto [prev, lifted, placed_at] = mono.parent[cur];
            inner.push_back({lifted, placed_at});
            cur = prev;
        }
        std::reverse(inner.begin(), inner.end());
        // assign x identities: lowest free index on fresh placement
        std::map<int, int> pebble_at; // vertex -> x pebble
        std::vector<bool> x_placed(k1, false);
        for (auto [lift, place] : inner) {
            int p;
            if (lift != kNoVertex) {
                p = pebble_at.at(lift);
                pebble_at.erase(lift);
            } else {
                p = 0;
                while (x_placed[p]) ++p;
            }
            if (place != kNoVertex) {
                pebble_at[place] = p;
                x_placed[p] = true;
            } else {
                x_placed[p] = false;
            }
            strat.moves.push_back({p, place});
        }
        return {NsOutcome::searchers_win, strat};
    }
    return {NsOutcome::fugitive_wins, std::nullopt};
}

/// Direct search over move sequences of the full (k1,k2) game semantics,
/// with pebble identities and reachable-set dedup. Oracle for solve_ns.
inline NsDirectOutcome solve_ns_direct(const Graph& g, int k1, int k2, int max_moves) {
    PebbleAlphabet alphabet(k1, k2);
    using Placement = std::vector<int>; // pebble -> vertex or kNoVertex
    struct State {
        Placement placement;
        VertexSet region;
        bool operator<(const State& o) const {
            return std::tie(placement, region) < std::tie(o.placement, o.region);
        }
    };
    auto occupied = [&](const Placement& p) {
        VertexSet s = 0;
        for (int v : p)
            if (v != kNoVertex) s |= bit(v);
        return s;
    };
    State start{Placement(alphabet.size(), kNoVertex), g.all_vertices()};
    if (start.region == 0) return NsDirectOutcome::searchers_win;
    std::map<State, int> seen{{start, 0}};
    std::deque<State> layer{start};
    for (int depth = 0; depth < max_moves && !layer.empty(); ++depth) {
        std::deque<State> next_layer;
        while (!layer.empty()) {
            State cur = layer.front();
            layer.pop_front();
            for (int z = 0; z < alphabet.size(); ++z) {
                if (alphabet.is_y(z) && cur.placement[z] != kNoVertex) continue;
                Placement lifted = cur.placement;
                lifted[z] = kNoVertex;
                VertexSet mid = detail::spread(g, cur.region, occupied(lifted));
                for (int w = 0; w <= g.n; ++w) {
                    Placement next = lifted;
                    next[z] = w == g.n ? kNoVertex : w;
                    State ns{next, mid & ~occupied(next)};
                    if (ns.region == 0) return NsDirectOutcome::searchers_win;
                    if (seen.count(ns)) continue;
                    seen[ns] = depth + 1;
                    next_layer.push_back(ns);
                }
            }
        }
        layer = std::move(next_layer);
    }
    return layer.empty() ? NsDirectOutcome::fugitive_wins : NsDirectOutcome::inconclusive;
}

// ---------------------------------------------------------------------------
// Cops and robber.
// ---------------------------------------------------------------------------

struct CrPosition {
    std::vector<int> xs; // sorted placed-x vertices (multiset)
    std::vector<int> ys; // sorted placed-y vertices
    VertexSet region = 0;
    int rounds_left = 0;
    bool operator<(const CrPosition& o) const {
        return std::tie(xs, ys, region, rounds_left) <
               std::tie(o.xs, o.ys, o.region, o.rounds_left);
    }
};

struct CrMove {
    bool use_y = false;
    int lift_vertex = kNoVertex; // x moves: vertex the lifted cop stands on
    int to = kNoVertex;
};

struct CrStrategy {
    PebbleAlphabet alphabet;
    int rounds = 0;
    std::map<CrPosition, CrMove> table;
};

struct CrResult {
    CrOutcome outcome;
    std::optional<CrStrategy> strategy;
};

namespace detail {

struct CrSolver {
    const Graph& g;
    int k1, k2;
    bool monotone_only;
    std::map<CrPosition, bool> memo;
    std::map<CrPosition, CrMove> choice;

    VertexSet occupied(const CrPosition& p) const {
        VertexSet s = 0;
        for (int v : p.xs) s |= bit(v);
        for (int v : p.ys) s |= bit(v);
        return s;
    }

    bool cops_win(const CrPosition& pos) {
        if (pos.region == 0) return true;
        if (pos.rounds_left == 0) return false;
        auto it = memo.find(pos);
        if (it != memo.end()) return it->second;
        memo[pos] = false; // cycle guard; rounds strictly decrease anyway
        bool win = false;
        CrMove winning;
        // candidate moves in deterministic order: x-lifts by vertex (fresh x
        // first when available), then a fresh y; destinations ascending, then
        // bot
        std::vector<std::pair<bool, int>> picks; // (use_y, lift_vertex)
        if (static_cast<int>(pos.xs.size()) < k1) picks.push_back({false, kNoVertex});
        for (size_t i = 0; i < pos.xs.size(); ++i)
            if (i == 0 || pos.xs[i] != pos.xs[i - 1]) picks.push_back({false, pos.xs[i]});
        if (static_cast<int>(pos.ys.size()) < k2) picks.push_back({true, kNoVertex});
        for (auto [use_y, lift] : picks) {
            if (win) break;
            if (monotone_only && lift != kNoVertex && (g.adj[lift] & pos.region)) continue;
            std::vector<int> xs_mid = pos.xs;
            if (!use_y && lift != kNoVertex)
                xs_mid.erase(std::find(xs_mid.begin(), xs_mid.end(), lift));
            VertexSet occ_mid = 0;
            for (int v : xs_mid) occ_mid |= bit(v);
            for (int v : pos.ys) occ_mid |= bit(v);
            VertexSet mid = spread(g, pos.region, occ_mid);
            for (int w = 0; w <= g.n && !win; ++w) {
                bool place = w < g.n;
                if (place && (occ_mid & bit(w))) continue;
                CrPosition base;
                base.xs = xs_mid;
                base.ys = pos.ys;
                if (place) {
                    if (use_y) base.ys.push_back(w);
                    else base.xs.push_back(w);
                } else if (use_y) {
                    continue; // y declared bot: no-op round, never helps
                }
                std::sort(base.xs.begin(), base.xs.end());
                std::sort(base.ys.begin(), base.ys.end());
                VertexSet occ_new = occupied(base);
                VertexSet survivors = mid & ~occ_new;
                bool all = true;
                for (VertexSet comp : g.components(survivors)) {
                    CrPosition child = base;
                    child.region = comp;
                    child.rounds_left = pos.rounds_left - 1;
                    if (!cops_win(child)) { all = false; break; }
                }
                if (all) {
                    win = true;
                    winning.use_y = use_y;
                    winning.lift_vertex = lift;
                    winning.to = place ? w : kNoVertex;
                }
            }
        }
        memo[pos] = win;
        if (win) choice[pos] = winning;
        return win;
    }
};

} // namespace detail

/// Exact decision of CR^(k1,k2)_q(g) by backward induction over positions.
/// The emitted strategy comes from the monotone-restricted induction; a
/// disagreement between the two inductions throws.
inline CrResult solve_cr(const Graph& g, int k1, int k2, int q) {
    if (q < 1) throw std::invalid_argument("solve_cr: q >= 1");
    PebbleAlphabet alphabet(k1, k2);
    auto run = [&](bool monotone) {
        auto solver = std::make_unique<detail::CrSolver>(
            detail::CrSolver{g, k1, k2, monotone, {}, {}});
        CrPosition start;
        start.region = g.all_vertices();
        start.rounds_left = q;
        bool win = solver->cops_win(start);
        return std::make_pair(win, std::move(solver));
    };
    auto [mono_win, mono_solver] = run(true);
    if (!mono_win) {
        auto [full_win, full_solver] = run(false);
        if (full_win) throw theorem_violation("solve_cr: non-monotone win without monotone win");
        return {CrOutcome::robber_wins, std::nullopt};
    }
    CrStrategy strat{alphabet, q, {}};
    // collect the reachable winning positions under the chosen moves
    std::function<void(const CrPosition&)> walk = [&](const CrPosition& pos) {
        if (pos.region == 0 || strat.table.count(pos)) return;
        CrMove mv = mono_solver->choice.at(pos);
        strat.table[pos] = mv;
        std::vector<int> xs_mid = pos.xs;
        if (!mv.use_y && mv.lift_vertex != kNoVertex)
            xs_mid.erase(std::find(xs_mid.begin(), xs_mid.end(), mv.lift_vertex));
        VertexSet occ_mid = 0;
        for (int v : xs_mid) occ_mid |= bit(v);
        for (int v : pos.ys) occ_mid |= bit(v);
        VertexSet mid = detail::spread(g, pos.region, occ_mid);
        CrPosition base;
        base.xs = xs_mid;
        base.ys = pos.ys;
        if (mv.to != kNoVertex) {
            if (mv.use_y) base.ys.push_back(mv.to);
            else base.xs.push_back(mv.to);
        }
        std::sort(base.xs.begin(), base.xs.end());
        std::sort(base.ys.begin(), base.ys.end());
        VertexSet occ_new = 0;
        for (int v : base.xs) occ_new |= bit(v);
        for (int v : base.ys) occ_new |= bit(v);
        VertexSet survivors = mid & ~occ_new;
        for (VertexSet comp : g.components(survivors)) {
            CrPosition child = base;
            child.region = comp;
            child.rounds_left = pos.rounds_left - 1;
            walk(child);
        }
    };
    CrPosition start;
    start.region = g.all_vertices();
    start.rounds_left = q;
    walk(start);
    return {CrOutcome::cops_win, strat};
}

// ---------------------------------------------------------------------------
// Monotonicity checks.
// ---------------------------------------------------------------------------

/// Replays an NS strategy and checks that no lift enlarges any possible
/// fugitive component. Throws on illegal strategies.
inline bool is_monotone_ns(const NsStrategy& s, const Graph& g) {
    std::vector<int> placement(s.alphabet.size(), kNoVertex);
    std::vector<bool> y_used(std::max(s.alphabet.k2, 1), false);
    VertexSet region = g.all_vertices();
    bool monotone = true;
    for (const auto& mv : s.moves) {
        if (mv.pebble < 0 || mv.pebble >= s.alphabet.size())
            throw std::invalid_argument("is_monotone_ns: bad pebble");
        if (s.alphabet.is_y(mv.pebble)) {
            int yi = mv.pebble - s.alphabet.k1;
            if (y_used[yi]) throw std::invalid_argument("is_monotone_ns: y reused");
            if (mv.to != kNoVertex) y_used[yi] = true;
        }
        int u = placement[mv.pebble];
        if (u != kNoVertex && (g.adj[u] & region)) monotone = false;
        VertexSet occ_mid = 0;
        placement[mv.pebble] = kNoVertex;
        for (int v : placement)
            if (v != kNoVertex) occ_mid |= bit(v);
        VertexSet mid = detail::spread(g, region, occ_mid);
        placement[mv.pebble] = mv.to;
        VertexSet occ = occ_mid | (mv.to == kNoVertex ? 0 : bit(mv.to));
        region = mid & ~occ;
    }
    if (region != 0) throw std::invalid_argument("is_monotone_ns: strategy does not win");
    return monotone;
}

/// Replays a CR strategy table over all robber responses.
inline bool is_monotone_cr(const CrStrategy& s, const Graph& g) {
    bool monotone = true;
    std::function<void(const CrPosition&)> walk = [&](const CrPosition& pos) {
        if (pos.region == 0) return;
        auto it = s.table.find(pos);
        if (it == s.table.end())
            throw std::invalid_argument("is_monotone_cr: unreachable position in play");
        const CrMove& mv = it->second;
        if (mv.lift_vertex != kNoVertex && (g.adj[mv.lift_vertex] & pos.region)) monotone = false;
        std::vector<int> xs_mid = pos.xs;
        if (!mv.use_y && mv.lift_vertex != kNoVertex)
            xs_mid.erase(std::find(xs_mid.begin(), xs_mid.end(), mv.lift_vertex));
        VertexSet occ_mid = 0;
        for (int v : xs_mid) occ_mid |= bit(v);
        for (int v : pos.ys) occ_mid |= bit(v);
        VertexSet mid = detail::spread(g, pos.region, occ_mid);
        CrPosition base;
        base.xs = xs_mid;
        base.ys = pos.ys;
        if (mv.to != kNoVertex) {
            if (mv.use_y) base.ys.push_back(mv.to);
            else base.xs.push_back(mv.to);
        }
        std::sort(base.xs.begin(), base.xs.end());
        std::sort(base.ys.begin(), base.ys.end());
        VertexSet occ_new = 0;
        for (int v : base.xs) occ_new |= bit(v);
        for (int v : base.ys) occ_new |= bit(v);
        if (pos.rounds_left <= 0)
            throw std::invalid_argument("is_monotone_cr: move after round budget");
        VertexSet survivors = mid & ~occ_new;
        for (VertexSet comp : g.components(survivors)) {
            CrPosition child = base;
            child.region = comp;
            child.rounds_left = pos.rounds_left - 1;
            walk(child);
        }
    };
    CrPosition start;
    start.region = g.all_vertices();
    start.rounds_left = s.rounds;
    walk(start);
    return monotone;
}

// ---------------------------------------------------------------------------
// Class membership.
// ---------------------------------------------------------------------------

enum class GraphClass { P, UP, T };

/// P(k1,k2): searchers win NS on g. UP(k1,k2): searchers win NS on every
/// component. T(k1,k2,q): cops win CR_q on g.
inline bool membership(const Graph& g, GraphClass cls, int k1, int k2, int q = 0) {
    switch (cls) {
        case GraphClass::P:
            return solve_ns(g, k1, k2).outcome == NsOutcome::searchers_win;
        case GraphClass::UP: {
            for (VertexSet comp : g.components()) {
                Graph sub = g.induced(comp);
                if (solve_ns(sub, k1, k2).outcome != NsOutcome::searchers_win) return false;
            }
            return true;
        }
        case GraphClass::T:
            return solve_cr(g, k1, k2, q).outcome == CrOutcome::cops_win;
    }
    return false;
}

} // namespace homlab
