// Conversion to automata deterministic up to epsilon jumps.
//
// Three stages, tried in order:
//  1. Language-preserving NBA reductions (direct-simulation edge pruning,
//     quotient by mutual simulation, dead-state removal). Many formulas come
//     out deterministic and convert directly.
//  2. A structural rewrite for "guess" nondeterminism into single-state
//     suffix loops (the persistence pattern): such edges become epsilon
//     jumps. Sound exactly when the cross letters equal the loop letters.
//  3. A direct construction by formula progression with guessed sets of
//     invariant subformulas, used when the NBA route does not apply. This
//     handles full LTL at the cost of larger automata.

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>

#include "pltl/automata.hpp"

namespace pltl {

// ---------------------------------------------------------------------------
// NBA reductions
// ---------------------------------------------------------------------------

namespace {

// Maximal direct simulation: sim[p][q] means q simulates p (acceptance of p
// implies acceptance of q, and every move of p is matched by q into a
// simulating successor).
std::vector<std::vector<char>> direct_simulation(const NBA& a) {
    const int n = a.size();
    const int nl = a.sigma.letters();
    std::vector<std::vector<char>> sim(n, std::vector<char>(n, 1));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (a.accepting[p] && !a.accepting[q]) sim[p][q] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                if (!sim[p][q]) continue;
                bool ok = true;
                for (int v = 0; v < nl && ok; ++v)
                    for (int ps : a.delta[p][v]) {
                        bool matched = false;
                        for (int qs : a.delta[q][v])
                            if (sim[ps][qs]) {
                                matched = true;
                                break;
                            }
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                if (!ok) {
                    sim[p][q] = 0;
                    changed = true;
                }
            }
    }
    return sim;
}

NBA trim_nba(const NBA& a, const std::vector<char>& keep) {
    NBA b;
    b.sigma = a.sigma;
    const int nl = a.sigma.letters();
    std::vector<int> remap(a.size(), -1);
    int m = 0;
    for (int q = 0; q < a.size(); ++q)
        if (keep[q]) remap[q] = m++;
    if (remap[a.initial] < 0) {
        // Empty language: a single rejecting state with no edges.
        b.initial = 0;
        b.names = {a.names.empty() ? std::string("init") : a.names[a.initial]};
        b.accepting = {0};
        b.delta.assign(1, std::vector<std::vector<int>>(nl));
        return b;
    }
    b.initial = remap[a.initial];
    b.names.resize(m);
    b.accepting.resize(m);
    b.delta.assign(m, std::vector<std::vector<int>>(nl));
    for (int q = 0; q < a.size(); ++q) {
        if (!keep[q]) continue;
        b.names[remap[q]] = a.names[q];
        b.accepting[remap[q]] = a.accepting[q];
        for (int v = 0; v < nl; ++v)
            for (int r : a.delta[q][v])
                if (keep[r]) b.delta[remap[q]][v].push_back(remap[r]);
    }
    for (auto& row : b.delta)
        for (auto& cell : row) {
            std::sort(cell.begin(), cell.end());
            cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
        }
    return b;
}

std::vector<char> reachable_states(const NBA& a) {
    std::vector<char> reach(a.size(), 0);
    std::queue<int> bfs;
    reach[a.initial] = 1;
    bfs.push(a.initial);
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (const auto& cell : a.delta[q])
            for (int r : cell)
                if (!reach[r]) {
                    reach[r] = 1;
                    bfs.push(r);
                }
    }
    return reach;
}

std::vector<std::vector<int>> flat_graph(const NBA& a) {
    std::vector<std::vector<int>> adj(a.size());
    for (int q = 0; q < a.size(); ++q) {
        std::set<int> s;
        for (const auto& cell : a.delta[q]) s.insert(cell.begin(), cell.end());
        adj[q].assign(s.begin(), s.end());
    }
    return adj;
}

// SCC component ids via iterative Tarjan.
std::vector<int> scc_components(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> comp(n, -1), idx(n, -1), low(n), stk;
    std::vector<char> onstk(n, 0);
    int counter = 0, ncomp = 0;
    for (int root = 0; root < n; ++root) {
        if (idx[root] >= 0) continue;
        std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
        while (!frames.empty()) {
            auto& [v, ei] = frames.back();
            if (ei == 0) {
                idx[v] = low[v] = counter++;
                stk.push_back(v);
                onstk[v] = 1;
            }
            bool down = false;
            while (ei < adj[v].size()) {
                int w = adj[v][ei++];
                if (idx[w] < 0) {
                    frames.emplace_back(w, 0);
                    down = true;
                    break;
                }
                if (onstk[w]) low[v] = std::min(low[v], idx[w]);
            }
            if (down) continue;
            if (low[v] == idx[v]) {
                while (true) {
                    int w = stk.back();
                    stk.pop_back();
                    onstk[w] = 0;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            int vv = v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().first] = std::min(low[frames.back().first], low[vv]);
        }
    }
    return comp;
}

// States that lie on some cycle: nontrivial component, or a self-loop.
std::vector<char> states_on_cycle(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> comp = scc_components(adj);
    std::vector<int> comp_size(n, 0);
    for (int q = 0; q < n; ++q) ++comp_size[comp[q]];
    std::vector<char> cyc(n, 0);
    for (int q = 0; q < n; ++q) {
        if (comp_size[comp[q]] > 1) cyc[q] = 1;
        for (int r : adj[q])
            if (r == q) cyc[q] = 1;
    }
    return cyc;
}

// States from which some accepting run exists: can reach an accepting state
// that lies on a cycle.
std::vector<char> live_states(const NBA& a) {
    const int n = a.size();
    std::vector<std::vector<int>> adj = flat_graph(a);
    std::vector<int> comp = scc_components(adj);
    // Accepting states inside a component with an internal edge are "good".
    std::vector<char> good(n, 0);
    for (int q = 0; q < n; ++q) {
        if (!a.accepting[q]) continue;
        for (int r : adj[q])
            if (comp[r] == comp[q]) {
                good[q] = 1;
                break;
            }
        // A state in a nontrivial component reaches itself even without a
        // direct internal edge from q; check component size via peers.
        if (!good[q])
            for (int p = 0; p < n && !good[q]; ++p)
                if (p != q && comp[p] == comp[q]) good[q] = 1;
    }
    // Backward reachability from good states.
    std::vector<std::vector<int>> radj(n);
    for (int q = 0; q < n; ++q)
        for (int r : adj[q]) radj[r].push_back(q);
    std::vector<char> live(n, 0);
    std::queue<int> bfs;
    for (int q = 0; q < n; ++q)
        if (good[q]) {
            live[q] = 1;
            bfs.push(q);
        }
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (int p : radj[q])
            if (!live[p]) {
                live[p] = 1;
                bfs.push(p);
            }
    }
    return live;
}

}  // namespace

NBA reduce_nba(const NBA& input) {
    NBA a = trim_nba(input, reachable_states(input));
    for (int round = 0; round < 6; ++round) {
        int before_states = a.size();
        long before_edges = 0;
        for (const auto& row : a.delta)
            for (const auto& cell : row) before_edges += static_cast<long>(cell.size());

        std::vector<char> cyc = states_on_cycle(flat_graph(a));
        auto sim = direct_simulation(a);
        const int nl = a.sigma.letters();
        // Merge states with identical transition rows whose flags agree up
        // to inert acceptance: a flag on a state outside every cycle never
        // fires on a run, so such states are interchangeable.
        {
            bool merged = true;
            while (merged) {
                merged = false;
                std::vector<char> eff(a.size());
                for (int q = 0; q < a.size(); ++q)
                    eff[q] = a.accepting[q] && cyc[q];
                for (int u = 0; u < a.size() && !merged; ++u)
                    for (int v = u + 1; v < a.size() && !merged; ++v) {
                        if (eff[u] != eff[v] || a.delta[u] != a.delta[v]) continue;
                        a.accepting[u] = eff[u];
                        for (auto& row : a.delta)
                            for (auto& cell : row) {
                                for (auto& t : cell)
                                    if (t == v) t = u;
                                std::sort(cell.begin(), cell.end());
                                cell.erase(std::unique(cell.begin(), cell.end()),
                                           cell.end());
                            }
                        if (a.initial == v) a.initial = u;
                        std::vector<char> keep(a.size(), 1);
                        keep[v] = 0;
                        a = trim_nba(a, keep);
                        cyc = states_on_cycle(flat_graph(a));
                        sim = direct_simulation(a);
                        merged = true;
                    }
            }
        }
        // Edge pruning: drop a successor subsumed by a strictly better (or
        // equal with smaller index) sibling.
        for (int p = 0; p < a.size(); ++p)
            for (int v = 0; v < nl; ++v) {
                auto& cell = a.delta[p][v];
                std::vector<int> kept;
                for (int q1 : cell) {
                    bool drop = false;
                    for (int q2 : cell) {
                        if (q2 == q1) continue;
                        if (sim[q1][q2] && (!sim[q2][q1] || q2 < q1)) {
                            drop = true;
                            break;
                        }
                    }
                    if (!drop) kept.push_back(q1);
                }
                cell = std::move(kept);
            }
        // Quotient by mutual simulation.
        std::vector<int> rep(a.size());
        for (int q = 0; q < a.size(); ++q) {
            rep[q] = q;
            for (int p = 0; p < q; ++p)
                if (sim[p][q] && sim[q][p]) {
                    rep[q] = rep[p];
                    break;
                }
        }
        // The merged flag comes from members on a cycle only: inert flags on
        // transient members must not leak into a class that loops.
        {
            std::vector<char> newacc(a.size(), 0);
            for (int q = 0; q < a.size(); ++q)
                if (a.accepting[q] && cyc[q]) newacc[rep[q]] = 1;
            a.accepting = std::move(newacc);
        }
        for (auto& row : a.delta)
            for (auto& cell : row) {
                for (auto& t : cell) t = rep[t];
                std::sort(cell.begin(), cell.end());
                cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
            }
        a.initial = rep[a.initial];
        std::vector<char> keep(a.size(), 0);
        for (int q = 0; q < a.size(); ++q) keep[rep[q]] = 1;
        a = trim_nba(a, keep);
        a = trim_nba(a, reachable_states(a));
        {
            auto live = live_states(a);
            // Keep the initial state even when its language is empty so the
            // automaton stays well-formed.
            std::vector<char> keep2 = live;
            keep2[a.initial] = keep2[a.initial] || 1;
            NBA b = trim_nba(a, keep2);
            // Edges into non-live states were already removed by trim when
            // the state vanished; edges to a kept-but-dead initial cannot
            // exist (nothing targets it after trim unless it is live).
            a = std::move(b);
        }

        long after_edges = 0;
        for (const auto& row : a.delta)
            for (const auto& cell : row) after_edges += static_cast<long>(cell.size());
        if (a.size() == before_states && after_edges == before_edges) break;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Structural conversion (stages 1 and 2)
// ---------------------------------------------------------------------------

namespace {

LDBA from_deterministic(const NBA& a, const std::vector<std::vector<char>>& eps,
                        const std::vector<char>& explicit_acc_part) {
    // `a` must be letter-deterministic (at most one successor per letter).
    const int nl = a.sigma.letters();
    LDBA out;
    out.sigma = a.sigma;
    const int dead = a.size();
    out.states.resize(a.size() + 1);
    for (int q = 0; q < a.size(); ++q) {
        auto& st = out.states[q];
        st.name = a.names[q];
        st.succ.assign(nl, dead);
        st.acc.assign(nl, 0);
        for (int v = 0; v < nl; ++v)
            if (!a.delta[q][v].empty()) {
                st.succ[v] = a.delta[q][v][0];
                st.acc[v] = a.accepting[st.succ[v]];
            }
        for (int r = 0; r < a.size(); ++r)
            if (!eps.empty() && eps[q][r]) st.eps.push_back(r);
    }
    auto& ds = out.states[dead];
    ds.name = "dead";
    ds.succ.assign(nl, dead);
    ds.acc.assign(nl, 0);
    ds.accepting_part = true;

    // Accepting part: closure under successors of accepting states and
    // epsilon targets (plus anything explicitly marked).
    std::queue<int> bfs;
    auto mark = [&](int q) {
        if (!out.states[q].accepting_part) {
            out.states[q].accepting_part = true;
            bfs.push(q);
        }
    };
    for (int q = 0; q < a.size(); ++q) {
        if (a.accepting[q]) mark(q);
        if (!explicit_acc_part.empty() && explicit_acc_part[q]) mark(q);
        for (int r : out.states[q].eps) mark(r);
    }
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (int v = 0; v < nl; ++v) mark(out.states[q].succ[v]);
    }
    out.initial = a.initial;
    for (int q = 0; q <= a.size(); ++q)
        if (!out.states[q].eps.empty() && out.states[q].accepting_part)
            throw NotLimitDeterminizable(
                "epsilon source would fall inside the accepting part");
    validate_ldba(out);
    return reduce_ldba(out);
}

}  // namespace

LDBA nba_to_ldba(const NBA& input) {
    NBA a = reduce_nba(input);
    const int nl = a.sigma.letters();

    auto deterministic = [&](const NBA& n) {
        for (const auto& row : n.delta)
            for (const auto& cell : row)
                if (cell.size() > 1) return false;
        return true;
    };

    if (deterministic(a)) return from_deterministic(a, {}, {});

    // Persistence rewrite: for a pair (p, q) where q is a single-state suffix
    // loop, all conflicting edges p -> q coexist with p -> p, and the letters
    // on which p guesses q are exactly q's loop letters, the guess can move
    // to an epsilon jump. Old runs crossing on letter v are matched by
    // jumping first and reading v from q (q loops on v); new runs jumping
    // after some prefix are matched by crossing on the first letter of the
    // accepted suffix, which must be a loop letter of q.
    std::vector<std::vector<char>> eps(a.size(), std::vector<char>(a.size(), 0));
    bool rewrote = true;
    while (rewrote) {
        rewrote = false;
        for (int p = 0; p < a.size(); ++p)
            for (int q = 0; q < a.size(); ++q) {
                if (p == q) continue;
                // q must loop onto itself only.
                bool suffix = true;
                std::vector<char> loop(nl, 0);
                for (int v = 0; v < nl; ++v) {
                    const auto& cell = a.delta[q][v];
                    if (cell.empty()) continue;
                    if (cell.size() > 1 || cell[0] != q) {
                        suffix = false;
                        break;
                    }
                    loop[v] = 1;
                }
                if (!suffix) continue;
                std::vector<char> cross(nl, 0);
                bool shape_ok = true;
                bool any = false;
                for (int v = 0; v < nl; ++v) {
                    const auto& cell = a.delta[p][v];
                    bool has_q = std::find(cell.begin(), cell.end(), q) != cell.end();
                    if (!has_q) continue;
                    any = true;
                    cross[v] = 1;
                    if (cell.size() != 2 ||
                        std::find(cell.begin(), cell.end(), p) == cell.end())
                        shape_ok = false;
                }
                if (!any || !shape_ok || cross != loop) continue;
                for (int v = 0; v < nl; ++v)
                    if (cross[v]) {
                        auto& cell = a.delta[p][v];
                        cell.erase(std::remove(cell.begin(), cell.end(), q), cell.end());
                    }
                eps[p][q] = 1;
                rewrote = true;
            }
    }
    if (!deterministic(a))
        throw NotLimitDeterminizable(
            "automaton is not deterministic up to persistence guesses");
    return from_deterministic(a, eps, {});
}

// ---------------------------------------------------------------------------
// Direct construction by formula progression (stage 3)
// ---------------------------------------------------------------------------

namespace {

// Rewrite release in terms of always/until so progression only needs
// X, U, F, G over literals.
Formula drop_release(const Formula& f) {
    std::vector<Formula> kids;
    for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(drop_release(f.child(i)));
    switch (f.kind()) {
        case Kind::Release:
            return Formula::make_or(
                Formula::always(kids[1]),
                Formula::until(kids[1], Formula::make_and(kids[0], kids[1])));
        case Kind::True: case Kind::False: case Kind::Atom: return f;
        case Kind::Not: return Formula::make_not(kids[0]);
        case Kind::And: return Formula::make_and(kids[0], kids[1]);
        case Kind::Or: return Formula::make_or(kids[0], kids[1]);
        case Kind::Next: return Formula::next(kids[0]);
        case Kind::Until: return Formula::until(kids[0], kids[1]);
        case Kind::Eventually: return Formula::eventually(kids[0]);
        case Kind::Always: return Formula::always(kids[0]);
        case Kind::Implies: break;
    }
    throw AutomatonError("progression input must be in negation normal form");
}

// Truth table over a fixed atom list (temporal subformulas and literals),
// one bit per assignment. States of the construction are such tables, which
// canonicalizes propositionally equivalent formulas.
struct Table {
    std::vector<std::uint64_t> bits;
    bool operator==(const Table& o) const { return bits == o.bits; }
    bool operator<(const Table& o) const { return bits < o.bits; }
};

struct Progression {
    std::vector<Formula> atoms;          // temporal subformulas + literals
    std::map<Formula, int> atom_index;
    int m = 0;
    std::size_t words = 1;
    const Alphabet* sigma = nullptr;

    Table constant(bool b) const {
        Table t;
        t.bits.assign(words, b ? ~0ull : 0ull);
        if (b && (m < 6)) {
            std::uint64_t mask = (m >= 6) ? ~0ull : ((1ull << (1u << m)) - 1);
            t.bits[0] = mask;
        }
        return t;
    }
    bool is_true(const Table& t) const { return t == constant(true); }
    bool is_false(const Table& t) const { return t == constant(false); }
    Table var(int i) const {
        Table t = constant(false);
        std::size_t total = 1ull << m;
        for (std::size_t A = 0; A < total; ++A)
            if (A & (1ull << i)) t.bits[A >> 6] |= 1ull << (A & 63);
        return t;
    }
    static Table t_and(const Table& a, const Table& b) {
        Table t = a;
        for (std::size_t i = 0; i < t.bits.size(); ++i) t.bits[i] &= b.bits[i];
        return t;
    }
    static Table t_or(const Table& a, const Table& b) {
        Table t = a;
        for (std::size_t i = 0; i < t.bits.size(); ++i) t.bits[i] |= b.bits[i];
        return t;
    }
    bool eval(const Table& t, std::size_t assignment) const {
        return (t.bits[assignment >> 6] >> (assignment & 63)) & 1;
    }

    void add_atom(const Formula& f) {
        if (atom_index.count(f)) return;
        atom_index.emplace(f, static_cast<int>(atoms.size()));
        atoms.push_back(f);
    }

    // Collect the atoms every progression of `f` can mention: temporal
    // subformulas and literals of the release-free closure.
    void collect(const Formula& f) {
        switch (f.kind()) {
            case Kind::True: case Kind::False:
                return;
            case Kind::Atom:
                add_atom(f);
                return;
            case Kind::Not:
                add_atom(f);
                return;
            case Kind::And: case Kind::Or:
                collect(f.child(0));
                collect(f.child(1));
                return;
            case Kind::Next:
                add_atom(f);
                collect(f.child(0));
                return;
            case Kind::Eventually: case Kind::Always:
                add_atom(f);
                collect(f.child(0));
                return;
            case Kind::Until:
                add_atom(f);
                collect(f.child(0));
                collect(f.child(1));
                return;
            default:
                throw AutomatonError("unexpected operator in progression");
        }
    }

    void finish(int atom_cap) {
        m = static_cast<int>(atoms.size());
        if (m > atom_cap)
            throw AutomatonError(
                "formula is too large for the progression construction (" +
                std::to_string(m) + " tracked subformulas)");
        words = (m >= 6) ? (1ull << (m - 6)) : 1;
    }

    // The table of a formula read as a combination of atoms (no progression).
    Table embed(const Formula& f) const {
        switch (f.kind()) {
            case Kind::True: return constant(true);
            case Kind::False: return constant(false);
            case Kind::And: return t_and(embed(f.child(0)), embed(f.child(1)));
            case Kind::Or: return t_or(embed(f.child(0)), embed(f.child(1)));
            default: {
                auto it = atom_index.find(f);
                if (it == atom_index.end())
                    throw AutomatonError("untracked subformula in progression");
                return var(it->second);
            }
        }
    }

    // One-step progression of an atom on letter v. When `guess` is non-null,
    // always-subformulas are resolved against the guessed invariant set.
    Table af_atom(const Formula& f, Letter v, const std::set<Formula>* guess) const {
        switch (f.kind()) {
            case Kind::Atom:
                return constant((v >> sigma->index_of(f.atom_name())) & 1);
            case Kind::Not:
                return constant(!((v >> sigma->index_of(f.child(0).atom_name())) & 1));
            case Kind::Next:
                return guessed_embed(f.child(0), guess);
            case Kind::Eventually:
                return t_or(af_formula(f.child(0), v, guess), var(atom_index.at(f)));
            case Kind::Always:
                if (guess) return constant(guess->count(f) > 0);
                return t_and(af_formula(f.child(0), v, guess), var(atom_index.at(f)));
            case Kind::Until:
                return t_or(af_formula(f.child(1), v, guess),
                            t_and(af_formula(f.child(0), v, guess),
                                  var(atom_index.at(f))));
            default:
                throw AutomatonError("unexpected atom in progression");
        }
    }

    Table guessed_embed(const Formula& f, const std::set<Formula>* guess) const {
        if (guess && f.kind() == Kind::Always) return constant(guess->count(f) > 0);
        switch (f.kind()) {
            case Kind::True: return constant(true);
            case Kind::False: return constant(false);
            case Kind::And:
                return t_and(guessed_embed(f.child(0), guess),
                             guessed_embed(f.child(1), guess));
            case Kind::Or:
                return t_or(guessed_embed(f.child(0), guess),
                            guessed_embed(f.child(1), guess));
            default:
                return var(atom_index.at(f));
        }
    }

    Table af_formula(const Formula& f, Letter v, const std::set<Formula>* guess) const {
        switch (f.kind()) {
            case Kind::True: return constant(true);
            case Kind::False: return constant(false);
            case Kind::And:
                return t_and(af_formula(f.child(0), v, guess),
                             af_formula(f.child(1), v, guess));
            case Kind::Or:
                return t_or(af_formula(f.child(0), v, guess),
                            af_formula(f.child(1), v, guess));
            default:
                return af_atom(f, v, guess);
        }
    }

    // Progression of a whole state table: substitute each atom by its
    // one-step progression and re-evaluate pointwise.
    Table step(const Table& state, Letter v, const std::set<Formula>* guess) const {
        std::vector<Table> sub(m);
        for (int i = 0; i < m; ++i) sub[i] = af_atom(atoms[i], v, guess);
        Table out = constant(false);
        std::size_t total = 1ull << m;
        for (std::size_t B = 0; B < total; ++B) {
            std::size_t A = 0;
            for (int i = 0; i < m; ++i)
                if (eval(sub[i], B)) A |= 1ull << i;
            if (eval(state, A)) out.bits[B >> 6] |= 1ull << (B & 63);
        }
        return out;
    }
};

LDBA progression_ldba(const Formula& nnf, const Alphabet& sigma, int state_cap) {
    Formula g = drop_release(nnf);
    Progression pr;
    pr.sigma = &sigma;
    pr.collect(g);
    pr.finish(18);
    const int nl = sigma.letters();

    std::vector<Formula> galways;
    for (const auto& f : pr.atoms)
        if (f.kind() == Kind::Always) galways.push_back(f);
    if (galways.size() > 8)
        throw AutomatonError("too many invariant subformulas for guessing");

    // State spaces: the initial component over master tables, and one
    // accepting component per guessed invariant set.
    struct AccState {
        int guess_id;
        Table master;
        std::vector<Table> owing;
        int focus;
        bool marked;  // arrival into this state is an accepting step
        bool operator<(const AccState& o) const {
            return std::tie(guess_id, master, owing, focus, marked) <
                   std::tie(o.guess_id, o.master, o.owing, o.focus, o.marked);
        }
    };

    std::vector<std::set<Formula>> guesses;
    for (std::size_t mask = 0; mask < (1ull << galways.size()); ++mask) {
        std::set<Formula> gset;
        for (std::size_t i = 0; i < galways.size(); ++i)
            if (mask & (1ull << i)) gset.insert(galways[i]);
        guesses.push_back(std::move(gset));
    }

    // Interleaved exploration; states are numbered as discovered. Index 0 is
    // reserved for the dead sink.
    struct Key {
        bool accpart;
        Table master;          // initial-component table when !accpart
        AccState acc;          // used when accpart
        bool operator<(const Key& o) const {
            if (accpart != o.accpart) return accpart < o.accpart;
            if (!accpart) return master < o.master;
            return acc < o.acc;
        }
    };
    std::map<Key, int> index;
    std::vector<Key> keys;
    LDBA out;
    out.sigma = sigma;
    auto add_state = [&](Key k, const std::string& name) {
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(out.states.size());
        if (id >= state_cap)
            throw AutomatonError("progression construction exceeded the state cap");
        index.emplace(k, id);
        keys.push_back(k);
        LDBA::State st;
        st.name = name;
        st.succ.assign(nl, 0);
        st.acc.assign(nl, 0);
        st.accepting_part = k.accpart;
        out.states.push_back(std::move(st));
        return id;
    };

    // Dead sink.
    Key deadk;
    deadk.accpart = true;
    deadk.acc = AccState{-1, pr.constant(false), {}, 0, false};
    int dead = add_state(deadk, "dead");
    for (int v = 0; v < nl; ++v) out.states[dead].succ[v] = dead;

    Table start = pr.embed(g);
    std::queue<int> work;
    auto enqueue = [&](Key k, const std::string& name) {
        bool fresh = !index.count(k);
        int id = add_state(k, name);
        if (fresh && id != dead) work.push(id);
        return id;
    };
    Key initk;
    initk.accpart = false;
    initk.master = start;
    initk.acc = AccState{-1, pr.constant(false), {}, 0, false};
    out.initial = pr.is_false(start) ? dead : enqueue(initk, "m0");

    while (!work.empty()) {
        int id = work.front();
        work.pop();
        Key k = keys[id];
        if (!k.accpart) {
            // Letter transitions within the initial component.
            for (int v = 0; v < nl; ++v) {
                Table t = pr.step(k.master, static_cast<Letter>(v), nullptr);
                int r;
                if (pr.is_false(t)) {
                    r = dead;
                } else {
                    Key nk;
                    nk.accpart = false;
                    nk.master = t;
                    nk.acc = deadk.acc;
                    r = enqueue(nk, "m" + std::to_string(out.states.size()));
                }
                out.states[id].succ[v] = r;
            }
            // Epsilon jumps into every accepting component.
            for (std::size_t gi = 0; gi < guesses.size(); ++gi) {
                AccState as;
                as.guess_id = static_cast<int>(gi);
                as.master = k.master;
                as.owing.assign(guesses[gi].size(), pr.constant(true));
                as.focus = 0;
                as.marked = false;
                Key nk;
                nk.accpart = true;
                nk.acc = as;
                int r = enqueue(nk, "g" + std::to_string(gi) + "s" +
                                        std::to_string(out.states.size()));
                out.states[id].eps.push_back(r);
            }
            std::sort(out.states[id].eps.begin(), out.states[id].eps.end());
            out.states[id].eps.erase(
                std::unique(out.states[id].eps.begin(), out.states[id].eps.end()),
                out.states[id].eps.end());
        } else {
            const auto& gset = guesses[k.acc.guess_id];
            std::vector<Formula> members(gset.begin(), gset.end());
            for (int v = 0; v < nl; ++v) {
                AccState ns;
                ns.guess_id = k.acc.guess_id;
                ns.master = pr.step(k.acc.master, static_cast<Letter>(v), &gset);
                ns.owing.resize(members.size());
                std::vector<Table> settled(members.size());
                bool dead_now = pr.is_false(ns.master);
                for (std::size_t i = 0; i < members.size() && !dead_now; ++i) {
                    // Obligations carried from earlier positions, stepped on
                    // their own: the breakpoint test must not see the fresh
                    // obligation the current position contributes.
                    settled[i] = pr.step(k.acc.owing[i], static_cast<Letter>(v), &gset);
                    ns.owing[i] = Progression::t_and(
                        settled[i],
                        pr.af_formula(members[i].child(0), static_cast<Letter>(v), &gset));
                    if (pr.is_false(ns.owing[i])) dead_now = true;
                }
                if (dead_now) {
                    out.states[id].succ[v] = dead;
                    continue;
                }
                bool wrapped = false;
                ns.focus = k.acc.focus;
                if (members.empty()) {
                    wrapped = true;
                } else if (pr.is_true(settled[ns.focus])) {
                    ns.focus = (ns.focus + 1) % static_cast<int>(members.size());
                    wrapped = (ns.focus == 0);
                }
                ns.marked = wrapped && pr.is_true(ns.master);
                Key nk;
                nk.accpart = true;
                nk.acc = ns;
                int r = enqueue(nk, "g" + std::to_string(ns.guess_id) + "s" +
                                        std::to_string(out.states.size()));
                out.states[id].succ[v] = r;
                out.states[id].acc[v] = ns.marked;
            }
        }
    }

    validate_ldba(out);
    return reduce_ldba(out);
}

}  // namespace

LDBA ltl_to_ldba(const Formula& f, const Alphabet& sigma, int state_cap) {
    Formula nnf = to_nnf(f);
    // Escape hatch for exercising the fallback construction in isolation.
    if (getenv("PLTL_FORCE_PROGRESSION")) return progression_ldba(nnf, sigma, state_cap);
    try {
        NBA n = ltl_to_nba(nnf, sigma, state_cap);
        return nba_to_ldba(n);
    } catch (const NotLimitDeterminizable&) {
        return progression_ldba(nnf, sigma, state_cap);
    }
}

}  // namespace pltl
