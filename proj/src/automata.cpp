// Shared automaton utilities: structural validation, ultimately periodic
// word membership, and the arrival-consistent state merge for deterministic
// parts.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>

#include "pltl/automata.hpp"

namespace pltl {

int Alphabet::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < ap.size(); ++i)
        if (ap[i] == name) return static_cast<int>(i);
    return -1;
}

bool LDBA::state_accepts_some_letter(int q) const {
    for (char c : states[q].acc)
        if (c) return true;
    return false;
}

int LDBA::epsilon_edge_count() const {
    int n = 0;
    for (const auto& s : states) n += static_cast<int>(s.eps.size());
    return n;
}

void validate_ldba(const LDBA& a) {
    const int nl = a.sigma.letters();
    if (a.states.empty()) throw AutomatonError("automaton has no states");
    if (a.initial < 0 || a.initial >= a.size())
        throw AutomatonError("initial state out of range");
    for (int q = 0; q < a.size(); ++q) {
        const auto& st = a.states[q];
        if (static_cast<int>(st.succ.size()) != nl ||
            static_cast<int>(st.acc.size()) != nl)
            throw AutomatonError("state " + st.name +
                                 " is not complete over the alphabet");
        for (int v = 0; v < nl; ++v) {
            int r = st.succ[v];
            if (r < 0 || r >= a.size())
                throw AutomatonError("successor out of range in state " + st.name);
            if (st.accepting_part && !a.states[r].accepting_part)
                throw AutomatonError("accepting part is not closed (state " +
                                     st.name + ")");
            if (st.acc[v] && !a.states[r].accepting_part)
                throw AutomatonError("accepting arrival into non-accepting part");
        }
        if (!st.eps.empty() && st.accepting_part)
            throw AutomatonError("epsilon edge leaves the accepting part (state " +
                                 st.name + ")");
        for (int e : st.eps)
            if (e < 0 || e >= a.size())
                throw AutomatonError("epsilon successor out of range");
        if (!std::is_sorted(st.eps.begin(), st.eps.end()))
            throw AutomatonError("epsilon successors must be sorted");
    }
    bool has_acc = false;
    for (int q = 0; q < a.size(); ++q)
        for (int v = 0; v < nl; ++v)
            if (a.states[q].acc[v]) has_acc = a.states[a.states[q].succ[v]].accepting_part;
    (void)has_acc;
}

namespace {

// Tarjan SCC over an explicit adjacency list; returns component id per node,
// components numbered in reverse topological order.
struct Scc {
    const std::vector<std::vector<int>>& adj;
    std::vector<int> idx, low, comp, stk;
    std::vector<char> onstk;
    int counter = 0, ncomp = 0;

    explicit Scc(const std::vector<std::vector<int>>& g)
        : adj(g), idx(g.size(), -1), low(g.size(), 0), comp(g.size(), -1),
          onstk(g.size(), 0) {
        for (std::size_t v = 0; v < g.size(); ++v)
            if (idx[v] < 0) run(static_cast<int>(v));
    }

    void run(int root) {
        // Iterative Tarjan to keep deep automata off the call stack.
        std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
        while (!frames.empty()) {
            auto& [v, ei] = frames.back();
            if (ei == 0) {
                idx[v] = low[v] = counter++;
                stk.push_back(v);
                onstk[v] = 1;
            }
            bool descended = false;
            while (ei < adj[v].size()) {
                int w = adj[v][ei++];
                if (idx[w] < 0) {
                    frames.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (onstk[w]) low[v] = std::min(low[v], idx[w]);
            }
            if (descended) continue;
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
};

}  // namespace

bool accepts_lasso(const NBA& a, const std::vector<Letter>& prefix,
                   const std::vector<Letter>& cycle) {
    if (cycle.empty()) throw AutomatonError("lasso cycle must be nonempty");
    std::vector<Letter> w(prefix);
    w.insert(w.end(), cycle.begin(), cycle.end());
    const int n = static_cast<int>(w.size());
    const int p = static_cast<int>(prefix.size());
    auto nxt = [&](int i) { return i + 1 < n ? i + 1 : p; };
    auto id = [&](int q, int i) { return q * n + i; };

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(a.size()) * n);
    std::vector<char> reach(adj.size(), 0);
    std::queue<int> bfs;
    reach[id(a.initial, 0)] = 1;
    bfs.push(id(a.initial, 0));
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        int q = u / n, i = u % n;
        for (int r : a.delta[q][w[i]]) {
            int v = id(r, nxt(i));
            adj[u].push_back(v);
            if (!reach[v]) {
                reach[v] = 1;
                bfs.push(v);
            }
        }
    }
    Scc scc(adj);
    for (std::size_t u = 0; u < adj.size(); ++u) {
        if (!reach[u]) continue;
        for (int v : adj[u])
            if (scc.comp[u] == scc.comp[v] && a.accepting[static_cast<int>(v) / n])
                return true;
    }
    return false;
}

bool accepts_lasso(const LDBA& a, const std::vector<Letter>& prefix,
                   const std::vector<Letter>& cycle) {
    if (cycle.empty()) throw AutomatonError("lasso cycle must be nonempty");
    std::vector<Letter> w(prefix);
    w.insert(w.end(), cycle.begin(), cycle.end());
    const int n = static_cast<int>(w.size());
    const int p = static_cast<int>(prefix.size());
    auto nxt = [&](int i) { return i + 1 < n ? i + 1 : p; };
    auto id = [&](int q, int i) { return q * n + i; };

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(a.size()) * n);
    std::vector<std::vector<char>> accedge(adj.size());
    std::vector<char> reach(adj.size(), 0);
    std::queue<int> bfs;
    auto push = [&](int v) {
        if (!reach[v]) {
            reach[v] = 1;
            bfs.push(v);
        }
    };
    push(id(a.initial, 0));
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        int q = u / n, i = u % n;
        int r = a.states[q].succ[w[i]];
        adj[u].push_back(id(r, nxt(i)));
        accedge[u].push_back(a.states[q].acc[w[i]]);
        push(id(r, nxt(i)));
        for (int e : a.states[q].eps) {  // epsilon jumps consume no letter
            adj[u].push_back(id(e, i));
            accedge[u].push_back(0);
            push(id(e, i));
        }
    }
    Scc scc(adj);
    for (std::size_t u = 0; u < adj.size(); ++u) {
        if (!reach[u]) continue;
        for (std::size_t k = 0; k < adj[u].size(); ++k)
            if (accedge[u][k] && scc.comp[u] == scc.comp[static_cast<std::size_t>(adj[u][k])])
                return true;
    }
    return false;
}

LDBA reduce_ldba(const LDBA& input) {
    LDBA a = input;
    const int nl = a.sigma.letters();

    // Merge pairs with identical outgoing behaviour (treating the pair as one
    // state) whose arrival acceptance agrees letter-by-letter wherever both
    // actually receive transitions on that letter.
    bool merged = true;
    while (merged) {
        merged = false;
        const int n = a.size();
        // Predecessor letters per state.
        std::vector<std::vector<char>> entered_on(n, std::vector<char>(nl, 0));
        for (int q = 0; q < n; ++q)
            for (int v = 0; v < nl; ++v) entered_on[a.states[q].succ[v]][v] = 1;
        for (int u = 0; u < n && !merged; ++u)
            for (int v2 = u + 1; v2 < n && !merged; ++v2) {
                const auto& su = a.states[u];
                const auto& sv = a.states[v2];
                if (su.accepting_part != sv.accepting_part &&
                    !(su.eps.empty() && sv.eps.empty()))
                    continue;
                if (su.eps != sv.eps) continue;
                auto canon = [&](int x) { return x == v2 ? u : x; };
                bool ok = true;
                for (int l = 0; l < nl && ok; ++l) {
                    if (canon(su.succ[l]) != canon(sv.succ[l])) ok = false;
                    // Arrival acceptance must be consistent per letter: a
                    // conflict only matters if both states can be entered on
                    // that letter (or one of them is it initial, which has no
                    // arrival letter and never conflicts).
                    if (ok && su.acc[l] != sv.acc[l] && entered_on[u][l] &&
                        entered_on[v2][l])
                        ok = false;
                }
                if (!ok) continue;
                // Merge v2 into u.
                LDBA b;
                b.sigma = a.sigma;
                std::vector<int> remap(n);
                int m = 0;
                for (int q = 0; q < n; ++q) remap[q] = (q == v2) ? -1 : m++;
                remap[v2] = remap[u];
                b.initial = remap[a.initial];
                for (int q = 0; q < n; ++q) {
                    if (q == v2) continue;
                    LDBA::State st = a.states[q];
                    if (q == u) {
                        st.accepting_part = su.accepting_part || sv.accepting_part;
                        for (int l = 0; l < nl; ++l)
                            if (!entered_on[u][l] && entered_on[v2][l])
                                st.acc[l] = sv.acc[l];
                    }
                    for (int l = 0; l < nl; ++l) st.succ[l] = remap[st.succ[l]];
                    for (auto& e : st.eps) e = remap[e];
                    std::sort(st.eps.begin(), st.eps.end());
                    st.eps.erase(std::unique(st.eps.begin(), st.eps.end()), st.eps.end());
                    b.states.push_back(std::move(st));
                }
                a = std::move(b);
                merged = true;
            }
    }

    // Drop unreachable states.
    std::vector<char> reach(a.size(), 0);
    std::queue<int> bfs;
    reach[a.initial] = 1;
    bfs.push(a.initial);
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        auto visit = [&](int r) {
            if (!reach[r]) {
                reach[r] = 1;
                bfs.push(r);
            }
        };
        for (int v = 0; v < nl; ++v) visit(a.states[q].succ[v]);
        for (int e : a.states[q].eps) visit(e);
    }
    LDBA b;
    b.sigma = a.sigma;
    std::vector<int> remap(a.size(), -1);
    int m = 0;
    for (int q = 0; q < a.size(); ++q)
        if (reach[q]) remap[q] = m++;
    b.initial = remap[a.initial];
    for (int q = 0; q < a.size(); ++q) {
        if (!reach[q]) continue;
        LDBA::State st = a.states[q];
        for (int v = 0; v < nl; ++v) st.succ[v] = remap[st.succ[v]];
        for (auto& e : st.eps) e = remap[e];
        b.states.push_back(std::move(st));
    }
    return b;
}

}  // namespace pltl
