#include "pltl/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace pltl {
namespace {

// Strongly connected components of an adjacency list, iterative Tarjan.
// Returns component ids; components are numbered in reverse topological
// order.
std::vector<int> scc_of(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> comp(n, -1), low(n), idx(n, -1), stck;
    int counter = 0, ncomp = 0;
    std::vector<char> on(n, 0);
    struct Frame {
        int v;
        std::size_t i;
    };
    for (int root = 0; root < n; ++root) {
        if (idx[root] >= 0) continue;
        std::vector<Frame> call{{root, 0}};
        idx[root] = low[root] = counter++;
        stck.push_back(root);
        on[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.i < adj[f.v].size()) {
                int w = adj[f.v][f.i++];
                if (idx[w] < 0) {
                    idx[w] = low[w] = counter++;
                    stck.push_back(w);
                    on[w] = 1;
                    call.push_back({w, 0});
                } else if (on[w]) {
                    low[f.v] = std::min(low[f.v], idx[w]);
                }
            } else {
                if (low[f.v] == idx[f.v]) {
                    int w;
                    do {
                        w = stck.back();
                        stck.pop_back();
                        on[w] = 0;
                        comp[w] = ncomp;
                    } while (w != f.v);
                    ++ncomp;
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    return comp;
}

}  // namespace

ExplicitMDP underlying_mdp(const Product& p) {
    ExplicitMDP m;
    m.trans = p.pomdp.trans;
    m.accepting.assign(p.accepting.begin(), p.accepting.end());
    return m;
}

std::vector<EndComponent> mec_decomposition(const ExplicitMDP& m) {
    const int n = m.state_count(), na = m.action_count();
    // allowed[s][a]: action still a candidate for keeping s inside its
    // component. in_play[s]: state still a candidate member.
    std::vector<std::vector<char>> allowed(n, std::vector<char>(na, 0));
    std::vector<char> in_play(n, 0);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < na; ++a)
            if (!m.trans[s][a].empty()) allowed[s][a] = in_play[s] = 1;

    // Refine: split into SCCs of the graph induced by allowed actions, drop
    // actions that can leave the state's component, drop states with no
    // actions left, repeat until stable.
    std::vector<int> comp(n, 0);
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::vector<int>> adj(n);
        for (int s = 0; s < n; ++s) {
            if (!in_play[s]) continue;
            for (int a = 0; a < na; ++a)
                if (allowed[s][a])
                    for (auto [t, pr] : m.trans[s][a])
                        if (in_play[t]) adj[s].push_back(t);
            std::sort(adj[s].begin(), adj[s].end());
            adj[s].erase(std::unique(adj[s].begin(), adj[s].end()),
                         adj[s].end());
        }
        comp = scc_of(adj);
        for (int s = 0; s < n; ++s) {
            if (!in_play[s]) continue;
            bool any = false;
            for (int a = 0; a < na; ++a) {
                if (!allowed[s][a]) continue;
                for (auto [t, pr] : m.trans[s][a])
                    if (!in_play[t] || comp[t] != comp[s]) {
                        allowed[s][a] = 0;
                        changed = true;
                        break;
                    }
                any = any || allowed[s][a];
            }
            if (!any) {
                in_play[s] = 0;
                changed = true;
            }
        }
    }

    // Surviving states grouped by component are the MECs; a singleton must
    // keep a self-loop action (guaranteed: it has an allowed action and all
    // successors share its component).
    std::vector<std::vector<int>> groups(n);
    for (int s = 0; s < n; ++s)
        if (in_play[s]) groups[comp[s]].push_back(s);
    std::vector<EndComponent> out;
    for (auto& g : groups) {
        if (g.empty()) continue;
        EndComponent ec;
        ec.states = g;  // already sorted (states visited in order)
        for (int s : g) {
            std::vector<int> acts;
            for (int a = 0; a < na; ++a)
                if (allowed[s][a]) acts.push_back(a);
            ec.actions.push_back(std::move(acts));
        }
        out.push_back(std::move(ec));
    }
    std::sort(out.begin(), out.end(),
              [](const EndComponent& a, const EndComponent& b) {
                  return a.states[0] < b.states[0];
              });
    validate_end_components(m, out);
    return out;
}

void validate_end_components(const ExplicitMDP& m,
                             const std::vector<EndComponent>& mecs) {
    std::vector<char> seen(m.state_count(), 0);
    for (const auto& ec : mecs) {
        if (ec.states.empty() || ec.states.size() != ec.actions.size())
            throw ModelError("malformed end component");
        std::vector<char> member(m.state_count(), 0);
        for (int s : ec.states) {
            if (seen[s]) throw ModelError("end components overlap at state " +
                                          std::to_string(s));
            seen[s] = member[s] = 1;
        }
        std::vector<std::vector<int>> adj(m.state_count());
        for (std::size_t i = 0; i < ec.states.size(); ++i) {
            const int s = ec.states[i];
            if (ec.actions[i].empty())
                throw ModelError("state " + std::to_string(s) +
                                 " has no action in its end component");
            for (int a : ec.actions[i]) {
                if (m.trans[s][a].empty())
                    throw ModelError("disabled action in end component");
                for (auto [t, pr] : m.trans[s][a]) {
                    if (!member[t])
                        throw ModelError("end component leaks from state " +
                                         std::to_string(s));
                    adj[s].push_back(t);
                }
            }
        }
        // Strong connectivity of the induced subgraph.
        std::vector<int> comp = scc_of(adj);
        for (int s : ec.states)
            if (comp[s] != comp[ec.states[0]])
                throw ModelError("end component is not strongly connected");
    }
}

std::vector<int> accepting_mec_states(const ExplicitMDP& m) {
    std::vector<int> out;
    if (m.accepting.empty()) return out;
    for (const auto& ec : mec_decomposition(m)) {
        bool acc = false;
        for (int s : ec.states) acc = acc || m.accepting[s];
        if (acc) out.insert(out.end(), ec.states.begin(), ec.states.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> almost_sure_buchi_winning(const ExplicitMDP& m,
                                           bool backward_reachability_only) {
    const int n = m.state_count(), na = m.action_count();
    std::vector<char> target(n, 0);
    for (int s : accepting_mec_states(m)) target[s] = 1;

    // Backward reachability of the target within the candidate set, using
    // only actions whose whole support stays in the candidate set.
    std::vector<char> cand(n, 1);
    auto reach_within = [&](bool restrict_support) {
        std::vector<char> r(n, 0);
        for (int s = 0; s < n; ++s) r[s] = target[s] && cand[s];
        for (bool changed = true; changed;) {
            changed = false;
            for (int s = 0; s < n; ++s) {
                if (r[s] || !cand[s]) continue;
                for (int a = 0; a < na && !r[s]; ++a) {
                    if (m.trans[s][a].empty()) continue;
                    bool stays = true, hits = false;
                    for (auto [t, pr] : m.trans[s][a]) {
                        stays = stays && cand[t];
                        hits = hits || r[t];
                    }
                    if (hits && (stays || !restrict_support))
                        r[s] = changed = true;
                }
            }
        }
        return r;
    };

    if (backward_reachability_only) {
        cand = reach_within(false);
    } else {
        for (;;) {
            std::vector<char> r = reach_within(true);
            if (r == cand) break;
            cand = std::move(r);
        }
    }
    std::vector<int> out;
    for (int s = 0; s < n; ++s)
        if (cand[s]) out.push_back(s);
    return out;
}

}  // namespace pltl
