#include "pltl/belief_support.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace pltl {

std::vector<int> support_enabled(const Support& theta, const Product& p) {
    return enabled_actions(theta, p.pomdp);
}

std::vector<std::pair<int, Support>> support_successors(const Support& theta,
                                                        int a,
                                                        const Product& p) {
    std::map<int, Support> by_obs;
    for (int s : theta) {
        const Dist& row = p.pomdp.trans[s][a];
        if (row.empty())
            throw ModelError("action '" + p.pomdp.actions[a] +
                             "' is not enabled at every member of the support");
        for (auto [t, pr] : row)
            for (auto [o, zp] : p.pomdp.obs_rows[t][a]) by_obs[o].push_back(t);
    }
    std::vector<std::pair<int, Support>> out;
    out.reserve(by_obs.size());
    for (auto& [o, succ] : by_obs) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        out.emplace_back(o, std::move(succ));
    }
    return out;
}

int Bsmdp::support_id(const Support& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
}

Bsmdp build_sub_bsmdp(const Product& p,
                      const std::vector<int>& accepting_mec_states,
                      int enumeration_cap) {
    const int na = p.pomdp.action_count();
    std::vector<char> in_es(p.pomdp.state_count(), 0);
    for (int s : accepting_mec_states) in_es[s] = 1;
    auto intersects = [&](const Support& s) {
        for (int x : s)
            if (in_es[x]) return true;
        return false;
    };

    Bsmdp b;
    auto add = [&](Support s) {
        auto [it, fresh] = b.index.emplace(std::move(s), b.size());
        if (fresh) {
            b.supports.push_back(it->first);
            b.trans.emplace_back(na);
            b.restricted.push_back(intersects(it->first));
        }
        return it->second;
    };

    b.sink = add(Support{});
    b.restricted[b.sink] = 0;

    Support start;
    for (auto [s, pr] : p.pomdp.start) start.push_back(s);
    std::sort(start.begin(), start.end());
    b.initial = add(start);

    // Seed small observation classes exhaustively: every observation-
    // consistent subset that intersects the accepting-MEC states, so that
    // certification can cover supports the filter never reaches.
    std::map<int, std::vector<int>> obs_class;
    for (int s = 0; s < p.pomdp.state_count(); ++s)
        for (int o : p.pomdp.observations_of(s)) obs_class[o].push_back(s);
    for (auto& [o, members] : obs_class) {
        if (static_cast<int>(members.size()) > enumeration_cap) continue;
        const unsigned full = 1u << members.size();
        for (unsigned mask = 1; mask < full; ++mask) {
            Support s;
            for (std::size_t i = 0; i < members.size(); ++i)
                if (mask >> i & 1) s.push_back(members[i]);
            if (intersects(s)) add(std::move(s));
        }
    }

    // Close the universe under successors. Indexed loop: adding successors
    // grows (and may reallocate) the support list.
    for (int u = 1; u < b.size(); ++u) {
        const Support theta = b.supports[u];
        for (int a : support_enabled(theta, p))
            for (auto& [o, succ] : support_successors(theta, a, p)) {
                const int v = add(std::move(succ));
                b.trans[u][a].emplace_back(o, v);
            }
    }
    return b;
}

namespace {

// The support MDP as an explicit MDP over restricted supports, branches
// leaving the restriction redirected to the sink (branch probabilities are
// irrelevant for end components; uniform weights are used).
ExplicitMDP restricted_view(const Bsmdp& b) {
    ExplicitMDP m;
    const int na = b.trans.empty() ? 1 : static_cast<int>(b.trans[0].size());
    m.trans.assign(b.size(), std::vector<Dist>(na));
    for (int u = 0; u < b.size(); ++u) {
        if (!b.restricted[u]) continue;
        for (int a = 0; a < na; ++a) {
            if (b.trans[u][a].empty()) continue;
            std::map<int, double> w;
            for (auto [o, v] : b.trans[u][a])
                w[b.restricted[v] ? v : b.sink] += 1.0;
            for (auto& [v, weight] : w)
                m.trans[u][a].emplace_back(
                    v, weight / static_cast<double>(b.trans[u][a].size()));
        }
    }
    // The sink only loops on itself, so it can never join another component.
    m.trans[b.sink][0] = {{b.sink, 1.0}};
    return m;
}

}  // namespace

std::vector<EndComponent> bs_mec_decomposition(const Bsmdp& b) {
    std::vector<EndComponent> out;
    for (auto& ec : mec_decomposition(restricted_view(b))) {
        if (std::binary_search(ec.states.begin(), ec.states.end(), b.sink))
            continue;
        out.push_back(std::move(ec));
    }
    return out;
}

std::vector<EndComponent> certify_bs_amecs(const std::vector<EndComponent>& mecs,
                                           const Bsmdp& b, const Product& p) {
    std::vector<EndComponent> accepted;
    for (const auto& ec : mecs) {
        // Fast path: a support lying entirely inside the accepting product
        // states is trivially winning once the component is never left.
        bool fast = false;
        for (int u : ec.states) {
            bool all = true;
            for (int s : b.supports[u]) all = all && p.accepting[s];
            fast = fast || all;
        }
        if (fast) {
            accepted.push_back(ec);
            continue;
        }

        // Synchronised (product state, support) MDP under the component's
        // action restriction; accept when it wins everywhere.
        std::map<std::pair<int, int>, int> id;
        std::vector<std::pair<int, int>> pairs;
        for (int u : ec.states)
            for (int s : b.supports[u]) {
                id[{s, u}] = static_cast<int>(pairs.size());
                pairs.emplace_back(s, u);
            }
        const int na = p.pomdp.action_count();
        ExplicitMDP aux;
        aux.trans.assign(pairs.size(), std::vector<Dist>(na));
        aux.accepting.assign(pairs.size(), 0);
        std::map<int, std::size_t> member_pos;
        for (std::size_t i = 0; i < ec.states.size(); ++i)
            member_pos[ec.states[i]] = i;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            auto [s, u] = pairs[i];
            aux.accepting[i] = p.accepting[s];
            for (int a : ec.actions[member_pos[u]]) {
                std::map<int, int> branch;  // observation -> support id
                for (auto [o, v] : b.trans[u][a]) branch[o] = v;
                std::map<int, double> row;
                for (auto [t, pr] : p.pomdp.trans[s][a])
                    for (auto [o, zp] : p.pomdp.obs_rows[t][a])
                        row[id.at({t, branch.at(o)})] += pr * zp;
                for (auto [t, pr] : row) aux.trans[i][a].emplace_back(t, pr);
            }
        }
        if (almost_sure_buchi_winning(aux).size() == pairs.size())
            accepted.push_back(ec);
    }
    return accepted;
}

CertifiedStructure::CertifiedStructure(std::vector<Component> comps)
    : comps_(std::move(comps)), memo_guard_(new std::mutex) {
    for (std::size_t c = 0; c < comps_.size(); ++c)
        for (const auto& s : comps_[c].supports) {
            winning_.push_back(s);
            comp_of_[s] = static_cast<int>(c);
        }
    std::sort(winning_.begin(), winning_.end(),
              [](const Support& a, const Support& b) {
                  return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
}

bool CertifiedStructure::is_winning(const Support& s) const {
    return comp_of_.count(s) != 0;
}

int CertifiedStructure::component_of(const Support& s) const {
    auto it = comp_of_.find(s);
    return it == comp_of_.end() ? -1 : it->second;
}

std::vector<Support> CertifiedStructure::contained_winning(
    const Support& s) const {
    {
        std::lock_guard<std::mutex> lock(*memo_guard_);
        auto it = memo_.find(s);
        if (it != memo_.end()) return it->second;
    }
    std::vector<Support> out;
    for (const auto& w : winning_) {
        if (w.size() >= s.size()) break;  // only strict subsets qualify
        if (std::includes(s.begin(), s.end(), w.begin(), w.end()))
            out.push_back(w);
    }
    std::lock_guard<std::mutex> lock(*memo_guard_);
    return memo_.emplace(s, std::move(out)).first->second;
}

CertifiedStructure derive_certified_structure(
    const Bsmdp& b, const std::vector<EndComponent>& accepted) {
    std::vector<CertifiedStructure::Component> comps;
    for (const auto& ec : accepted) {
        CertifiedStructure::Component c;
        for (std::size_t i = 0; i < ec.states.size(); ++i) {
            c.supports.push_back(b.supports[ec.states[i]]);
            c.actions.push_back(ec.actions[i]);
        }
        comps.push_back(std::move(c));
    }
    return CertifiedStructure(std::move(comps));
}

RoundRobinPolicy::RoundRobinPolicy(const CertifiedStructure& c,
                                   const Support& start) {
    int k = c.component_of(start);
    if (k < 0) throw ModelError("support is not certified winning");
    comp_ = c.components()[k];
    counter_.assign(comp_.supports.size(), 0);
    for (std::size_t i = 0; i < comp_.supports.size(); ++i)
        pos_[comp_.supports[i]] = static_cast<int>(i);
}

int RoundRobinPolicy::next_action(const Support& current) {
    auto it = pos_.find(current);
    if (it == pos_.end())
        throw ModelError("support left its certified component");
    const auto& acts = comp_.actions[it->second];
    int a = acts[counter_[it->second] % static_cast<int>(acts.size())];
    ++counter_[it->second];
    return a;
}

}  // namespace pltl
