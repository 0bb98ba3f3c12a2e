#include "pltl/product.hpp"

#include <algorithm>
#include <sstream>

namespace pltl {
namespace {

// Label of a product state in the automaton alphabet: each alphabet
// proposition takes the truth value it has in the model state; alphabet
// propositions must all exist in the model.
std::vector<Letter> model_letters(const Pomdp& m, const Alphabet& sigma) {
    std::vector<int> bit(sigma.ap.size());
    for (std::size_t i = 0; i < sigma.ap.size(); ++i) {
        int j = -1;
        for (std::size_t k = 0; k < m.ap.size(); ++k)
            if (m.ap[k] == sigma.ap[i]) j = static_cast<int>(k);
        if (j < 0)
            throw ModelError("objective proposition '" + sigma.ap[i] +
                             "' is not a proposition of the model");
        bit[i] = j;
    }
    std::vector<Letter> out(m.state_count(), 0);
    for (int s = 0; s < m.state_count(); ++s)
        for (std::size_t i = 0; i < sigma.ap.size(); ++i)
            if (m.label[s] >> bit[i] & 1) out[s] |= Letter{1} << i;
    return out;
}

std::string state_label(const LDBA& aut, int q) {
    return aut.states[q].name == "dead" ? "sink" : std::to_string(q);
}

}  // namespace

Product build_product(const Pomdp& m, const LDBA& aut) {
    validate_ldba(aut);
    const int ns = m.state_count(), nq = aut.size();
    const int na = m.action_count();
    const std::vector<Letter> letter = model_letters(m, aut.sigma);

    Product p;
    p.base_states = ns;
    p.automaton_states = nq;
    p.base_actions = na;

    // Jump actions: one per automaton state that is the target of some
    // epsilon edge, enabled at (s, q) exactly when q has that edge.
    for (const auto& st : aut.states)
        for (int t : st.eps) p.jump_target.push_back(t);
    std::sort(p.jump_target.begin(), p.jump_target.end());
    p.jump_target.erase(
        std::unique(p.jump_target.begin(), p.jump_target.end()),
        p.jump_target.end());

    Pomdp& x = p.pomdp;
    x.ap = m.ap;
    x.actions = m.actions;
    for (int t : p.jump_target)
        x.actions.push_back("eps_" + state_label(aut, t));
    x.observations = m.observations;
    if (!p.jump_target.empty()) {
        x.observations.push_back("o_eps");
        p.silent_obs = x.observation_count() - 1;
    }
    const int nxa = x.action_count();

    x.states.reserve(static_cast<std::size_t>(ns) * nq);
    for (int s = 0; s < ns; ++s)
        for (int q = 0; q < nq; ++q)
            x.states.push_back(m.states[s] + "_" + state_label(aut, q));
    x.label.resize(x.states.size());
    x.trans.assign(x.states.size(), std::vector<Dist>(nxa));
    x.obs_rows.assign(x.states.size(), std::vector<Dist>(nxa));
    p.accepting.assign(x.states.size(), 0);

    for (int s = 0; s < ns; ++s) {
        for (int q = 0; q < nq; ++q) {
            const int id = p.index_of(s, q);
            x.label[id] = m.label[s];
            p.accepting[id] = aut.states[q].acc[letter[s]];
            for (int a = 0; a < na; ++a) {
                // Arrival observations are kept for every action, enabled
                // here or not: they describe entering (s, q) via a.
                x.obs_rows[id][a] = m.obs_rows[s][a];
                const Dist& row = m.trans[s][a];
                if (row.empty()) continue;
                Dist& out = x.trans[id][a];
                out.reserve(row.size());
                for (auto [s2, pr] : row)
                    out.emplace_back(
                        p.index_of(s2, aut.states[q].succ[letter[s2]]), pr);
                std::sort(out.begin(), out.end());
            }
            for (std::size_t k = 0; k < p.jump_target.size(); ++k) {
                const int ja = na + static_cast<int>(k);
                x.obs_rows[id][ja] = {{p.silent_obs, 1.0}};
                const int t = p.jump_target[k];
                const auto& eps = aut.states[q].eps;
                if (!std::binary_search(eps.begin(), eps.end(), t)) continue;
                x.trans[id][ja] = {{p.index_of(s, t), 1.0}};
            }
        }
    }

    // Initial belief: each start state enters the automaton state reached
    // from the initial one on its own label.
    for (auto [s, pr] : m.start) {
        const int q = aut.states[aut.initial].succ[letter[s]];
        x.start.emplace_back(p.index_of(s, q), pr);
    }
    std::sort(x.start.begin(), x.start.end());

    validate_pomdp(x, /*lenient=*/true);
    return p;
}

std::string format_product(const Product& p) {
    std::string out = format_pomdp(p.pomdp);
    out += "acc:";
    for (std::size_t i = 0; i < p.accepting.size(); ++i)
        if (p.accepting[i]) out += " " + p.pomdp.states[i];
    out += "\n";
    return out;
}

Product parse_product(const std::string& text) {
    // Split off acc: lines; the rest is an ordinary model file.
    std::string model;
    std::vector<std::string> acc_names;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string head;
        if (ls >> head && head == "acc:") {
            std::string name;
            while (ls >> name) acc_names.push_back(name);
        } else {
            model += line;
            model += "\n";
        }
    }

    Product p;
    p.pomdp = parse_pomdp(model, /*lenient=*/true);
    p.accepting.assign(p.pomdp.states.size(), 0);
    for (const auto& name : acc_names)
        p.accepting[p.pomdp.state_id(name)] = 1;

    // Recover the structural metadata from the naming conventions.
    for (int a = 0; a < p.pomdp.action_count(); ++a)
        if (p.pomdp.actions[a].rfind("eps_", 0) != 0) p.base_actions = a + 1;
    for (std::size_t k = p.base_actions; k < p.pomdp.actions.size(); ++k) {
        const std::string tag = p.pomdp.actions[k].substr(4);
        p.jump_target.push_back(tag == "sink" ? -1 : std::stoi(tag));
    }
    if (p.base_actions < p.pomdp.action_count())
        p.silent_obs = p.pomdp.observation_id("o_eps");

    // Automaton suffixes repeat per base state with a fixed period.
    auto suffix = [&](int id) {
        const std::string& n = p.pomdp.states[id];
        return n.substr(n.rfind('_') + 1);
    };
    p.automaton_states = 1;
    while (p.automaton_states < p.pomdp.state_count() &&
           suffix(p.automaton_states) != suffix(0))
        ++p.automaton_states;
    p.base_states = p.pomdp.state_count() / p.automaton_states;
    return p;
}

}  // namespace pltl
