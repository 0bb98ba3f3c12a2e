#pragma once
// Qualitative graph algorithms on explicit MDPs: maximal end component
// decomposition, accepting end components, and almost-sure Buchi winning
// sets.

#include <vector>

#include "pltl/pomdp.hpp"
#include "pltl/product.hpp"

namespace pltl {

// Explicit MDP: trans[s][a] is the successor distribution of action a in
// state s, an empty row meaning the action is disabled there.
struct ExplicitMDP {
    std::vector<std::vector<Dist>> trans;
    std::vector<char> accepting;  // may be empty (treated as all-rejecting)

    int state_count() const { return static_cast<int>(trans.size()); }
    int action_count() const {
        return trans.empty() ? 0 : static_cast<int>(trans[0].size());
    }
};

ExplicitMDP underlying_mdp(const Product& p);

// An end component: a state set together with, per member state, the
// actions under which the component is closed.
struct EndComponent {
    std::vector<int> states;                // sorted
    std::vector<std::vector<int>> actions;  // aligned with states, sorted
};

// Maximal end components: pairwise disjoint, action-closed, strongly
// connected, and maximal. Components are ordered by smallest state.
std::vector<EndComponent> mec_decomposition(const ExplicitMDP& m);

// Throws ModelError when the claimed components are not disjoint,
// action-closed and strongly connected end components of m.
void validate_end_components(const ExplicitMDP& m,
                             const std::vector<EndComponent>& mecs);

// Union of the states of maximal end components containing an accepting
// state (sorted).
std::vector<int> accepting_mec_states(const ExplicitMDP& m);

// States from which the maximal probability of reaching an accepting end
// component equals one, by the standard nested fixpoint: repeatedly restrict
// to states that can stay within the candidate set while reaching the
// target. `backward_reachability_only` skips the restriction loop and
// returns plain backward reachability (an over-approximation on general
// MDPs).
std::vector<int> almost_sure_buchi_winning(
    const ExplicitMDP& m, bool backward_reachability_only = false);

}  // namespace pltl
