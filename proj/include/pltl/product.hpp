#pragma once
// Product of a labelled POMDP with a letter-deterministic Buchi automaton.
// The product is itself a POMDP (loaded and stored leniently, because jump
// actions are enabled per automaton state and so may break the shared-
// observation assumption) plus an accepting-state set.

#include <string>
#include <vector>

#include "pltl/automata.hpp"
#include "pltl/pomdp.hpp"

namespace pltl {

struct Product {
    Pomdp pomdp;
    std::vector<char> accepting;  // per product state

    // Structure metadata. Product state (s, q) has index s * |Q| + q.
    int base_states = 0;
    int automaton_states = 0;
    int base_actions = 0;          // actions beyond this index are jumps
    int silent_obs = -1;           // observation emitted by jump actions
    std::vector<int> jump_target;  // automaton target per jump action

    int index_of(int s, int q) const { return s * automaton_states + q; }
    int base_of(int x) const { return x / automaton_states; }
    int aut_of(int x) const { return x % automaton_states; }
    bool is_jump(int a) const { return a >= base_actions; }

    // Observation count without the silent observation.
    int reported_observations() const {
        return pomdp.observation_count() - (silent_obs >= 0 ? 1 : 0);
    }
};

// Requires every atomic proposition of the automaton alphabet to be an
// atomic proposition of the model.
Product build_product(const Pomdp& m, const LDBA& aut);

// Model file format plus an `acc:` line listing accepting product states.
std::string format_product(const Product& p);
Product parse_product(const std::string& text);

}  // namespace pltl
