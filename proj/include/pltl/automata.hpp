#pragma once
// Büchi automata over 2^AP letters: tableau construction from LTL,
// conversion to automata that are deterministic up to epsilon jumps,
// reductions, lasso membership, and HOA v1 import/export.
//
// Letters are bitmasks over the ordered atomic-proposition list (bit i set
// means ap[i] holds). Acceptance is recorded per (state, arrival letter):
// taking any transition on letter v into state q is an accepting step iff
// acc[v] is set for q. State-based acceptance is the special case where a
// state's mask covers every letter. This "arrival" form is what a product
// with a labelled model needs, because a product state (s,q) is always
// entered on the letter L(s).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pltl/formula.hpp"

namespace pltl {

using Letter = std::uint32_t;

struct Alphabet {
    std::vector<std::string> ap;
    int letters() const { return 1 << static_cast<int>(ap.size()); }
    int index_of(const std::string& name) const;  // -1 when absent
};

// Nondeterministic Büchi automaton with state-based acceptance.
struct NBA {
    Alphabet sigma;
    int initial = 0;
    std::vector<std::string> names;  // tableau formula-set annotations
    std::vector<char> accepting;
    // delta[state][letter] = sorted successor list
    std::vector<std::vector<std::vector<int>>> delta;

    int size() const { return static_cast<int>(delta.size()); }
};

// Automaton that is letter-deterministic and complete everywhere, with
// nondeterminism confined to epsilon jumps out of the non-accepting part.
struct LDBA {
    struct State {
        std::string name;
        bool accepting_part = false;
        std::vector<int> succ;   // [letter] -> state
        std::vector<char> acc;   // [letter] -> arrival acceptance
        std::vector<int> eps;    // sorted epsilon successors
    };

    Alphabet sigma;
    int initial = 0;
    std::vector<State> states;

    int size() const { return static_cast<int>(states.size()); }
    bool state_accepts_some_letter(int q) const;
    // Number of states with at least one outgoing epsilon edge.
    int epsilon_edge_count() const;
};

struct AutomatonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the structural limit-determinization paths do not apply to an
// automaton; callers fall back to the direct formula-based construction.
struct NotLimitDeterminizable : AutomatonError {
    using AutomatonError::AutomatonError;
};

// Tableau (GPVW-style) translation. `f` must be in negation normal form.
// Throws AutomatonError when the state count exceeds `state_cap`.
NBA ltl_to_nba(const Formula& f, const Alphabet& sigma, int state_cap = 10000);

// Language-preserving NBA reductions: direct-simulation edge pruning,
// quotient by mutual direct simulation, removal of unreachable states and of
// states with empty language.
NBA reduce_nba(const NBA& n);

// Structural conversion: applies when the reduced NBA is deterministic, or
// deterministic except for "guess" edges into single-state suffix loops that
// can soundly become epsilon jumps. Throws NotLimitDeterminizable otherwise.
LDBA nba_to_ldba(const NBA& n);

// General translation: reduce + nba_to_ldba when structurally possible,
// otherwise a direct construction by formula progression (correct for full
// LTL; may introduce epsilon jumps). `f` need not be in NNF.
LDBA ltl_to_ldba(const Formula& f, const Alphabet& sigma, int state_cap = 10000);

// Merge states with identical outgoing behaviour whose arrival acceptance is
// letter-consistent, and drop unreachable states. Applied by the
// constructions above; exposed for tests.
LDBA reduce_ldba(const LDBA& a);

// Structural validation; throws AutomatonError describing the violated
// invariant (determinism/completeness, epsilon edges only outside the
// accepting part, accepting part closed, acceptance only in accepting part).
void validate_ldba(const LDBA& a);

// Ultimately periodic word membership: does the automaton accept
// prefix . cycle^omega ?
bool accepts_lasso(const NBA& a, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle);
bool accepts_lasso(const LDBA& a, const std::vector<Letter>& prefix, const std::vector<Letter>& cycle);

// HOA v1 serialisation. Epsilon edges are carried by a custom
// "x-epsilon:" header (pairs of state indices); acceptance is Buchi with
// transition marks.
std::string export_hoa(const LDBA& a, const std::string& name = "");
LDBA import_hoa(const std::string& text);

}  // namespace pltl
