#pragma once
// Explicit labelled POMDPs: model storage, file format, exact Bayesian
// belief filtering, and a seeded generative simulator.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pltl/rng.hpp"

namespace pltl {

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Sparse probability vector: (index, probability) pairs sorted by index,
// probabilities strictly positive, summing to 1 within 1e-9.
using Dist = std::vector<std::pair<int, double>>;

// An exact belief is a distribution over model states.
using Belief = Dist;

struct Pomdp {
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::string> observations;
    std::vector<std::string> ap;

    Belief start;                        // initial belief
    std::vector<std::uint32_t> label;    // per state; bit i set = ap[i] holds
    // trans[s][a]: successor distribution; an empty row means the action is
    // disabled in s.
    std::vector<std::vector<Dist>> trans;
    // obs_rows[s][a]: distribution of the observation emitted on arrival in
    // s via a; always populated (explicitly or from the state's default).
    std::vector<std::vector<Dist>> obs_rows;

    int state_count() const { return static_cast<int>(states.size()); }
    int action_count() const { return static_cast<int>(actions.size()); }
    int observation_count() const { return static_cast<int>(observations.size()); }

    int state_id(const std::string& name) const;
    int action_id(const std::string& name) const;
    int observation_id(const std::string& name) const;

    // Actions with a transition row in s.
    std::vector<int> enabled(int s) const;
    // Observations that can be emitted on some arrival in s.
    std::set<int> observations_of(int s) const;
    // Number of transition row entries, summed over all (s, a).
    long transition_entries() const;
};

// Parse the line-oriented model format. `lenient` skips the check that
// states sharing an observation share enabled actions (needed when loading
// product models, whose jump actions are enabled per automaton state).
Pomdp parse_pomdp(const std::string& text, bool lenient = false);
void validate_pomdp(const Pomdp& m, bool lenient = false);

// Canonical text form; parse_pomdp(format_pomdp(m)) reproduces m and
// formatting is byte-deterministic.
std::string format_pomdp(const Pomdp& m);

// Exact filter step: condition b on taking a and observing o.
Belief belief_update(const Belief& b, int a, int o, const Pomdp& m);

// Generative simulator: sample (successor, observation) from state s under
// action a. Deterministic given the rng stream.
std::pair<int, int> sample_step(const Pomdp& m, int s, int a, Rng& rng);

// Actions enabled in every state of the set.
std::vector<int> enabled_actions(const std::vector<int>& theta, const Pomdp& m);

// Total probability mass b assigns to the set of states.
double belief_mass(const Belief& b, const std::vector<int>& theta);

}  // namespace pltl
