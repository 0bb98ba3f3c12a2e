#pragma once
// Monte-Carlo tree search over product beliefs with ground-truth support
// tracking: UCB selection over regular actions plus terminal pseudo-actions
// that commit to a certified winning support, undiscounted 0/1 returns, and
// an execution loop that switches to the certified round-robin policy.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pltl/belief_support.hpp"
#include "pltl/reward.hpp"

namespace pltl {

struct PlannerConfig {
    int simulations = 30000;
    int max_depth = 200;
    int particles = 10000;
    double ucb = 1.0;
    int step_budget = 0;  // 0 = ten times max_depth
};

struct StepRecord {
    int action = -1;          // product action, or -1 for a terminal commit
    Support terminal_target;  // the committed winning support, if any
    int observation = -1;     // -1 when no environment step happened
    double value = 0.0;       // root value of the chosen branch
    Belief belief;            // exact belief when the choice was made
    std::map<int, int> particle_counts;  // root particles by product state
};

enum class Outcome { success, failure, dead_end, budget_exhausted };

struct EpisodeResult {
    std::vector<StepRecord> steps;
    Outcome outcome = Outcome::failure;
    bool switched = false;          // committed to a certified policy
    double certified_bound = 0.0;   // guaranteed success probability then
    Support switch_support;
};

// The action chosen by one tree search.
struct SearchChoice {
    bool terminal = false;
    int action = -1;          // valid when !terminal
    Support target;           // valid when terminal
    double value = 0.0;
    std::map<int, int> particle_counts;
};

class Planner {
  public:
    // All references must outlive the planner.
    Planner(const Product& p, const Bsmdp& b, const CertifiedStructure& c,
            const PlannerConfig& cfg);

    // Fresh-tree search from an exact belief (mainly for tests; episodes
    // reuse their tree across steps). Throws ModelError on a dead end.
    SearchChoice search_once(const Belief& root, Rng& rng) const;

    // One closed-loop episode; the rng stream is derived from (seed,
    // episode) so episode results are independent of execution order.
    EpisodeResult run_episode(std::uint64_t seed,
                              std::uint64_t episode) const;

    // Support category used by search shortcuts (exposed for tests): a
    // support is dead when no winning or partially winning support is
    // reachable from it in the support MDP.
    bool support_is_winning(int support_id) const;
    bool support_is_dead(int support_id) const;
    const std::vector<Support>& terminal_targets(int support_id) const;

  private:
    struct Node;
    struct Edge;

    int simulate(int s, Node& node, int depth, Rng& rng) const;
    int rollout(int s, int support, int depth, Rng& rng) const;
    SearchChoice run_search(Node& root, const Belief& belief,
                            Rng& rng) const;

    const Product& prod_;
    const Bsmdp& bsmdp_;
    const CertifiedStructure& cert_;
    PlannerConfig cfg_;
    std::vector<char> winning_, dead_;
    std::vector<std::vector<Support>> terminals_;     // K-hat per support
    std::vector<std::vector<int>> regular_actions_;   // enabled per support
};

}  // namespace pltl
