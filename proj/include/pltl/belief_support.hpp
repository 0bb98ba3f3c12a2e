#pragma once
// Support-level analysis of a product POMDP: the belief-support MDP, its
// end components, certification of almost-surely winning supports, and the
// certified structure consumed by the reward function and the planner.

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "pltl/graph.hpp"
#include "pltl/product.hpp"

namespace pltl {

// Observation-consistent, sorted, nonempty set of product states.
using Support = std::vector<int>;

// Actions enabled at every member of the support.
std::vector<int> support_enabled(const Support& theta, const Product& p);

// Successor supports of (theta, a): for each observation o compatible with
// some arrival state, the set of successors that can emit o. Jump actions
// yield the single silent-observation branch that relabels the automaton
// component. Throws ModelError when a is not enabled at every member.
std::vector<std::pair<int, Support>> support_successors(const Support& theta,
                                                        int a,
                                                        const Product& p);

// Belief-support MDP over a closed universe of supports: everything
// reachable from the initial support plus, for small observation classes,
// every observation-consistent subset that intersects the accepting-MEC
// states. The empty support acts as an explicit losing sink.
struct Bsmdp {
    std::vector<Support> supports;  // supports[sink] is empty
    int initial = -1;
    int sink = -1;
    // trans[u][a]: (observation, successor support id) branches sorted by
    // observation; an empty row means a is not enabled at every member.
    std::vector<std::vector<std::vector<std::pair<int, int>>>> trans;
    // Support intersects the accepting-MEC state set (certification only
    // looks at these; tracking uses the whole universe).
    std::vector<char> restricted;
    std::map<Support, int> index;

    int support_id(const Support& s) const;  // -1 when absent
    int size() const { return static_cast<int>(supports.size()); }
};

Bsmdp build_sub_bsmdp(const Product& p,
                      const std::vector<int>& accepting_mec_states,
                      int enumeration_cap = 12);

// End components of the support MDP restricted to supports intersecting the
// accepting-MEC states; observation branches leaving the restriction are
// redirected to the losing sink. Component states are Bsmdp support ids and
// component actions are product action ids.
std::vector<EndComponent> bs_mec_decomposition(const Bsmdp& b);

// Keep the components that are almost-surely winning for the Buchi
// condition: either some member support lies entirely inside the accepting
// product states, or the synchronised (product state, support) MDP under
// the component's action restriction is almost-surely winning everywhere.
std::vector<EndComponent> certify_bs_amecs(const std::vector<EndComponent>& mecs,
                                           const Bsmdp& b, const Product& p);

// Certified winning structure: the winning supports grouped into their
// components (with action restrictions), plus lazy lookup of the winning
// supports strictly contained in an arbitrary support.
class CertifiedStructure {
  public:
    struct Component {
        std::vector<Support> supports;          // sorted set order
        std::vector<std::vector<int>> actions;  // aligned with supports
    };

    CertifiedStructure() : memo_guard_(new std::mutex) {}
    explicit CertifiedStructure(std::vector<Component> comps);

    const std::vector<Component>& components() const { return comps_; }
    // All winning supports, smallest first (then lexicographic).
    const std::vector<Support>& winning() const { return winning_; }
    bool is_winning(const Support& s) const;
    int component_of(const Support& s) const;  // -1 when not winning

    // Winning supports strictly contained in s, smallest first. Memoised;
    // safe for concurrent callers.
    std::vector<Support> contained_winning(const Support& s) const;
    bool is_partially_winning(const Support& s) const {
        return !is_winning(s) && !contained_winning(s).empty();
    }

  private:
    std::vector<Component> comps_;
    std::vector<Support> winning_;
    std::map<Support, int> comp_of_;
    mutable std::map<Support, std::vector<Support>> memo_;
    mutable std::unique_ptr<std::mutex> memo_guard_;
};

CertifiedStructure derive_certified_structure(
    const Bsmdp& b, const std::vector<EndComponent>& accepted);

// Deterministic support-level policy that keeps a certified support inside
// its component forever and visits every member infinitely often: each
// support cycles through its restricted actions in index order, advancing
// one step per visit.
class RoundRobinPolicy {
  public:
    // Throws ModelError when start is not a certified winning support.
    RoundRobinPolicy(const CertifiedStructure& c, const Support& start);
    int next_action(const Support& current);

  private:
    CertifiedStructure::Component comp_;
    std::map<Support, int> pos_;
    std::vector<int> counter_;
};

}  // namespace pltl
