#include "pltl/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pltl {

struct Planner::Edge {
    int n = 0;
    double v = 0.0;
    std::map<int, std::unique_ptr<Node>> children;  // by observation
};

struct Planner::Node {
    int support = -1;
    int n = 0;
    bool expanded = false;
    std::vector<int> particles;
    std::map<int, Edge> regular;        // by product action
    std::vector<Edge> terminal;         // aligned with terminal targets
};

namespace {

int sample_index(const Belief& b, Rng& rng) {
    double u = rng.uniform(), acc = 0;
    for (auto [s, pr] : b) {
        acc += pr;
        if (u < acc) return s;
    }
    return b.back().first;
}

}  // namespace

Planner::Planner(const Product& p, const Bsmdp& b, const CertifiedStructure& c,
                 const PlannerConfig& cfg)
    : prod_(p), bsmdp_(b), cert_(c), cfg_(cfg) {
    if (cfg_.step_budget <= 0) cfg_.step_budget = 10 * cfg_.max_depth;
    const int n = b.size();
    winning_.assign(n, 0);
    terminals_.resize(n);
    regular_actions_.resize(n);
    for (int u = 0; u < n; ++u) {
        if (u == b.sink) continue;
        winning_[u] = c.is_winning(b.supports[u]);
        terminals_[u] = c.contained_winning(b.supports[u]);
        for (int a = 0; a < prod_.pomdp.action_count(); ++a)
            if (!b.trans[u][a].empty()) regular_actions_[u].push_back(a);
    }
    // Dead supports: cannot reach any support that is winning or has a
    // certified winning subset. Backward closure from the live set.
    std::vector<char> live(n, 0);
    for (int u = 0; u < n; ++u)
        live[u] = winning_[u] || !terminals_[u].empty();
    for (bool grow = true; grow;) {
        grow = false;
        for (int u = 0; u < n; ++u) {
            if (live[u]) continue;
            for (int a : regular_actions_[u])
                for (auto [o, v] : bsmdp_.trans[u][a])
                    if (live[v] && !live[u]) live[u] = grow = true;
        }
    }
    dead_.assign(n, 0);
    for (int u = 0; u < n; ++u) dead_[u] = !live[u];
}

bool Planner::support_is_winning(int u) const { return winning_[u]; }
bool Planner::support_is_dead(int u) const { return dead_[u]; }
const std::vector<Support>& Planner::terminal_targets(int u) const {
    return terminals_[u];
}

int Planner::rollout(int s, int u, int depth, Rng& rng) const {
    for (; depth < cfg_.max_depth; ++depth) {
        if (winning_[u]) return 1;
        if (dead_[u]) return 0;
        const auto& regular = regular_actions_[u];
        const auto& term = terminals_[u];
        const std::size_t total = regular.size() + term.size();
        if (total == 0) return 0;
        std::size_t pick = rng.below(total);
        if (pick >= regular.size()) {
            const Support& target = term[pick - regular.size()];
            return std::binary_search(target.begin(), target.end(), s) ? 1 : 0;
        }
        int a = regular[pick];
        auto [t, o] = sample_step(prod_.pomdp, s, a, rng);
        s = t;
        int next = -1;
        for (auto [bo, v] : bsmdp_.trans[u][a])
            if (bo == o) next = v;
        u = next;
    }
    return 0;
}

int Planner::simulate(int s, Node& node, int depth, Rng& rng) const {
    const int u = node.support;
    if (winning_[u]) return 1;
    if (dead_[u]) return 0;
    if (depth >= cfg_.max_depth) return 0;

    if (!node.expanded) {
        node.expanded = true;
        node.terminal.resize(terminals_[u].size());
        int r = rollout(s, u, depth, rng);
        ++node.n;
        node.particles.push_back(s);
        return r;
    }

    // UCB over regular actions then terminal pseudo-actions; unvisited
    // branches first, in canonical order.
    const auto& regular = regular_actions_[u];
    const auto& term = terminals_[u];
    if (regular.empty() && term.empty()) return 0;
    Edge* chosen = nullptr;
    int chosen_action = -1, chosen_terminal = -1;
    double best = -1.0;
    const double lg = std::log(static_cast<double>(std::max(node.n, 1)));
    auto consider = [&](Edge& e, int action, int terminal_index) {
        double score = e.n == 0
                           ? std::numeric_limits<double>::infinity()
                           : e.v + cfg_.ucb * std::sqrt(lg / e.n);
        if (score > best) {
            best = score;
            chosen = &e;
            chosen_action = action;
            chosen_terminal = terminal_index;
        }
    };
    for (int a : regular) consider(node.regular[a], a, -1);
    for (std::size_t i = 0; i < term.size(); ++i)
        consider(node.terminal[i], -1, static_cast<int>(i));

    int r;
    if (chosen_terminal >= 0) {
        const Support& target = term[chosen_terminal];
        r = std::binary_search(target.begin(), target.end(), s) ? 1 : 0;
    } else {
        auto [t, o] = sample_step(prod_.pomdp, s, chosen_action, rng);
        int next_support = -1;
        for (auto [bo, v] : bsmdp_.trans[u][chosen_action])
            if (bo == o) next_support = v;
        auto& child = chosen->children[o];
        if (!child) {
            child.reset(new Node);
            child->support = next_support;
        }
        r = simulate(t, *child, depth + 1, rng);
    }
    ++node.n;
    node.particles.push_back(s);
    ++chosen->n;
    chosen->v += (r - chosen->v) / chosen->n;
    return r;
}

SearchChoice Planner::run_search(Node& root, const Belief& belief,
                                 Rng& rng) const {
    const int u = root.support;
    const auto& regular = regular_actions_[u];
    const auto& term = terminals_[u];
    if (regular.empty() && term.empty())
        throw ModelError("no action available at the current support");

    if (static_cast<int>(root.particles.size()) < cfg_.particles) {
        root.particles.clear();
        for (int i = 0; i < cfg_.particles; ++i)
            root.particles.push_back(sample_index(belief, rng));
    }
    root.expanded = true;
    root.terminal.resize(term.size());
    std::vector<int> pool = root.particles;
    for (int i = 0; i < cfg_.simulations; ++i) {
        int s = pool[rng.below(pool.size())];
        simulate(s, root, 0, rng);
    }

    SearchChoice choice;
    double best = -1.0;
    for (int a : regular) {
        Edge& e = root.regular[a];
        if (e.n > 0 && e.v > best) {
            best = e.v;
            choice = SearchChoice{false, a, {}, e.v, {}};
        }
    }
    for (std::size_t i = 0; i < term.size(); ++i) {
        Edge& e = root.terminal[i];
        if (e.n > 0 && e.v > best) {
            best = e.v;
            choice = SearchChoice{true, -1, term[i], e.v, {}};
        }
    }
    for (int s : pool) ++choice.particle_counts[s];
    return choice;
}

SearchChoice Planner::search_once(const Belief& root, Rng& rng) const {
    Support supp;
    for (auto [s, pr] : root) supp.push_back(s);
    std::sort(supp.begin(), supp.end());
    int u = bsmdp_.support_id(supp);
    if (u < 0) throw ModelError("belief support outside the analysed space");
    Node node;
    node.support = u;
    return run_search(node, root, rng);
}

EpisodeResult Planner::run_episode(std::uint64_t seed,
                                   std::uint64_t episode) const {
    Rng rng = Rng::stream(seed, episode);
    EpisodeResult out;

    Belief belief = prod_.pomdp.start;
    int u = bsmdp_.initial;
    int hidden = sample_index(belief, rng);

    std::unique_ptr<Node> root(new Node);
    root->support = u;

    for (int step = 0; step < cfg_.step_budget; ++step) {
        if (winning_[u]) {
            // The certified round-robin policy now succeeds with
            // probability one; commit and stop planning.
            out.switched = true;
            out.certified_bound = 1.0;
            out.switch_support = bsmdp_.supports[u];
            out.outcome = Outcome::success;
            return out;
        }
        if (dead_[u] ||
            (regular_actions_[u].empty() && terminals_[u].empty())) {
            out.outcome = Outcome::dead_end;
            return out;
        }

        SearchChoice choice = run_search(*root, belief, rng);
        StepRecord rec;
        rec.value = choice.value;
        rec.belief = belief;
        rec.particle_counts = choice.particle_counts;

        if (choice.terminal) {
            rec.action = -1;
            rec.terminal_target = choice.target;
            out.steps.push_back(std::move(rec));
            out.switched = true;
            out.certified_bound = belief_mass(belief, choice.target);
            out.switch_support = choice.target;
            bool inside = std::binary_search(choice.target.begin(),
                                             choice.target.end(), hidden);
            out.outcome = inside ? Outcome::success : Outcome::failure;
            return out;
        }

        const int a = choice.action;
        auto [t, o] = sample_step(prod_.pomdp, hidden, a, rng);
        hidden = t;
        rec.action = a;
        rec.observation = o;
        out.steps.push_back(std::move(rec));

        belief = belief_update(belief, a, o, prod_.pomdp);
        int next_support = -1;
        for (auto [bo, v] : bsmdp_.trans[u][a])
            if (bo == o) next_support = v;
        u = next_support;

        // Re-root at the (a, o) child, discarding the rest of the tree;
        // particles are refilled from the exact belief on the next search.
        std::unique_ptr<Node> next = std::move(root->regular[a].children[o]);
        if (!next) {
            next.reset(new Node);
            next->support = u;
        }
        next->particles.clear();
        root = std::move(next);
    }
    out.outcome = Outcome::budget_exhausted;
    return out;
}

}  // namespace pltl
