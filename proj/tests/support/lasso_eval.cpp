#include "support/lasso_eval.hpp"

#include <map>
#include <stdexcept>

namespace testsupport {

namespace {

using pltl::Formula;
using pltl::Kind;
using pltl::Letter;

struct Eval {
    const std::vector<Letter>& prefix;
    const std::vector<Letter>& cycle;
    const std::vector<std::string>& ap;
    std::size_t n;  // distinct positions: prefix then one cycle copy
    std::map<std::pair<const void*, std::size_t>, bool> memo;

    std::size_t norm(std::size_t pos) const {
        if (pos < n) return pos;
        // Positions beyond the unrolled word fold back into the cycle.
        std::size_t p = prefix.size();
        return p + (pos - p) % cycle.size();
    }

    std::size_t nxt(std::size_t pos) const { return norm(pos + 1); }

    Letter at(std::size_t pos) const {
        pos = norm(pos);
        return pos < prefix.size() ? prefix[pos] : cycle[pos - prefix.size()];
    }

    int ap_index(const std::string& name) const {
        for (std::size_t i = 0; i < ap.size(); ++i)
            if (ap[i] == name) return static_cast<int>(i);
        throw std::runtime_error("lasso evaluator: unknown atom " + name);
    }

    bool holds(const Formula& f, std::size_t pos) {
        pos = norm(pos);
        auto key = std::make_pair(static_cast<const void*>(&f), pos);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        // Guard against non-termination of the temporal cases: U/F/G/R only
        // need to scan n positions from `pos` before the word repeats, so
        // they are evaluated by explicit bounded scans rather than recursion
        // on the next position.
        bool r = compute(f, pos);
        memo.emplace(key, r);
        return r;
    }

    bool compute(const Formula& f, std::size_t pos) {
        switch (f.kind()) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::Atom: return (at(pos) >> ap_index(f.atom_name())) & 1;
            case Kind::Not: return !holds(f.child(0), pos);
            case Kind::And: return holds(f.child(0), pos) && holds(f.child(1), pos);
            case Kind::Or: return holds(f.child(0), pos) || holds(f.child(1), pos);
            case Kind::Implies:
                return !holds(f.child(0), pos) || holds(f.child(1), pos);
            case Kind::Next: return holds(f.child(0), nxt(pos));
            case Kind::Eventually: {
                for (std::size_t i = 0, q = pos; i <= n; ++i, q = nxt(q))
                    if (holds(f.child(0), q)) return true;
                return false;
            }
            case Kind::Always: {
                for (std::size_t i = 0, q = pos; i <= n; ++i, q = nxt(q))
                    if (!holds(f.child(0), q)) return false;
                return true;
            }
            case Kind::Until: {
                // a U b at pos: scanning at most n+1 positions covers every
                // distinct (position) state of the lasso.
                for (std::size_t i = 0, q = pos; i <= n; ++i, q = nxt(q)) {
                    if (holds(f.child(1), q)) return true;
                    if (!holds(f.child(0), q)) return false;
                }
                return false;  // a forever, b never
            }
            case Kind::Release: {
                // a R b: b holds up to and including the step where a first
                // holds; if a never holds, b must hold forever.
                for (std::size_t i = 0, q = pos; i <= n; ++i, q = nxt(q)) {
                    if (!holds(f.child(1), q)) return false;
                    if (holds(f.child(0), q)) return true;
                }
                return true;  // b forever
            }
        }
        throw std::runtime_error("lasso evaluator: unknown operator");
    }
};

}  // namespace

bool holds_at(const Formula& f, const std::vector<Letter>& prefix,
              const std::vector<Letter>& cycle, const std::vector<std::string>& ap,
              std::size_t pos) {
    if (cycle.empty()) throw std::runtime_error("lasso cycle must be nonempty");
    Eval ev{prefix, cycle, ap, prefix.size() + cycle.size(), {}};
    return ev.holds(f, pos);
}

}  // namespace testsupport
