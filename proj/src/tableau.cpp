// Tableau translation from LTL (negation normal form) to a nondeterministic
// Büchi automaton, via a generalized automaton whose acceptance sets come
// from the until-subformulas, followed by counter-based degeneralization.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pltl/automata.hpp"

namespace pltl {
namespace {

// The tableau works on formulas whose temporal operators are X, U, R only.
Formula expand_derived(const Formula& f) {
    std::vector<Formula> kids;
    kids.reserve(f.arity());
    for (std::size_t i = 0; i < f.arity(); ++i) kids.push_back(expand_derived(f.child(i)));
    switch (f.kind()) {
        case Kind::Eventually: return Formula::until(Formula::tt(), kids[0]);
        case Kind::Always: return Formula::release(Formula::ff(), kids[0]);
        case Kind::True: case Kind::False: case Kind::Atom: return f;
        case Kind::Not: return Formula::make_not(kids[0]);
        case Kind::And: return Formula::make_and(kids[0], kids[1]);
        case Kind::Or: return Formula::make_or(kids[0], kids[1]);
        case Kind::Next: return Formula::next(kids[0]);
        case Kind::Until: return Formula::until(kids[0], kids[1]);
        case Kind::Release: return Formula::release(kids[0], kids[1]);
        case Kind::Implies: break;
    }
    throw AutomatonError("tableau input must be in negation normal form");
}

bool is_literal(const Formula& f) {
    return f.kind() == Kind::Atom ||
           (f.kind() == Kind::Not && f.child(0).kind() == Kind::Atom);
}

using FSet = std::set<Formula>;

struct Node {
    std::set<int> incoming;  // -1 marks the virtual initial node
    FSet new_obl, old, next;
};

struct Expander {
    std::vector<Node> done;                 // closed nodes (deduped)
    std::map<std::pair<FSet, FSet>, int> index;  // (old, next) -> done index
    int cap;
    int budget_guard = 0;

    void expand(Node n) {
        if (++budget_guard > 200000)
            throw AutomatonError("tableau expansion exceeded the state cap");
        if (n.new_obl.empty()) {
            auto key = std::make_pair(n.old, n.next);
            auto it = index.find(key);
            if (it != index.end()) {
                done[it->second].incoming.insert(n.incoming.begin(), n.incoming.end());
                return;
            }
            int id = static_cast<int>(done.size());
            if (id > cap) throw AutomatonError("tableau exceeded the state cap");
            index.emplace(key, id);
            done.push_back(n);
            Node succ;
            succ.incoming = {id};
            succ.new_obl = done[id].next;
            expand(std::move(succ));
            return;
        }
        Formula f = *n.new_obl.begin();
        n.new_obl.erase(n.new_obl.begin());
        if (f.kind() == Kind::False) return;  // contradiction: drop branch
        if (f.kind() == Kind::True) { expand(std::move(n)); return; }
        if (is_literal(f)) {
            Formula neg = f.kind() == Kind::Not ? f.child(0) : Formula::make_not(f);
            if (n.old.count(neg)) return;
            n.old.insert(f);
            expand(std::move(n));
            return;
        }
        if (n.old.count(f)) { expand(std::move(n)); return; }
        switch (f.kind()) {
            case Kind::And: {
                n.old.insert(f);
                if (!n.old.count(f.child(0))) n.new_obl.insert(f.child(0));
                if (!n.old.count(f.child(1))) n.new_obl.insert(f.child(1));
                expand(std::move(n));
                return;
            }
            case Kind::Next: {
                n.old.insert(f);
                n.next.insert(f.child(0));
                expand(std::move(n));
                return;
            }
            case Kind::Or: {
                Node n2 = n;
                n.old.insert(f);
                n.new_obl.insert(f.child(0));
                n2.old.insert(f);
                n2.new_obl.insert(f.child(1));
                expand(std::move(n));
                expand(std::move(n2));
                return;
            }
            case Kind::Until: {
                Node n2 = n;
                n.old.insert(f);
                n.new_obl.insert(f.child(0));
                n.next.insert(f);
                n2.old.insert(f);
                n2.new_obl.insert(f.child(1));
                expand(std::move(n));
                expand(std::move(n2));
                return;
            }
            case Kind::Release: {
                Node n2 = n;
                n.old.insert(f);
                n.new_obl.insert(f.child(1));
                n.next.insert(f);
                n2.old.insert(f);
                n2.new_obl.insert(f.child(0));
                n2.new_obl.insert(f.child(1));
                expand(std::move(n));
                expand(std::move(n2));
                return;
            }
            default:
                throw AutomatonError("tableau input must be in negation normal form");
        }
    }
};

std::string describe(const FSet& old) {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& f : old) {
        if (!first) out << ", ";
        first = false;
        out << f.str();
    }
    out << "}";
    return out.str();
}

}  // namespace

NBA ltl_to_nba(const Formula& f, const Alphabet& sigma, int state_cap) {
    Formula g = expand_derived(f);
    for (const auto& a : g.atoms())
        if (sigma.index_of(a) < 0)
            throw AutomatonError("formula atom '" + a + "' is not in the alphabet");

    Expander ex;
    ex.cap = state_cap;
    Node init;
    init.incoming = {-1};
    init.new_obl = {g};
    ex.expand(std::move(init));

    const int n = static_cast<int>(ex.done.size());
    const int nletters = sigma.letters();

    // Letters compatible with a node: its positive literals hold, negative don't.
    auto node_letters = [&](const Node& node) {
        Letter pos = 0, neg = 0;
        for (const auto& h : node.old) {
            if (h.kind() == Kind::Atom)
                pos |= Letter(1) << sigma.index_of(h.atom_name());
            else if (h.kind() == Kind::Not)
                neg |= Letter(1) << sigma.index_of(h.child(0).atom_name());
        }
        std::vector<Letter> out;
        for (Letter v = 0; v < static_cast<Letter>(nletters); ++v)
            if ((v & pos) == pos && (v & neg) == 0) out.push_back(v);
        return out;
    };

    // Acceptance sets, one per until-subformula u = a U b:
    // nodes with u not in old, or with b in old.
    std::set<Formula> untils;
    std::vector<Formula> stack = {g};
    while (!stack.empty()) {
        Formula h = stack.back();
        stack.pop_back();
        if (h.kind() == Kind::Until) untils.insert(h);
        for (std::size_t i = 0; i < h.arity(); ++i) stack.push_back(h.child(i));
    }
    std::vector<Formula> usets(untils.begin(), untils.end());
    const int k = static_cast<int>(usets.size());
    std::vector<std::vector<char>> in_fset(std::max(k, 1), std::vector<char>(n, 0));
    for (int j = 0; j < k; ++j)
        for (int q = 0; q < n; ++q)
            in_fset[j][q] = !ex.done[q].old.count(usets[j]) ||
                            usets[j].child(1).kind() == Kind::True ||
                            ex.done[q].old.count(usets[j].child(1));

    // Edges between tableau nodes: q -> r on the letters of r (arrival labels).
    std::vector<std::vector<int>> succ_nodes(n);
    std::vector<char> is_init_target(n, 0);
    for (int r = 0; r < n; ++r)
        for (int q : ex.done[r].incoming) {
            if (q == -1)
                is_init_target[r] = 1;
            else
                succ_nodes[q].push_back(r);
        }

    // Degeneralize with a counter over the acceptance sets: from (q, i) the
    // counter advances past every consecutive set containing q, stopping when
    // it wraps; states from which a wrap happens are accepting (a run wraps
    // infinitely often iff it hits every set infinitely often). A fresh
    // initial state is added because tableau labels sit on arrivals.
    const int copies = std::max(k, 1);
    auto pack = [&](int q, int i) { return 1 + q * copies + i; };
    auto advance = [&](int q, int i, bool& wrapped) {
        wrapped = (k == 0);
        if (k == 0) return 0;
        int j = i;
        while (j < k && in_fset[j][q]) ++j;
        if (j == k) {
            wrapped = true;
            return 0;
        }
        return j;
    };
    NBA out;
    out.sigma = sigma;
    out.initial = 0;
    const int total = 1 + n * copies;
    if (total > state_cap) throw AutomatonError("degeneralization exceeded the state cap");
    out.names.resize(total);
    out.accepting.assign(total, 0);
    out.delta.assign(total, std::vector<std::vector<int>>(nletters));
    out.names[0] = "init";
    out.accepting[0] = (k == 0);
    std::vector<std::vector<Letter>> letters_of(n);
    for (int q = 0; q < n; ++q) letters_of[q] = node_letters(ex.done[q]);
    for (int q = 0; q < n; ++q)
        for (int i = 0; i < copies; ++i) {
            int s = pack(q, i);
            out.names[s] = describe(ex.done[q].old) +
                           (copies > 1 ? "#" + std::to_string(i) : "");
            bool wrapped = false;
            int iadv = advance(q, i, wrapped);
            out.accepting[s] = wrapped;
            for (int r : succ_nodes[q])
                for (Letter v : letters_of[r]) out.delta[s][v].push_back(pack(r, iadv));
        }
    for (int r = 0; r < n; ++r)
        if (is_init_target[r])
            for (Letter v : letters_of[r]) out.delta[0][v].push_back(pack(r, 0));
    for (auto& row : out.delta)
        for (auto& cell : row) {
            std::sort(cell.begin(), cell.end());
            cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
        }
    return out;
}

}  // namespace pltl
