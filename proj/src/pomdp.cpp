#include "pltl/pomdp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace pltl {

namespace {

constexpr double kTol = 1e-9;

int lookup(const std::vector<std::string>& names, const std::string& name,
           const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw ModelError(std::string("unknown ") + what + " '" + name + "'");
}

std::string shortest(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

double dist_sum(const Dist& d) {
    double s = 0;
    for (const auto& [i, p] : d) s += p;
    return s;
}

void normalize(Dist& d) {
    double s = dist_sum(d);
    for (auto& [i, p] : d) p /= s;
}

}  // namespace

int Pomdp::state_id(const std::string& name) const {
    return lookup(states, name, "state");
}
int Pomdp::action_id(const std::string& name) const {
    return lookup(actions, name, "action");
}
int Pomdp::observation_id(const std::string& name) const {
    return lookup(observations, name, "observation");
}

std::vector<int> Pomdp::enabled(int s) const {
    std::vector<int> out;
    for (int a = 0; a < action_count(); ++a)
        if (!trans[s][a].empty()) out.push_back(a);
    return out;
}

std::set<int> Pomdp::observations_of(int s) const {
    std::set<int> out;
    for (const auto& row : obs_rows[s])
        for (const auto& [o, p] : row) out.insert(o);
    return out;
}

long Pomdp::transition_entries() const {
    long n = 0;
    for (const auto& per_state : trans)
        for (const auto& row : per_state) n += static_cast<long>(row.size());
    return n;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    const Pomdp* m = nullptr;
    int lineno = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ModelError("line " + std::to_string(lineno) + ": " + msg);
    }

    std::vector<std::string> tokens(const std::string& line) const {
        std::string clean = line.substr(0, line.find('#'));
        std::istringstream in(clean);
        std::vector<std::string> out;
        std::string t;
        while (in >> t) out.push_back(t);
        return out;
    }

    // "name:prob" pair.
    std::pair<std::string, double> weighted(const std::string& token) const {
        auto colon = token.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
            fail("expected name:probability, got '" + token + "'");
        double p = 0;
        const char* first = token.c_str() + colon + 1;
        const char* last = token.c_str() + token.size();
        auto [end, ec] = std::from_chars(first, last, p);
        if (ec != std::errc() || end != last)
            fail("bad probability in '" + token + "'");
        if (!(p > 0) || p > 1 + kTol)
            fail("probability out of range in '" + token + "'");
        return {token.substr(0, colon), p};
    }

    // A name directly followed by ':' (e.g. "label s5:").
    std::string colon_name(const std::string& token) const {
        if (token.size() < 2 || token.back() != ':')
            fail("expected 'name:', got '" + token + "'");
        return token.substr(0, token.size() - 1);
    }
};

}  // namespace

Pomdp parse_pomdp(const std::string& text, bool lenient) {
    Pomdp m;
    Parser ps;
    std::map<std::pair<int, int>, bool> seen_t, seen_z;
    std::vector<int> default_obs;  // -1 = undeclared
    bool lists_done = false;
    auto require_lists = [&]() {
        if (lists_done) return;
        if (m.states.empty()) ps.fail("'states:' must precede this line");
        if (m.actions.empty()) ps.fail("'actions:' must precede this line");
        if (m.observations.empty())
            ps.fail("'observations:' must precede this line");
        m.label.assign(m.states.size(), 0);
        m.trans.assign(m.states.size(), std::vector<Dist>(m.actions.size()));
        m.obs_rows.assign(m.states.size(), std::vector<Dist>(m.actions.size()));
        default_obs.assign(m.states.size(), -1);
        lists_done = true;
    };
    auto declare = [&](std::vector<std::string>& into,
                       const std::vector<std::string>& toks, const char* what) {
        if (!into.empty()) ps.fail(std::string("duplicate '") + what + ":' line");
        if (lists_done) ps.fail("header lines must come first");
        for (std::size_t i = 1; i < toks.size(); ++i) {
            for (const auto& prev : into)
                if (prev == toks[i])
                    ps.fail(std::string("duplicate ") + what + " name '" +
                            toks[i] + "'");
            into.push_back(toks[i]);
        }
        if (into.empty()) ps.fail(std::string("empty '") + what + ":' list");
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++ps.lineno;
        auto toks = ps.tokens(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0];
        if (head == "states:") {
            declare(m.states, toks, "state");
        } else if (head == "actions:") {
            declare(m.actions, toks, "action");
        } else if (head == "observations:") {
            declare(m.observations, toks, "observation");
        } else if (head == "ap:") {
            if (lists_done) ps.fail("header lines must come first");
            for (std::size_t i = 1; i < toks.size(); ++i) {
                for (const auto& prev : m.ap)
                    if (prev == toks[i])
                        ps.fail("duplicate atomic proposition '" + toks[i] + "'");
                m.ap.push_back(toks[i]);
            }
            if (m.ap.size() > 32) ps.fail("more than 32 atomic propositions");
        } else if (head == "start:") {
            require_lists();
            if (!m.start.empty()) ps.fail("duplicate 'start:' line");
            if (toks.size() < 2) ps.fail("empty start distribution");
            for (std::size_t i = 1; i < toks.size(); ++i) {
                auto [name, p] = ps.weighted(toks[i]);
                int s = -1;
                try {
                    s = m.state_id(name);
                } catch (const ModelError& e) {
                    ps.fail(e.what());
                }
                for (const auto& [prev, q] : m.start)
                    if (prev == s) ps.fail("state repeated in start distribution");
                m.start.emplace_back(s, p);
            }
            std::sort(m.start.begin(), m.start.end());
        } else if (head == "label") {
            require_lists();
            if (toks.size() < 2) ps.fail("label line needs a state");
            int s = -1;
            try {
                s = m.state_id(ps.colon_name(toks[1]));
            } catch (const ModelError& e) {
                ps.fail(e.what());
            }
            for (std::size_t i = 2; i < toks.size(); ++i) {
                int bit = -1;
                for (std::size_t j = 0; j < m.ap.size(); ++j)
                    if (m.ap[j] == toks[i]) bit = static_cast<int>(j);
                if (bit < 0)
                    ps.fail("unknown atomic proposition '" + toks[i] + "'");
                m.label[s] |= 1u << bit;
            }
        } else if (head == "obs") {
            require_lists();
            if (toks.size() != 3) ps.fail("expected 'obs <state>: <observation>'");
            int s = -1, o = -1;
            try {
                s = m.state_id(ps.colon_name(toks[1]));
                o = m.observation_id(toks[2]);
            } catch (const ModelError& e) {
                ps.fail(e.what());
            }
            if (default_obs[s] >= 0)
                ps.fail("duplicate default observation for '" + m.states[s] + "'");
            default_obs[s] = o;
        } else if (head == "T" || head == "Z") {
            require_lists();
            if (toks.size() < 5 || toks[3] != ":")
                ps.fail("expected '" + head + " <state> <action> : name:prob ...'");
            int s = -1, a = -1;
            try {
                s = m.state_id(toks[1]);
                a = m.action_id(toks[2]);
            } catch (const ModelError& e) {
                ps.fail(e.what());
            }
            auto& seen = head == "T" ? seen_t : seen_z;
            if (seen[{s, a}])
                ps.fail("duplicate " + head + " row for (" + toks[1] + ", " +
                        toks[2] + ")");
            seen[{s, a}] = true;
            Dist row;
            for (std::size_t i = 4; i < toks.size(); ++i) {
                auto [name, p] = ps.weighted(toks[i]);
                int t = -1;
                try {
                    t = head == "T" ? m.state_id(name) : m.observation_id(name);
                } catch (const ModelError& e) {
                    ps.fail(e.what());
                }
                for (const auto& [prev, q] : row)
                    if (prev == t) ps.fail("'" + name + "' repeated in row");
                row.emplace_back(t, p);
            }
            std::sort(row.begin(), row.end());
            (head == "T" ? m.trans : m.obs_rows)[s][a] = std::move(row);
        } else {
            ps.fail("unrecognized directive '" + head + "'");
        }
    }
    ps.lineno = 0;  // subsequent errors are semantic, not positional
    require_lists();

    // Fill missing observation rows from per-state defaults.
    for (int s = 0; s < m.state_count(); ++s)
        for (int a = 0; a < m.action_count(); ++a)
            if (m.obs_rows[s][a].empty()) {
                if (default_obs[s] < 0)
                    throw ModelError("state '" + m.states[s] +
                                     "' has neither a Z row for action '" +
                                     m.actions[a] +
                                     "' nor a default observation");
                m.obs_rows[s][a] = {{default_obs[s], 1.0}};
            }

    validate_pomdp(m, lenient);
    return m;
}

void validate_pomdp(const Pomdp& m, bool lenient) {
    if (m.states.empty()) throw ModelError("model has no states");
    if (m.actions.empty()) throw ModelError("model has no actions");
    if (m.observations.empty()) throw ModelError("model has no observations");
    if (m.start.empty()) throw ModelError("model has no start distribution");
    if (std::abs(dist_sum(m.start) - 1.0) > kTol)
        throw ModelError("start distribution sums to " +
                         shortest(dist_sum(m.start)) + ", not 1");
    for (int s = 0; s < m.state_count(); ++s) {
        for (int a = 0; a < m.action_count(); ++a) {
            const Dist& row = m.trans[s][a];
            if (!row.empty() && std::abs(dist_sum(row) - 1.0) > kTol)
                throw ModelError("transition row (" + m.states[s] + ", " +
                                 m.actions[a] + ") sums to " +
                                 shortest(dist_sum(row)) + ", not 1");
            const Dist& zrow = m.obs_rows[s][a];
            if (zrow.empty())
                throw ModelError("state '" + m.states[s] +
                                 "' lacks an observation row");
            if (std::abs(dist_sum(zrow) - 1.0) > kTol)
                throw ModelError("observation row (" + m.states[s] + ", " +
                                 m.actions[a] + ") sums to " +
                                 shortest(dist_sum(zrow)) + ", not 1");
        }
        if (m.observations_of(s).empty())
            throw ModelError("state '" + m.states[s] + "' emits no observation");
    }
    if (!lenient) {
        // States sharing an observation must share enabled actions.
        std::vector<std::vector<int>> by_obs(m.observation_count());
        for (int s = 0; s < m.state_count(); ++s)
            for (int o : m.observations_of(s)) by_obs[o].push_back(s);
        for (int o = 0; o < m.observation_count(); ++o) {
            for (std::size_t i = 1; i < by_obs[o].size(); ++i) {
                int s0 = by_obs[o][0], s1 = by_obs[o][i];
                if (m.enabled(s0) != m.enabled(s1))
                    throw ModelError(
                        "states '" + m.states[s0] + "' and '" + m.states[s1] +
                        "' share observation '" + m.observations[o] +
                        "' but enable different actions");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

std::string format_pomdp(const Pomdp& m) {
    std::string out;
    auto list = [&](const char* head, const std::vector<std::string>& names) {
        out += head;
        for (const auto& n : names) out += " " + n;
        out += "\n";
    };
    list("states:", m.states);
    list("actions:", m.actions);
    list("observations:", m.observations);
    if (!m.ap.empty()) list("ap:", m.ap);
    out += "start:";
    for (const auto& [s, p] : m.start)
        out += " " + m.states[s] + ":" + shortest(p);
    out += "\n";
    for (int s = 0; s < m.state_count(); ++s) {
        if (!m.label[s]) continue;
        out += "label " + m.states[s] + ":";
        for (std::size_t j = 0; j < m.ap.size(); ++j)
            if (m.label[s] & (1u << j)) out += " " + m.ap[j];
        out += "\n";
    }
    // A state whose observation rows are all the same point distribution is
    // written as a default; anything else gets explicit rows.
    std::vector<int> def(m.state_count(), -1);
    for (int s = 0; s < m.state_count(); ++s) {
        const Dist& first = m.obs_rows[s][0];
        bool uniform = first.size() == 1;
        for (int a = 1; a < m.action_count() && uniform; ++a)
            uniform = m.obs_rows[s][a] == first;
        if (uniform) {
            def[s] = first[0].first;
            out += "obs " + m.states[s] + ": " + m.observations[def[s]] + "\n";
        }
    }
    for (int s = 0; s < m.state_count(); ++s)
        for (int a = 0; a < m.action_count(); ++a) {
            if (m.trans[s][a].empty()) continue;
            out += "T " + m.states[s] + " " + m.actions[a] + " :";
            for (const auto& [t, p] : m.trans[s][a])
                out += " " + m.states[t] + ":" + shortest(p);
            out += "\n";
        }
    for (int s = 0; s < m.state_count(); ++s) {
        if (def[s] >= 0) continue;
        for (int a = 0; a < m.action_count(); ++a) {
            out += "Z " + m.states[s] + " " + m.actions[a] + " :";
            for (const auto& [o, p] : m.obs_rows[s][a])
                out += " " + m.observations[o] + ":" + shortest(p);
            out += "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Filtering and simulation
// ---------------------------------------------------------------------------

Belief belief_update(const Belief& b, int a, int o, const Pomdp& m) {
    for (const auto& [s, p] : b)
        if (m.trans[s][a].empty())
            throw ModelError("action '" + m.actions[a] +
                             "' is disabled in belief state '" + m.states[s] +
                             "'");
    std::map<int, double> pred;
    for (const auto& [s, p] : b)
        for (const auto& [t, q] : m.trans[s][a]) pred[t] += p * q;
    Belief out;
    double den = 0;
    for (const auto& [t, p] : pred) {
        double z = 0;
        for (const auto& [oo, q] : m.obs_rows[t][a])
            if (oo == o) z = q;
        if (z * p > 0) {
            out.emplace_back(t, z * p);
            den += z * p;
        }
    }
    if (den <= 0)
        throw ModelError("observation '" + m.observations[o] +
                         "' is impossible after action '" + m.actions[a] + "'");
    for (auto& [t, p] : out) p /= den;
    normalize(out);
    return out;
}

namespace {

int sample_dist(const Dist& d, Rng& rng) {
    double u = rng.uniform();
    double acc = 0;
    for (const auto& [i, p] : d) {
        acc += p;
        if (u < acc) return i;
    }
    return d.back().first;  // guard against rounding at u ~ 1
}

}  // namespace

std::pair<int, int> sample_step(const Pomdp& m, int s, int a, Rng& rng) {
    if (m.trans[s][a].empty())
        throw ModelError("action '" + m.actions[a] + "' is disabled in '" +
                         m.states[s] + "'");
    int t = sample_dist(m.trans[s][a], rng);
    int o = sample_dist(m.obs_rows[t][a], rng);
    return {t, o};
}

std::vector<int> enabled_actions(const std::vector<int>& theta, const Pomdp& m) {
    std::vector<int> out;
    for (int a = 0; a < m.action_count(); ++a) {
        bool all = !theta.empty();
        for (int s : theta)
            if (m.trans[s][a].empty()) {
                all = false;
                break;
            }
        if (all) out.push_back(a);
    }
    return out;
}

double belief_mass(const Belief& b, const std::vector<int>& theta) {
    double mass = 0;
    for (const auto& [s, p] : b)
        if (std::find(theta.begin(), theta.end(), s) != theta.end()) mass += p;
    return mass;
}

}  // namespace pltl
