// HOA v1 serialisation for automata deterministic up to epsilon jumps.
//
// Acceptance is Büchi with transition marks ("Acceptance: 1 Inf(0)"); a mark
// on an edge into q on letter v mirrors the arrival flag acc[q][v]. Epsilon
// jumps have no HOA notion, so they travel in a custom lowercase header:
// each "x-epsilon: <src> <dst>" line declares one jump. Import rebuilds the
// accepting part as the successor closure of epsilon targets and marked
// arrivals, and rejects automata that are not letter-deterministic; initial
// nondeterminism must be expressed through the epsilon header.

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <sstream>

#include "pltl/automata.hpp"

namespace pltl {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string letter_expr(Letter v, int nap) {
    if (nap == 0) return "t";
    std::string out;
    for (int i = 0; i < nap; ++i) {
        if (i) out += "&";
        if (!((v >> i) & 1)) out += "!";
        out += std::to_string(i);
    }
    return out;
}

}  // namespace

std::string export_hoa(const LDBA& a, const std::string& name) {
    std::ostringstream out;
    out << "HOA: v1\n";
    if (!name.empty()) out << "name: " << quote(name) << "\n";
    out << "States: " << a.size() << "\n";
    out << "Start: " << a.initial << "\n";
    out << "AP: " << a.sigma.ap.size();
    for (const auto& p : a.sigma.ap) out << " " << quote(p);
    out << "\n";
    out << "acc-name: Buchi\n";
    out << "Acceptance: 1 Inf(0)\n";
    out << "properties: trans-labels explicit-labels trans-acc complete\n";
    for (int q = 0; q < a.size(); ++q)
        for (int e : a.states[q].eps) out << "x-epsilon: " << q << " " << e << "\n";
    out << "--BODY--\n";
    const int nl = a.sigma.letters();
    const int nap = static_cast<int>(a.sigma.ap.size());
    for (int q = 0; q < a.size(); ++q) {
        out << "State: " << q;
        if (!a.states[q].name.empty()) out << " " << quote(a.states[q].name);
        out << "\n";
        for (int v = 0; v < nl; ++v) {
            out << "[" << letter_expr(static_cast<Letter>(v), nap) << "] "
                << a.states[q].succ[v];
            if (a.states[q].acc[v]) out << " {0}";
            out << "\n";
        }
    }
    out << "--END--\n";
    return out.str();
}

namespace {

struct HoaLexer {
    const std::string& text;
    std::size_t pos = 0;

    explicit HoaLexer(const std::string& t) : text(t) {}

    void skip_space() {
        while (pos < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            } else if (text.compare(pos, 2, "/*") == 0) {
                std::size_t end = text.find("*/", pos + 2);
                if (end == std::string::npos)
                    throw AutomatonError("unterminated comment in HOA input");
                pos = end + 2;
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_space();
        return pos >= text.size();
    }

    // Token kinds: word (identifier or header name with ':'), int, string,
    // punctuation.
    std::string next() {
        skip_space();
        if (pos >= text.size()) throw AutomatonError("unexpected end of HOA input");
        char c = text[pos];
        if (c == '"') {
            std::string out = "\"";
            ++pos;
            while (pos < text.size() && text[pos] != '"') {
                if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
                out += text[pos++];
            }
            if (pos >= text.size()) throw AutomatonError("unterminated string in HOA");
            ++pos;
            return out;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                    text[pos] == '_' || text[pos] == '-'))
                ++pos;
            if (pos < text.size() && text[pos] == ':') ++pos;  // header name
            return text.substr(start, pos - start);
        }
        ++pos;
        return std::string(1, c);
    }

    std::string peek() {
        std::size_t save = pos;
        std::string t = eof() ? "" : next();
        pos = save;
        return t;
    }
};

// Boolean label expression over AP indices, evaluated against a letter.
struct LabelParser {
    HoaLexer& lex;
    int nap;

    bool eval_for(Letter v) {
        // Parses once per letter; callers reset the lexer position.
        return expr(v);
    }

    bool expr(Letter v) {
        bool x = term(v);
        while (lex.peek() == "|") {
            lex.next();
            bool y = term(v);
            x = x || y;
        }
        return x;
    }
    bool term(Letter v) {
        bool x = factor(v);
        while (lex.peek() == "&") {
            lex.next();
            bool y = factor(v);
            x = x && y;
        }
        return x;
    }
    bool factor(Letter v) {
        std::string t = lex.next();
        if (t == "!") return !factor(v);
        if (t == "(") {
            bool x = expr(v);
            if (lex.next() != ")") throw AutomatonError("expected ')' in HOA label");
            return x;
        }
        if (t == "t") return true;
        if (t == "f") return false;
        for (char c : t)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw AutomatonError("unexpected token '" + t + "' in HOA label");
        int idx = std::stoi(t);
        if (idx < 0 || idx >= nap)
            throw AutomatonError("atomic proposition index out of range in HOA label");
        return (v >> idx) & 1;
    }
};

struct RawEdge {
    int src, dst;
    Letter letter;
    bool marked;
};

}  // namespace

LDBA import_hoa(const std::string& text) {
    HoaLexer lex(text);
    int nstates = -1, start = -1, nap = -1;
    bool start_seen = false;
    std::vector<std::string> ap;
    std::vector<std::pair<int, int>> eps_pairs;
    bool version_seen = false;
    std::string acceptance;

    // Headers.
    while (true) {
        if (lex.eof()) throw AutomatonError("HOA input has no body");
        std::string tok = lex.next();
        if (tok == "--BODY--") break;
        if (tok == "HOA:") {
            std::string v = lex.next();
            if (v != "v1") throw AutomatonError("unsupported HOA version '" + v + "'");
            version_seen = true;
        } else if (tok == "States:") {
            nstates = std::stoi(lex.next());
        } else if (tok == "Start:") {
            if (start_seen)
                throw AutomatonError("multiple start states are not supported");
            start = std::stoi(lex.next());
            start_seen = true;
            if (lex.peek() == "&")
                throw AutomatonError("conjunctive start states are not supported");
        } else if (tok == "AP:") {
            nap = std::stoi(lex.next());
            for (int i = 0; i < nap; ++i) {
                std::string s = lex.next();
                if (s.empty() || s[0] != '"')
                    throw AutomatonError("atomic propositions must be quoted strings");
                ap.push_back(s.substr(1));
            }
        } else if (tok == "Acceptance:") {
            acceptance = lex.next();  // set count
            std::string rest;
            // Consume the acceptance expression tokens up to end of line by
            // grabbing the expected shape Inf ( 0 ).
            std::string a1 = lex.next();
            std::string a2 = lex.next();
            std::string a3 = lex.next();
            std::string a4 = lex.next();
            if (acceptance != "1" || a1 != "Inf" || a2 != "(" || a3 != "0" || a4 != ")")
                throw AutomatonError("only Buchi acceptance is supported");
        } else if (tok == "x-epsilon:") {
            int src = std::stoi(lex.next());
            int dst = std::stoi(lex.next());
            eps_pairs.emplace_back(src, dst);
        } else if (tok == "acc-name:" || tok == "name:" || tok == "tool:" ||
                   tok == "properties:") {
            // Skip values until the next header-like token or the body.
            while (true) {
                std::string p = lex.peek();
                if (p.empty() || p == "--BODY--" || (!p.empty() && p.back() == ':'))
                    break;
                lex.next();
            }
        } else if (!tok.empty() && std::isupper(static_cast<unsigned char>(tok[0])) &&
                   tok.back() == ':') {
            throw AutomatonError("unsupported mandatory HOA header '" + tok + "'");
        } else if (!tok.empty() && tok.back() == ':') {
            while (true) {
                std::string p = lex.peek();
                if (p.empty() || p == "--BODY--" || (!p.empty() && p.back() == ':'))
                    break;
                lex.next();
            }
        } else {
            throw AutomatonError("unexpected token '" + tok + "' in HOA header");
        }
    }
    if (!version_seen) throw AutomatonError("missing HOA version header");
    if (nstates < 0) throw AutomatonError("missing States header");
    if (!start_seen) throw AutomatonError("missing Start header");
    if (nap < 0) throw AutomatonError("missing AP header");
    if (acceptance.empty()) throw AutomatonError("missing Acceptance header");
    if (start < 0 || start >= nstates)
        throw AutomatonError("start state out of range");

    Alphabet sigma;
    sigma.ap = ap;
    const int nl = sigma.letters();

    // Body: states and labelled edges.
    std::vector<RawEdge> edges;
    std::vector<std::string> names(nstates);
    std::vector<char> state_acc(nstates, 0);
    std::vector<char> seen(nstates, 0);
    int cur = -1;
    while (true) {
        if (lex.eof()) throw AutomatonError("HOA body is not terminated");
        std::string tok = lex.next();
        if (tok == "--END--") break;
        if (tok == "State:") {
            // Optional label, index, optional name, optional state acc set.
            std::string t = lex.next();
            if (t == "[")
                throw AutomatonError("state-labelled HOA automata are not supported");
            cur = std::stoi(t);
            if (cur < 0 || cur >= nstates)
                throw AutomatonError("state index out of range in HOA body");
            if (seen[cur]) throw AutomatonError("duplicate state in HOA body");
            seen[cur] = 1;
            if (!lex.peek().empty() && lex.peek()[0] == '"')
                names[cur] = lex.next().substr(1);
            if (lex.peek() == "{") {
                lex.next();
                std::string s = lex.next();
                if (s != "0") throw AutomatonError("unknown acceptance set in HOA");
                if (lex.next() != "}") throw AutomatonError("expected '}' in HOA");
                state_acc[cur] = 1;
            }
        } else if (tok == "[") {
            if (cur < 0) throw AutomatonError("edge before any state in HOA body");
            std::size_t label_start = lex.pos;
            // Evaluate the label expression once per letter.
            std::vector<char> letters(nl, 0);
            std::size_t label_end = label_start;
            for (int v = 0; v < nl; ++v) {
                lex.pos = label_start;
                LabelParser lp{lex, nap};
                letters[v] = lp.expr(static_cast<Letter>(v));
                label_end = lex.pos;
            }
            lex.pos = label_end;
            if (lex.next() != "]") throw AutomatonError("expected ']' in HOA label");
            int dst = std::stoi(lex.next());
            if (dst < 0 || dst >= nstates)
                throw AutomatonError("edge target out of range in HOA body");
            bool marked = false;
            if (lex.peek() == "{") {
                lex.next();
                std::string s = lex.next();
                if (s != "0") throw AutomatonError("unknown acceptance set in HOA");
                if (lex.next() != "}") throw AutomatonError("expected '}' in HOA");
                marked = true;
            }
            for (int v = 0; v < nl; ++v)
                if (letters[v])
                    edges.push_back(RawEdge{cur, dst, static_cast<Letter>(v), marked});
        } else {
            throw AutomatonError("unexpected token '" + tok + "' in HOA body");
        }
    }

    // State-based marks become marks on every incoming edge.
    for (auto& e : edges)
        if (state_acc[e.dst]) e.marked = true;

    // Letter-determinism check.
    std::vector<std::map<Letter, std::pair<int, bool>>> det(nstates);
    for (const auto& e : edges) {
        auto [it, fresh] = det[e.src].emplace(e.letter, std::make_pair(e.dst, e.marked));
        if (!fresh && (it->second.first != e.dst))
            throw AutomatonError(
                "automaton is not limit-deterministic: state " +
                std::to_string(e.src) +
                " has two successors on one letter (initial nondeterminism must "
                "use the x-epsilon header)");
        if (!fresh) it->second.second = it->second.second || e.marked;
    }
    for (const auto& [s, d] : eps_pairs)
        if (s < 0 || s >= nstates || d < 0 || d >= nstates)
            throw AutomatonError("x-epsilon state index out of range");

    // Split states by arrival mark so acceptance becomes a property of the
    // (state, arrival) pair, then merge back what is consistent.
    LDBA out;
    out.sigma = sigma;
    std::map<std::pair<int, bool>, int> idx;
    std::vector<std::pair<int, bool>> nodes;
    auto node_id = [&](int q, bool m) {
        auto it = idx.find({q, m});
        if (it != idx.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        idx.emplace(std::make_pair(q, m), id);
        nodes.emplace_back(q, m);
        return id;
    };
    int init = node_id(start, false);
    int dead = -1;
    std::queue<int> work;
    work.push(init);
    std::vector<char> done;
    while (!work.empty()) {
        int id = work.front();
        work.pop();
        if (static_cast<int>(done.size()) < id + 1) done.resize(id + 1, 0);
        if (done[id]) continue;
        done[id] = 1;
        auto [q, m] = nodes[id];
        if (static_cast<int>(out.states.size()) < id + 1) out.states.resize(id + 1);
        out.states[id].name = names[q].empty() ? std::to_string(q) : names[q];
        out.states[id].succ.assign(nl, -1);
        out.states[id].acc.assign(nl, 0);
        for (int v = 0; v < nl; ++v) {
            auto it = det[q].find(static_cast<Letter>(v));
            if (it == det[q].end()) {
                if (dead < 0) {
                    dead = node_id(-1, false);
                    if (static_cast<int>(out.states.size()) < dead + 1)
                        out.states.resize(dead + 1);
                    out.states[dead].name = "dead";
                    out.states[dead].succ.assign(nl, dead);
                    out.states[dead].acc.assign(nl, 0);
                    if (static_cast<int>(done.size()) < dead + 1)
                        done.resize(dead + 1, 0);
                    done[dead] = 1;
                }
                out.states[id].succ[v] = dead;
                continue;
            }
            int nid = node_id(it->second.first, it->second.second);
            out.states[id].succ[v] = nid;
            out.states[id].acc[v] = it->second.second;
            if (static_cast<int>(done.size()) < nid + 1) done.resize(nid + 1, 0);
            if (!done[nid]) work.push(nid);
        }
        if (m == false)
            for (const auto& [s, d] : eps_pairs)
                if (s == q) {
                    int nid = node_id(d, false);
                    out.states[id].eps.push_back(nid);
                    if (static_cast<int>(done.size()) < nid + 1) done.resize(nid + 1, 0);
                    if (!done[nid]) work.push(nid);
                }
        std::sort(out.states[id].eps.begin(), out.states[id].eps.end());
        out.states[id].eps.erase(
            std::unique(out.states[id].eps.begin(), out.states[id].eps.end()),
            out.states[id].eps.end());
    }
    out.initial = init;
    // Some queued nodes may have been created after their slot; ensure all
    // states were expanded.
    if (out.states.size() != nodes.size())
        out.states.resize(nodes.size());
    for (std::size_t i = 0; i < out.states.size(); ++i)
        if (out.states[i].succ.empty()) {
            out.states[i].succ.assign(nl, static_cast<int>(i));
            out.states[i].acc.assign(nl, 0);
            out.states[i].name = "unreachable";
        }

    // Accepting part: successor closure of epsilon targets and marked
    // arrivals.
    std::queue<int> bfs;
    auto mark_acc = [&](int q) {
        if (!out.states[q].accepting_part) {
            out.states[q].accepting_part = true;
            bfs.push(q);
        }
    };
    for (int q = 0; q < out.size(); ++q) {
        for (int e : out.states[q].eps) mark_acc(e);
        for (int v = 0; v < nl; ++v)
            if (out.states[q].acc[v]) mark_acc(out.states[q].succ[v]);
    }
    if (dead >= 0) mark_acc(dead);
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        for (int v = 0; v < nl; ++v) mark_acc(out.states[q].succ[v]);
    }
    for (int q = 0; q < out.size(); ++q)
        if (!out.states[q].eps.empty() && out.states[q].accepting_part)
            throw AutomatonError(
                "automaton is not limit-deterministic: an epsilon jump leaves "
                "the accepting part");
    validate_ldba(out);
    return reduce_ldba(out);
}

}  // namespace pltl
