#include "pltl/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pltl {
namespace {

// Empty model shell with every row allocated; generators fill trans and
// obs_rows by index.
Pomdp shell(std::vector<std::string> states, std::vector<std::string> actions,
            std::vector<std::string> observations, std::vector<std::string> ap) {
    Pomdp m;
    m.states = std::move(states);
    m.actions = std::move(actions);
    m.observations = std::move(observations);
    m.ap = std::move(ap);
    const int s = m.state_count();
    const int a = m.action_count();
    m.label.assign(s, 0);
    m.trans.assign(s, std::vector<Dist>(a));
    m.obs_rows.assign(s, std::vector<Dist>(a));
    return m;
}

// Point or two-way distribution with entries sorted by index and equal
// indices merged (a 0.8/0.2 move that is blocked collapses to stay:1).
Dist dist(std::initializer_list<std::pair<int, double>> entries) {
    Dist d(entries);
    std::sort(d.begin(), d.end());
    Dist out;
    for (const auto& [i, p] : d) {
        if (!out.empty() && out.back().first == i)
            out.back().second += p;
        else
            out.emplace_back(i, p);
    }
    return out;
}

void set_state_obs(Pomdp& m, int s, int o) {
    for (int a = 0; a < m.action_count(); ++a) m.obs_rows[s][a] = {{o, 1.0}};
}

void add_label(Pomdp& m, int s, int ap_index) {
    m.label[s] |= 1u << ap_index;
}

}  // namespace

Pomdp make_motivating() {
    std::vector<std::string> states;
    for (int i = 0; i < 6; ++i) states.push_back("s" + std::to_string(i));
    Pomdp m = shell(std::move(states), {"a", "c"}, {"o03", "o1", "o25", "o4"},
                    {"goal"});
    const std::array<int, 6> obs_of = {0, 1, 2, 0, 3, 2};
    for (int s = 0; s < 6; ++s) set_state_obs(m, s, obs_of[s]);
    add_label(m, 2, 0);
    add_label(m, 3, 0);
    m.start = {{1, 1.0}};
    const int A = 0, C = 1;
    m.trans[0][A] = dist({{4, 1.0}});
    m.trans[0][C] = dist({{0, 0.5}, {3, 0.5}});
    m.trans[1][A] = dist({{0, 0.5}, {3, 0.5}});
    m.trans[1][C] = dist({{2, 0.5}, {5, 0.5}});
    m.trans[2][A] = dist({{5, 1.0}});
    m.trans[2][C] = dist({{4, 1.0}});
    m.trans[3][A] = dist({{0, 0.5}, {3, 0.5}});
    m.trans[3][C] = dist({{4, 1.0}});
    m.trans[4][A] = dist({{4, 1.0}});
    m.trans[4][C] = dist({{4, 1.0}});
    m.trans[5][A] = dist({{2, 1.0}});
    m.trans[5][C] = dist({{4, 1.0}});
    validate_pomdp(m);
    return m;
}

Pomdp make_toy() {
    std::vector<std::string> states;
    for (int i = 0; i < 9; ++i) states.push_back("s" + std::to_string(i));
    Pomdp m = shell(std::move(states), {"l", "r", "d"},
                    {"o0", "o1", "o2", "o3", "o4", "o5", "o6", "o78"},
                    {"bad", "acc"});
    for (int s = 0; s < 7; ++s) set_state_obs(m, s, s);
    set_state_obs(m, 7, 7);
    set_state_obs(m, 8, 7);
    add_label(m, 2, 0);
    add_label(m, 7, 0);
    add_label(m, 3, 1);
    add_label(m, 8, 1);
    m.start = {{0, 1.0}};
    const int L = 0, R = 1, D = 2;
    auto det = [&](int s, int a, int t) { m.trans[s][a] = dist({{t, 1.0}}); };
    det(0, L, 0); det(0, R, 1); det(0, D, 2);
    det(1, L, 0); det(1, R, 1); det(1, D, 3);
    det(2, L, 2); det(2, R, 2); det(2, D, 2);
    det(3, L, 4); det(3, R, 4); det(3, D, 6);
    det(4, L, 4); det(4, R, 4); det(4, D, 4);
    det(5, L, 6); det(5, R, 5);
    m.trans[5][D] = dist({{7, 0.2}, {8, 0.8}});
    det(6, L, 5); det(6, R, 6); det(6, D, 6);
    det(7, L, 7); det(7, R, 8); det(7, D, 7);
    det(8, L, 7); det(8, R, 8); det(8, D, 8);
    validate_pomdp(m);
    return m;
}

Pomdp make_grid(int n) {
    if (n < 4 || n % 2 != 0)
        throw ModelError("grid size must be even and at least 4");
    const auto cell = [n](int r, int c) { return r * n + c; };
    std::vector<std::string> states;
    states.reserve(n * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            states.push_back("r" + std::to_string(r) + "c" + std::to_string(c));
    std::vector<std::string> observations;
    for (int id = 0; id < n * n / 2; ++id)
        observations.push_back("o" + std::to_string(id));
    Pomdp m = shell(std::move(states), {"l", "r", "d"}, std::move(observations),
                    {"T", "G1", "G2"});
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            set_state_obs(m, cell(r, c), r * (n / 2) + (c % (n / 2)));
    // Trap columns, one goal cell in the bottom-left corner, two secondary
    // goal cells on the middle row.
    for (int r = 0; r < n; ++r) {
        add_label(m, cell(r, n / 2 - 1), 0);
        add_label(m, cell(r, n - 1), 0);
    }
    add_label(m, cell(n - 1, 0), 1);
    add_label(m, cell(n / 2 - 1, 2), 2);
    add_label(m, cell(n / 2 - 1, n / 2 + 2), 2);
    m.start = {{cell(0, 0), 0.72}, {cell(0, n / 2), 0.28}};

    // Rough cells (larger grids only): the first 190 row-major interior
    // cells, where sideways moves slip.
    std::vector<char> rough(n * n, 0);
    if (n >= 50) {
        int left = 190;
        for (int i = 0; i < n * n && left > 0; ++i)
            if (i % n != 0 && i % n != n - 1) {
                rough[i] = 1;
                --left;
            }
    }
    const int L = 0, R = 1, D = 2;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int s = cell(r, c);
            auto slip = [&](int a, int target, bool blocked) {
                m.trans[s][a] = blocked ? dist({{s, 1.0}})
                                        : dist({{target, 0.8}, {s, 0.2}});
            };
            auto move = [&](int a, int target, bool blocked) {
                if (n < 50 || rough[s])
                    slip(a, target, blocked);
                else
                    m.trans[s][a] = dist({{blocked ? s : target, 1.0}});
            };
            move(L, cell(r, c - 1), c == 0);
            move(R, cell(r, c + 1), c == n - 1);
            slip(D, cell(r + 1, c), r == n - 1);
        }
    validate_pomdp(m);
    return m;
}

Pomdp make_rocksample(int n) {
    if (n < 3) throw ModelError("rocksample size must be at least 3");
    const int rock_pos[2] = {(n - 1) * n + 0, (n - 1) * n + (n - 1)};
    const int exit_pos = (n - 1) * n + n / 2;
    // State = (position, quality bits, collected bits).
    const auto id = [](int pos, int q0, int q1, int c0, int c1) {
        return pos * 16 + q0 * 8 + q1 * 4 + c0 * 2 + c1;
    };
    std::vector<std::string> states(16 * n * n);
    for (int pos = 0; pos < n * n; ++pos)
        for (int q0 = 0; q0 < 2; ++q0)
            for (int q1 = 0; q1 < 2; ++q1)
                for (int c0 = 0; c0 < 2; ++c0)
                    for (int c1 = 0; c1 < 2; ++c1)
                        states[id(pos, q0, q1, c0, c1)] =
                            "p" + std::to_string(pos / n) + "_" +
                            std::to_string(pos % n) + "q" + std::to_string(q0) +
                            std::to_string(q1) + "c" + std::to_string(c0) +
                            std::to_string(c1);
    // On-rock ids: the rock stood on plus the full rock configuration (both
    // qualities, both collected flags), 32 ids. Off-rock ids: (row, column
    // quadrant, sense), sense = nothing or (adjacent rock, its quality).
    std::vector<std::string> observations;
    const auto on_rock_obs = [](int i, int bits) { return i * 16 + bits; };
    for (int i = 0; i < 2; ++i)
        for (int bits = 0; bits < 16; ++bits)
            observations.push_back("or" + std::to_string(i) + "b" +
                                   std::to_string(bits / 8) +
                                   std::to_string((bits / 4) % 2) +
                                   std::to_string((bits / 2) % 2) +
                                   std::to_string(bits % 2));
    const char* sense_name[5] = {"n", "0b", "0g", "1b", "1g"};
    const auto off_rock_obs = [n](int row, int quad, int sense) {
        return 32 + (row * 4 + quad) * 5 + sense;
    };
    for (int row = 0; row < n; ++row)
        for (int quad = 0; quad < 4; ++quad)
            for (int sense = 0; sense < 5; ++sense)
                observations.push_back("x" + std::to_string(row) + "q" +
                                       std::to_string(quad) + "s" +
                                       sense_name[sense]);
    Pomdp m = shell(std::move(states), {"l", "r", "d", "sample"},
                    std::move(observations), {"G", "B", "E"});
    const auto adjacent = [n](int pos, int rock) {
        const int r = pos / n, c = pos % n, rr = rock / n, rc = rock % n;
        return std::abs(r - rr) + std::abs(c - rc) == 1;
    };
    for (int s = 0; s < m.state_count(); ++s) {
        const int pos = s / 16, q0 = (s >> 3) & 1, q1 = (s >> 2) & 1,
                  c0 = (s >> 1) & 1, c1 = s & 1;
        int o;
        if (pos == rock_pos[0])
            o = on_rock_obs(0, s % 16);
        else if (pos == rock_pos[1])
            o = on_rock_obs(1, s % 16);
        else {
            int sense = 0;
            if (adjacent(pos, rock_pos[0]))
                sense = 1 + q0;
            else if (adjacent(pos, rock_pos[1]))
                sense = 3 + q1;
            o = off_rock_obs(pos / n, (pos % n) * 4 / n, sense);
        }
        set_state_obs(m, s, o);
        if ((pos == rock_pos[0] && q0 && c0) || (pos == rock_pos[1] && q1 && c1))
            add_label(m, s, 0);
        if ((pos == rock_pos[0] && !q0) || (pos == rock_pos[1] && !q1))
            add_label(m, s, 1);
        if (pos == exit_pos) add_label(m, s, 2);
    }
    for (int q0 = 0; q0 < 2; ++q0)
        for (int q1 = 0; q1 < 2; ++q1)
            m.start.emplace_back(id(0, q0, q1, 0, 0), 0.25);
    std::sort(m.start.begin(), m.start.end());

    const int L = 0, R = 1, D = 2, SAMPLE = 3;
    for (int s = 0; s < m.state_count(); ++s) {
        const int pos = s / 16, bits = s % 16;
        const int row = pos / n, col = pos % n;
        const int left_pos = row * n + (col + n - 1) % n;
        const int right_pos = row * n + (col + 1) % n;
        m.trans[s][L] = dist({{left_pos * 16 + bits, 0.8}, {s, 0.2}});
        m.trans[s][R] = dist({{right_pos * 16 + bits, 0.8}, {s, 0.2}});
        m.trans[s][D] = row == n - 1
                            ? dist({{s, 1.0}})
                            : dist({{(pos + n) * 16 + bits, 0.8}, {s, 0.2}});
        int collected = s;
        if (pos == rock_pos[0])
            collected = s | 2;
        else if (pos == rock_pos[1])
            collected = s | 1;
        m.trans[s][SAMPLE] = dist({{collected, 0.8}, {right_pos * 16 + bits, 0.2}});
    }
    validate_pomdp(m);
    return m;
}

Pomdp make_hallway(int variant) {
    if (variant != 1 && variant != 2)
        throw ModelError("hallway variant must be 1 or 2");
    // Cell layout: a 1x15 corridor, with an 8-cell stem below column 7 in
    // variant 2. Cells are (row, col) pairs; adjacency is tree-shaped.
    std::vector<std::pair<int, int>> cells;
    for (int c = 0; c < 15; ++c) cells.emplace_back(0, c);
    if (variant == 2)
        for (int r = 1; r <= 8; ++r) cells.emplace_back(r, 7);
    std::map<std::pair<int, int>, int> cell_index;
    for (std::size_t i = 0; i < cells.size(); ++i) cell_index[cells[i]] = i;

    // Headings 0..3 = N, E, S, W; turn-left maps E to N to W to S.
    const char heading_name[4] = {'N', 'E', 'S', 'W'};
    const int dr[4] = {-1, 0, 1, 0};
    const int dc[4] = {0, 1, 0, -1};
    const auto neighbor = [&](int cellid, int h) {
        const auto [r, c] = cells[cellid];
        const auto it = cell_index.find({r + dr[h], c + dc[h]});
        return it == cell_index.end() ? -1 : it->second;
    };
    std::vector<std::string> states;
    for (const auto& [r, c] : cells)
        for (int h = 0; h < 4; ++h)
            states.push_back("c" + std::to_string(r) + "_" + std::to_string(c) +
                             heading_name[h]);
    // Observation = relative wall pattern (front, left, right) x label
    // class (plain / goal-or-refuge / hazard).
    const char* cls_name[3] = {"n", "ac", "b"};
    std::vector<std::string> observations;
    for (int w = 0; w < 8; ++w)
        for (int cls = 0; cls < 3; ++cls)
            observations.push_back("w" + std::to_string(w) + cls_name[cls]);
    Pomdp m = shell(std::move(states), {"f", "t"}, std::move(observations),
                    {"A", "B", "C"});

    const int a_cell = cell_index[{0, 14}];
    const int b_cell = cell_index[{0, 7}];
    const int c_cell = cell_index[{0, 0}];
    const int F = 0, T = 1;
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
        for (int h = 0; h < 4; ++h) {
            const int s = static_cast<int>(ci) * 4 + h;
            const int front = neighbor(ci, h);
            const int left_blocked = neighbor(ci, (h + 3) % 4) < 0;
            const int right_blocked = neighbor(ci, (h + 1) % 4) < 0;
            int cls = 0;
            if (static_cast<int>(ci) == a_cell || static_cast<int>(ci) == c_cell)
                cls = 1;
            else if (static_cast<int>(ci) == b_cell)
                cls = 2;
            const int wall = (front < 0 ? 1 : 0) + 2 * left_blocked +
                             4 * right_blocked;
            set_state_obs(m, s, wall * 3 + cls);
            m.trans[s][F] = front < 0
                                ? dist({{s, 1.0}})
                                : dist({{front * 4 + h, 0.8}, {s, 0.2}});
            m.trans[s][T] =
                dist({{static_cast<int>(ci) * 4 + (h + 3) % 4, 0.8}, {s, 0.2}});
        }
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
        for (int h = 0; h < 4; ++h) {
            const int s = static_cast<int>(ci) * 4 + h;
            if (static_cast<int>(ci) == a_cell) add_label(m, s, 0);
            if (static_cast<int>(ci) == b_cell) add_label(m, s, 1);
            if (static_cast<int>(ci) == c_cell) add_label(m, s, 2);
        }
    const int start_cell = cell_index[{0, 3}];
    m.start = {{start_cell * 4 + 1, 0.5}, {start_cell * 4 + 3, 0.5}};
    validate_pomdp(m);
    return m;
}

Pomdp make_benchmark(const std::string& family, int n) {
    if (family == "motivating") return make_motivating();
    if (family == "toy") return make_toy();
    if (family == "grid") return make_grid(n);
    if (family == "rocksample") return make_rocksample(n);
    if (family == "hallway") return make_hallway(n);
    throw ModelError("unknown benchmark family '" + family + "'");
}

const std::vector<NamedFormula>& benchmark_formulas() {
    static const std::vector<NamedFormula> table = {
        {"phi1", "F A & G !B"},
        {"phi2", "F G C"},
        {"phi3", "F (G & F E) & G !B"},
        {"phi4", "F G G"},
        {"phi5", "F G1 & G !T"},
        {"phi6", "G (G2 -> F G1) & G !T"},
        {"phi7", "G F G1 & G !T"},
        {"toy", "G !bad & G F acc"},
        {"motivating", "G F goal"},
    };
    return table;
}

const std::string& formula_text(const std::string& name) {
    for (const auto& f : benchmark_formulas())
        if (f.name == name) return f.text;
    throw ModelError("unknown formula name '" + name + "'");
}

}  // namespace pltl
