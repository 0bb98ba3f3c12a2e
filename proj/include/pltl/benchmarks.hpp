#pragma once
// Built-in benchmark model generators and their objective formulas.
//
// Every generator returns a fully validated explicit POMDP. Generation is
// deterministic: calling a generator twice yields byte-identical models
// under format_pomdp.

#include <string>
#include <vector>

#include "pltl/pomdp.hpp"

namespace pltl {

// Six-state model with two observation-indistinguishable state pairs; the
// `goal` label recurs with certainty only through one of them.
Pomdp make_motivating();

// Nine-state grid walk with a shared observation for the two terminal
// states; objective: stay safe while visiting `acc` infinitely often.
Pomdp make_toy();

// n x n grid (n even, n >= 4) with actions {l, r, d}. Observations pair
// cell (r, c) with (r, c + n/2), so the agent never learns which half it is
// in. Trap columns (label T) at n/2-1 and n-1; goal G1 at (n-1, 0); goal G2
// at (n/2-1, 2) and (n/2-1, n/2+2). Two dynamics profiles:
//   n < 50: every move succeeds with 0.8 (stay with 0.2); blocked = stay.
//   n >= 50: l/r deterministic except in 190 designated rough cells where
//            they slip 0.8/0.2; d always 0.8/0.2; blocked = stay.
// Initial belief: {(0,0): 0.72, (0,n/2): 0.28} (one observation class).
Pomdp make_grid(int n);

// n x n grid (n >= 3) with two rocks of unknown Boolean quality in the
// bottom corners and an exit cell E at (n-1, n/2). State = (position, rock
// qualities, collected flags), |S| = 16 n^2. Actions {l, r, d, sample}:
// l/r wrap around horizontally (0.8 move / 0.2 stay), d is blocked at the
// bottom row, sample collects the local rock with 0.8 and slips right with
// 0.2. Standing on a rock reveals which rock it is and the full rock
// configuration (both qualities and both collected flags); elsewhere the agent sees (row, column quadrant) plus a quality reading
// when next to a rock. Labels: G = on a collected good rock, B = on a bad
// rock, E = exit. Initial belief: at (0,0), qualities uniform, nothing
// collected.
Pomdp make_rocksample(int n);

// Corridor navigation with 4 headings per cell and actions {forward,
// turn-left}, both succeeding with 0.8 (stay with 0.2); forward into a wall
// stays put. The observation is the relative wall configuration
// (front, left, right) joined with the cell's label class, 24 ids total.
// Variant 1: straight 1x15 corridor (60 states). Variant 2: the corridor
// plus an 8-cell stem hanging from column 7 (92 states). Labels: A at the
// east end, B at the corridor midpoint, C at the west dead-end. Initial
// belief: east/west headings of interior cell (0,3), equally likely.
Pomdp make_hallway(int variant);

// Lookup by family name: "motivating", "toy", "grid", "rocksample",
// "hallway". The parameter n is ignored by the two fixed-size families.
Pomdp make_benchmark(const std::string& family, int n);

// Named objective formulas used across the benchmark suite (phi1..phi7 plus
// the toy and motivating objectives), as parseable LTL strings.
struct NamedFormula {
    std::string name;
    std::string text;
};
const std::vector<NamedFormula>& benchmark_formulas();

// The LTL string for a formula name; throws ModelError if unknown.
const std::string& formula_text(const std::string& name);

}  // namespace pltl
