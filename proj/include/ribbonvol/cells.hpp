#pragma once

#include <vector>

#include "ribbonvol/rational.hpp"
#include "ribbonvol/ribbon.hpp"

namespace ribbonvol {

// A vertex of the closure of the cell of metrics with pinned boundary
// perimeters: exactly n coordinates are positive, and near the vertex the
// flat measure in the vanishing-edge coordinates carries the constant
// `density`.
struct CellVertex {
  std::vector<Rat> lambda;    // metric of the vertex, one entry per edge
  std::vector<int> support;   // edges with lambda > 0, ascending, size n
  std::vector<int> vanishing; // complement, ascending, size 6g-6+2n
  Rat density;                // 2^(2g-2+n) / |det of the support submatrix|
};

// True iff no nonzero signing of the perimeters sums to zero: for every
// nonzero eps in {-1,0,1}^n, sum eps_i L_i != 0.
bool is_nonresonant(const std::vector<Rat>& L);

// All edge subsets S with one edge per boundary in the following sense: every
// face meets S and each connected component of the face-adjacency graph along
// S contains exactly one cycle, of odd length (an edge with the same face on
// both sides counts as a length-one cycle).  Sorted lexicographically.
std::vector<std::vector<int>> support_sets(const RibbonGraph& G);

// Vertices of the closure of the cell with boundary perimeters L (ordered by
// face label).  L must be non-resonant.  For each support set the pinned
// linear system is solved; solutions positive on their support are vertices.
std::vector<CellVertex> cell_vertices(const RibbonGraph& G, const std::vector<Rat>& L);

// Affine chart at a vertex: x lists coordinates on v.vanishing (in that
// order); the result is the unique metric agreeing with x there and keeping
// all boundary perimeters equal to those of v.lambda.
std::vector<Rat> theta_map(const RibbonGraph& G, const CellVertex& v,
                           const std::vector<Rat>& x);

// A radius such that the neighbourhoods {all support coordinates > epsilon}
// of the vertices cover every cell of the given surface type at perimeters L.
Rat cover_epsilon(int g, int n, const std::vector<Rat>& L);

// Membership in the covering neighbourhood of a vertex: same boundary
// perimeters, non-negative metric, and strictly more than epsilon on every
// support edge of the vertex.
bool in_cover_neighbourhood(const RibbonGraph& G, const CellVertex& v,
                            const std::vector<Rat>& lengths, const Rat& epsilon);

}  // namespace ribbonvol
