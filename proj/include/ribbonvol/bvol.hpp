#pragma once

#include <vector>

#include "ribbonvol/curves.hpp"
#include "ribbonvol/rational.hpp"
#include "ribbonvol/ribbon.hpp"

namespace ribbonvol {

// One summand of the unit-ball volume: a simplicial cone with its lattice
// index and the curve vectors spanning it.
struct BvolTerm {
  Int det;
  std::vector<std::vector<long>> rays;
};

// The unit-ball volume as an explicit sum: 1/dim! * sum_t 1/(det_t * prod_rho
// <lengths, rho>).  Terms correspond to the simplices of a cone decomposition;
// for genus zero with three boundaries the decomposition is the origin and the
// form reduces to the single empty product, evaluating to 1.
struct BvolRationalForm {
  int dim = 0;        // twice the number of independent curve directions
  Int dim_factorial;  // dim!
  std::vector<BvolTerm> terms;

  // Exact evaluation.  Lengths must be non-negative with the right count;
  // every ray must pair strictly positively (zero-length edges are allowed
  // only while no ray pairing vanishes).
  Rat eval(const std::vector<Rat>& lengths) const;
};

BvolRationalForm bvol_form(const RibbonGraph& G, RayOrder order = RayOrder::Ascending);

// Volume of the unit ball of the slack cone at the given positive edge
// lengths (trivalent graphs; graphs of genus zero with three boundaries give 1).
Rat bcomb(const RibbonGraph& G, const std::vector<Rat>& lengths);

// Volume of the unit ball of the full slack cone, boundary perimeters not
// pinned: dim!/(dim+n)! * bcomb / (product of boundary perimeters).
Rat bcomb_bullet(const RibbonGraph& G, const std::vector<Rat>& lengths);

// Detach the corner (dart, sigma(dart)) from its vertex onto a new trivalent
// vertex joined by a fresh edge appended after the existing ones.  The vertex
// must have valency at least four.  Old dart and edge ids are preserved.
RibbonGraph split_vertex_corner(const RibbonGraph& G, int dart);

// Contract a non-loop edge, merging its endpoints; remaining edges keep their
// relative order and shift down past the removed one.
RibbonGraph contract_edge(const RibbonGraph& G, int edge);

// Resolve every vertex of valency above three by repeated corner splits in a
// fixed deterministic order (lowest dart first).  Identity on trivalent graphs.
RibbonGraph trivalent_resolution(const RibbonGraph& G);

// Unit-ball volume on a cell whose graph need not be trivalent: resolve,
// extend the lengths by zeros on the added edges, and evaluate.  The value is
// independent of the resolution; a vanishing ray pairing throws.
Rat bcomb_resolved(const RibbonGraph& G, const std::vector<Rat>& lengths);

}  // namespace ribbonvol
