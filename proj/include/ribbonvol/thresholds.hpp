#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ribbonvol/cells.hpp"
#include "ribbonvol/rational.hpp"
#include "ribbonvol/ribbon.hpp"

namespace ribbonvol {

// A product of linear forms with non-negative coefficients in `variables`
// variables, described by its incidence rows: rows[i][j] == 1 iff variable j
// appears in form i with a non-zero coefficient.  Exact coefficients are
// optional; when present they must have the same shape and match the
// incidence pattern (positive exactly where rows has a 1).  The integrability
// exponent depends on the incidence pattern only.
struct LinearFormProduct {
  int variables = 0;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<Rat>> coefficients;
};

// Exponent below which the inverse s-th power of the product is integrable
// over the unit cube: the integral converges iff s < shat_product(P), and
// diverges at the threshold itself.  Computed as the reciprocal of
// max over nonempty variable subsets J of (#forms supported inside J)/#J.
Rat shat_product(const LinearFormProduct& P);

// Alternative reading of the same maximisation in which a form is counted
// when its support contains J instead of being contained in it.  On products
// like a single form x+y the two readings disagree; the divergence probe in
// the tests arbitrates in favour of shat_product.  Kept only for that
// comparison.
Rat shat_product_containment_reading(const LinearFormProduct& P);

// Dimension of the cone of admissible boundary-weighted foliations on a
// surface of type (g,n): 0 for a disk, 1 for a cylinder, 6g-6+3n otherwise;
// additive over components.
int dim_mf_bullet(int g, int n);
int dim_mf_bullet(const std::vector<SurfaceComponent>& components);

// Integrability score of the restriction of G to an edge subset: edge count
// divided by the foliation dimension of the restricted surface.  Infinite
// (finite == false) exactly when the restriction is a forest of disks.
struct SubgraphScore {
  std::vector<std::pair<int, int>> component_types;  // (genus, boundaries)
  std::vector<int> bivalent_counts;                  // per component
  int edge_count = 0;
  int dim = 0;          // sum of component dimensions
  bool finite = false;  // dim > 0
  Rat value;            // edge_count / dim, meaningful when finite
};

SubgraphScore shat_subgraph(const RibbonGraph& G, const std::vector<int>& edge_subset);

// Local integrability exponent at a cell vertex: the minimum subgraph score
// over nonempty subsets of the vanishing edges.  Empty optional means
// +infinity (every such subset is a forest).  Requires trivalent G and
// non-resonant perimeters.
std::optional<Rat> local_threshold(const RibbonGraph& G, const std::vector<Rat>& L,
                                   const CellVertex& v);

struct ThresholdWitness {
  RibbonGraph graph;
  std::vector<int> support;  // support set whose complement hosts the subset
  std::vector<int> edges;    // minimising edge subset
  SubgraphScore score;
};

struct GlobalThreshold {
  std::optional<Rat> value;  // empty = +infinity
  std::vector<ThresholdWitness> witnesses;
};

// Minimum local exponent over all trivalent graphs of type (g,n).  With
// perimeters L (which must be non-resonant), only vertices realised at these
// perimeters contribute; without, every support set contributes regardless
// of realisability.  Both agree with closed_form_threshold on non-resonant
// perimeters.
GlobalThreshold global_threshold(int g, int n, const std::vector<Rat>& L);
GlobalThreshold global_threshold(int g, int n);

// The closed-form threshold table; empty optional (+infinity) for (0,3).
std::optional<Rat> closed_form_threshold(int g, int n);

}  // namespace ribbonvol
