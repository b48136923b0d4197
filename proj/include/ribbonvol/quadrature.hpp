#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ribbonvol/cells.hpp"
#include "ribbonvol/rational.hpp"
#include "ribbonvol/ribbon.hpp"

namespace ribbonvol {

// How sample points are distributed over a cell.
//
// Stratified: every simplex of the cell triangulation is its own stratum with
// a fixed sample count proportional to its measure, so the corners where the
// integrand blows up keep dedicated samples.  PlainUniform: points are drawn
// uniformly from the whole cell (simplex chosen per sample by volume); kept as
// a cross-check on the stratified estimator.
enum class SamplingMode { Stratified, PlainUniform };

// Contribution of one top-dimensional cell to an integral estimate.
struct CellEstimate {
  RibbonGraph graph;         // labelled representative of the cell
  long aut_order = 1;        // label-preserving automorphisms of the graph
  Rat volume;                // exact measure of the (unfolded) cell
  double value = 0.0;        // estimated integral over the cell / aut_order
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// Monte-Carlo estimate of an integral over the moduli space of metric ribbon
// graphs with pinned boundary perimeters.  The per-cell contributions sum to
// `value`; `std_error` is the statistical error derived from the per-sample
// variance (strata are independent, so variances add).
struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  // Set when the power is at or above the integrability threshold for the
  // surface type: the true integral is infinite and the finite estimate below
  // is meaningless beyond diagnostics.
  bool divergence_warning = false;
  std::vector<CellEstimate> cells;
};

// Estimates  sum over labelled trivalent graphs G of type (g,n) of
// (1/#Aut G) * integral over the cell of (unit-ball volume)^power
// against the flat measure with the exact per-cell density.
//
// Each cell is triangulated from its vertex set in the affine chart of its
// first vertex; points are drawn uniformly per simplex and carry the exact
// constant chart density.  Estimates are deterministic functions of
// (seed, samples, mode): sample streams are keyed by (stratum, chunk) with a
// counter-based scheme, so the result does not depend on how work would be
// split across workers.
//
// power may be any finite real; 0 estimates the measure of the moduli space.
// Throws std::invalid_argument for resonant/invalid L, zero samples, or a
// sample budget smaller than two per stratum, and propagates the enumeration
// errors for invalid or over-cap (g,n).
IntegralEstimate mc_integral(int genus, int boundaries, const std::vector<Rat>& L,
                             double power, std::uint64_t samples,
                             std::uint64_t seed = 0,
                             SamplingMode mode = SamplingMode::Stratified);

// High-accuracy quadrature of the one-holed-torus boundary integral
//
//   B(s) = integral over {a,b >= 0, a+b <= 1} of ((a+b)(1-a)(1-b))^(-s) da db,
//
// finite exactly for 0 < s < 2, with B(s) ~ 3/(2-s) as s -> 2.  The integral
// of (unit-ball volume)^s over the genus-one one-boundary moduli space at
// perimeter L equals (L/2)^(2-2s)/6 * B(s) (the exponent matches the
// homogeneity degree -2 of the volume function).  Evaluated by splitting the
// simplex at its midlines and absorbing each corner singularity with an exact
// power substitution, leaving only bounded analytic integrands for iterated
// double-exponential quadrature; relative accuracy is near machine precision
// (~1e-14) uniformly in s, including arbitrarily close to 2.
// Throws std::invalid_argument unless 0 < s < 2.
double b11_special(double s);

// One rung of a divergence probe: the estimated integral restricted to the
// part of the worst cell where every vanishing edge of the worst vertex is
// longer than delta.
struct ProbeRung {
  double delta = 0.0;
  double value = 0.0;      // cumulative restricted integral (1/#Aut included)
  double std_error = 0.0;
};

// Growth report for the integral near its most divergent cell vertex.
struct DivergenceProbe {
  double power = 0.0;
  RibbonGraph graph;            // cell owning the worst vertex
  CellVertex vertex;            // vertex with the smallest local threshold
  std::optional<Rat> local;     // that threshold; nullopt when every
                                //   restriction integrates (probe is flat)
  std::uint64_t samples = 0;    // samples shared by all rungs
  std::uint64_t seed = 0;
  std::vector<ProbeRung> rungs; // sorted by decreasing delta
};

// Scans all cells for the vertex with the smallest local integrability
// threshold and reports the restricted integrals over a shrinking delta
// ladder.  If the power is at or above the threshold the rung values grow
// without bound as delta -> 0; below it they stabilise at the contribution of
// that cell.  Points are drawn log-uniformly per vanishing coordinate
// (importance sampling), which keeps the estimator variance finite even at
// divergent powers; all rungs share one sample stream, so the reported ladder
// is monotone by construction.  Any finite power is accepted.
// Throws std::invalid_argument for invalid L or non-positive deltas.
DivergenceProbe divergence_probe(int genus, int boundaries, const std::vector<Rat>& L,
                                 double power, const std::vector<double>& deltas,
                                 std::uint64_t samples = 200000,
                                 std::uint64_t seed = 0);

namespace detail {

// Exact geometry of one cell: its vertices, the pulling triangulation of the
// vertex polytope in the chart of the first vertex (per `order`), and exact
// chart volumes.  `measure` = density * total is chart-independent.
struct CellGeometry {
  std::vector<CellVertex> vertices;      // cell vertices, permuted by `order`
  int dim = 0;                           // chart dimension (#edges - n)
  std::vector<int> chart;                // edges giving chart coordinates
  Rat density;                           // flat density in the chart
  std::vector<std::vector<int>> simplices;  // vertex-index tuples, size dim+1
  std::vector<Rat> volumes;              // Lebesgue chart volume per simplex
  Rat total;                             // sum of volumes
  Rat measure;                           // density * total
};

// `order`: permutation of vertex indices; order[0] fixes the chart and the
// pulling anchors follow the permuted order.  Defaults to identity.
CellGeometry cell_geometry(const RibbonGraph& G, const std::vector<Rat>& L);
CellGeometry cell_geometry(const RibbonGraph& G, const std::vector<Rat>& L,
                           const std::vector<int>& order);

}  // namespace detail

}  // namespace ribbonvol
