#pragma once

#include <optional>
#include <vector>

#include "ribbonvol/rational.hpp"
#include "ribbonvol/ribbon.hpp"

namespace ribbonvol {

// A corner of a trivalent ribbon graph sits at a vertex between two
// consecutive darts of the vertex rotation.  It is identified by the dart d
// it follows: the adjacent edges are edge_of(d) and edge_of(sigma(d)), the
// opposite edge is edge_of(sigma^2(d)), and the face owning the corner is the
// face orbit of d.  The slack of an edge-weight vector x at the corner is
// x[edge_a] + x[edge_b] - x[edge_opposite].
struct Corner {
  int id = 0;  // the defining dart; unique among the corners of a graph
  int vertex = 0;
  int edge_a = 0;
  int edge_b = 0;
  int edge_opposite = 0;
  int face_label = 0;  // 1..n

  long slack(const std::vector<long>& x) const {
    return x[edge_a] + x[edge_b] - x[edge_opposite];
  }
  Rat slack(const std::vector<Rat>& x) const {
    return x[edge_a] + x[edge_b] - x[edge_opposite];
  }
};

// All 3#V corners of a trivalent graph, ordered by dart id.
// Throws std::invalid_argument if the graph is not trivalent.
std::vector<Corner> corners(const RibbonGraph& G);

enum class CurveKind { SimpleLoop, Dumbbell, Boundary };

// A simple multicurve supported on the graph, recorded by its edge
// multiplicity vector.  Simple loops have entries in {0,1}; dumbbells (two
// vertex-disjoint simple loops joined by a vertex-simple path) have entries
// in {0,1,2}, the 2-entries being the connecting path.  Each witness is a
// closed dart walk realising the vector; distinct walks with equal vectors
// are merged and all witnesses kept.
struct CurveVector {
  std::vector<long> vec;
  CurveKind kind = CurveKind::SimpleLoop;
  std::vector<std::vector<int>> witnesses;
};

// Every simple loop and dumbbell on G, including the ones tracing boundary
// faces (marked CurveKind::Boundary), sorted by vector.
std::vector<CurveVector> all_loops_and_dumbbells(const RibbonGraph& G);

// The essential ones only: walks coinciding with a face cycle (up to
// rotation and reversal of the induced cyclic edge sequence) are dropped.
std::vector<CurveVector> essential_loops_and_dumbbells(const RibbonGraph& G);

// One simplicial cone of a triangulation.  `rays` are indices into the
// owning DeltaCone's ray_indices; `det` is the index of the sublattice
// generated by the rays inside the multicurve lattice of their span.
struct SimplicialCone {
  std::vector<int> rays;
  Int det;
};

// A full-dimensional cone Z_{G,Delta}: the choice of one vanishing corner
// per face (corner ids in face-label order), the extremal rays among the
// essential curve vectors, and a triangulation into simplicial cones.
// Distinct corner choices producing the same ray set are merged; all of
// them are listed in `deltas` (the first is the representative).
struct DeltaCone {
  std::vector<std::vector<int>> deltas;
  std::vector<int> ray_indices;  // into ConeDecomposition::curves, ascending
  std::vector<SimplicialCone> simplices;
};

struct ConeDecomposition {
  int dim = 0;  // 6g-6+2n
  std::vector<Corner> all_corners;
  std::vector<CurveVector> curves;  // essential loops and dumbbells
  std::vector<DeltaCone> cones;     // sorted by ray_indices
  long duplicate_delta_merges = 0;
};

// Order in which a cone's rays are fed to the placing triangulation.  Both
// orders triangulate the same cone, so every quantity derived from the
// decomposition is identical; only the simplex lists may differ.
enum class RayOrder { Ascending, Descending };

// Decompose the space cut out by the corner-slack inequalities into the
// full-dimensional cones Z_{G,Delta} and triangulate each one by a placing
// triangulation over its rays in the requested order.  For types with
// 6g-6+2n = 0 the decomposition is empty; otherwise the absence of any
// full-dimensional cone throws std::runtime_error.
ConeDecomposition cone_decomposition(const RibbonGraph& G,
                                     RayOrder order = RayOrder::Ascending);

// Number of points of the multicurve lattice inside the half-open
// parallelepiped spanned by the rays, i.e. the index of the lattice the
// rays generate inside (multicurve lattice) ∩ span(rays).  Throws
// std::invalid_argument on dependent rays or rays outside the lattice.
Int det_simplex(const RibbonGraph& G, const std::vector<std::vector<long>>& rays);

// #{x in (multicurve lattice) : x in Z_G, <lengths, x> <= r}, where Z_G
// membership means every corner slack is >= 0 and every face has at least
// one vanishing corner.  Includes the empty multicurve x = 0.  Throws
// std::invalid_argument for r <= 0 or non-positive edge lengths.
long long count_multicurves(const RibbonGraph& G, const std::vector<Rat>& lengths,
                            const Rat& r);

// --- multicurve lattice -------------------------------------------------
// The lattice of integer edge-weight vectors whose incident sum at every
// vertex is even (an edge looping at a vertex counts twice there).

// V x E matrix over F_2: entry (v,e) = parity of the number of endpoints of
// e at v (0 for a loop edge).
std::vector<std::vector<int>> parity_matrix(const RibbonGraph& G);
int parity_rank(const RibbonGraph& G);

// Covolume of the multicurve lattice in Z^E: 2^parity_rank.
Int multicurve_lattice_covolume(const RibbonGraph& G);

// Columns form a basis of the multicurve lattice.
std::vector<std::vector<Int>> multicurve_lattice_basis(const RibbonGraph& G);

bool in_multicurve_lattice(const RibbonGraph& G, const std::vector<long>& x);

// Coordinates of x in the basis above, or nullopt if x is not in the lattice.
std::optional<std::vector<Int>> multicurve_lattice_coords(const RibbonGraph& G,
                                                          const std::vector<long>& x);

// --- cone membership ----------------------------------------------------

// x >= 0 and every corner slack >= 0.
bool in_slack_cone(const RibbonGraph& G, const std::vector<long>& x);
bool in_slack_cone(const RibbonGraph& G, const std::vector<Rat>& x);

// Additionally every face has a vanishing corner (membership in Z_G).
bool in_multicurve_cone(const RibbonGraph& G, const std::vector<long>& x);
bool in_multicurve_cone(const RibbonGraph& G, const std::vector<Rat>& x);

}  // namespace ribbonvol
