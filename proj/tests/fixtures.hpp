#pragma once

// Shared hand-built graphs for tests.  Darts use the standard pairing
// iota(2e) = 2e+1, so edge e = darts {2e, 2e+1}.

#include <vector>

#include "ribbonvol/ribbon.hpp"

namespace fixtures {

using ribbonvol::Perm;
using ribbonvol::RibbonGraph;

// labels faces 1..n in discovery order of the face orbits
inline RibbonGraph with_discovery_labels(const Perm& sigma) {
  Perm phi(sigma.size());
  for (size_t d = 0; d < sigma.size(); ++d) phi[d] = sigma[d] ^ 1;
  std::vector<int> lab(sigma.size(), 0);
  int nf = 0;
  for (size_t d = 0; d < sigma.size(); ++d) {
    if (lab[d]) continue;
    ++nf;
    for (int x = static_cast<int>(d); !lab[x]; x = phi[x]) lab[x] = nf;
  }
  return RibbonGraph(sigma, lab);
}

// two trivalent vertices joined by three edges, one face: type (1,1)
inline RibbonGraph theta() { return with_discovery_labels({2, 3, 4, 5, 0, 1}); }

// same underlying graph, planar embedding, three faces: type (0,3)
inline RibbonGraph theta_planar() { return with_discovery_labels({2, 5, 4, 1, 0, 3}); }

// one 4-valent vertex, two interleaved loops, one face: type (1,1)
inline RibbonGraph fig8_crossed() { return with_discovery_labels({2, 3, 1, 0}); }

// one 4-valent vertex, two side-by-side loops, three faces: type (0,3)
inline RibbonGraph fig8_planar() { return with_discovery_labels({1, 2, 3, 0}); }

// two loops joined by a bridge, three faces: type (0,3).
// edge 0 = bridge (darts 0,1), edge 1 = loop at v1, edge 2 = loop at v2
inline RibbonGraph dumbbell() { return with_discovery_labels({2, 4, 3, 0, 5, 1}); }

// a planar square whose left and right sides are doubled: type (0,4).
// Edges: 0 = top, 1 = left, 2 = left arc, 3 = bottom, 4 = right,
// 5 = right arc.  Faces: 1 = square interior {0,1,3,4}, 2 = left bigon
// {1,2}, 3 = right bigon {4,5}, 4 = outer {0,2,3,5}.
inline RibbonGraph square_doubled_sides() {
  Perm sigma = {9, 4, 1, 5, 2, 6, 3, 10, 7, 11, 8, 0};
  std::vector<int> labels = {1, 4, 1, 2, 2, 4, 1, 4, 1, 3, 3, 4};
  return RibbonGraph(sigma, labels);
}

// a chain of two loops and a doubled middle: type (0,4).
// Vertices and rotations: v1 = (e2, e3, e4), v2 = (e1, e2, e1) with e1 a loop,
// v3 = (e5, e3, e4), v4 = (e6, e5, e6) with e6 a loop; e3 and e4 are parallel
// between v1 and v3.  Edge ids: e1..e6 = 0..5.  Faces: 1 = {e1,e2,e3,e4,e2},
// 2 = inside loop e1, 3 = {e3,e4,e5,e6,e5}, 4 = inside loop e6.
inline RibbonGraph loop_chain() {
  Perm sigma = {3, 0, 4, 1, 6, 7, 2, 8, 5, 11, 9, 10};
  std::vector<int> labels = {1, 2, 1, 1, 3, 1, 1, 3, 3, 3, 3, 4};
  return RibbonGraph(sigma, labels);
}

}  // namespace fixtures
