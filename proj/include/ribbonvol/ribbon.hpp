#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ribbonvol/rational.hpp"

namespace ribbonvol {

using Perm = std::vector<int>;

// A ribbon graph on darts 0..2E-1.  Internally the edge involution is always
// the standard pairing iota(2e) = 2e+1, so edge ids are dart/2.  Faces are the
// orbits of phi = iota∘sigma and carry labels 1..n which are part of the
// isomorphism type.
class RibbonGraph {
 public:
  // sigma must be a permutation of 0..2E-1; labels_by_dart[d] in 1..n constant
  // on phi-orbits and hitting every value in 1..n exactly one orbit's worth.
  RibbonGraph(Perm sigma, std::vector<int> labels_by_dart);

  // Accepts an arbitrary fixed-point-free involution and renumbers darts so the
  // pairing becomes standard.
  static RibbonGraph from_permutations(const Perm& sigma, const Perm& iota,
                                       const std::vector<int>& labels_by_dart);

  int darts() const { return static_cast<int>(sigma_.size()); }
  int num_edges() const { return darts() / 2; }
  int num_vertices() const { return static_cast<int>(vertex_cycles_.size()); }
  int num_faces() const { return static_cast<int>(face_cycles_.size()); }

  const Perm& sigma() const { return sigma_; }
  int sigma_at(int d) const { return sigma_[d]; }
  int iota_at(int d) const { return d ^ 1; }
  int phi_at(int d) const { return sigma_[d] ^ 1; }
  static int edge_of(int d) { return d >> 1; }

  const std::vector<std::vector<int>>& vertex_cycles() const { return vertex_cycles_; }
  const std::vector<std::vector<int>>& face_cycles() const { return face_cycles_; }
  int vertex_of(int d) const { return vertex_of_[d]; }
  int face_orbit_of(int d) const { return face_of_[d]; }
  int label_of_orbit(int orbit) const { return orbit_labels_[orbit]; }
  int label_of_dart(int d) const { return orbit_labels_[face_of_[d]]; }
  int orbit_of_label(int label) const;  // inverse of label_of_orbit

  int genus() const { return genus_; }
  int boundaries() const { return num_faces(); }
  bool is_trivalent() const;
  bool is_reduced() const;  // valency >= 3 everywhere
  int valency(int v) const { return static_cast<int>(vertex_cycles_[v].size()); }

  // a_{i,e}: number of darts of edge e on the face labelled i (0, 1 or 2).
  int face_edge_multiplicity(int label, int edge) const;
  // n x E matrix of the above, rows indexed by label-1.
  std::vector<std::vector<int>> incidence_matrix() const;
  // L_i = sum_e a_{i,e} len[e], i = 1..n.
  std::vector<Rat> boundary_lengths(const std::vector<Rat>& len) const;

  // Deterministic BFS code, minimised over start darts.  Equal encodings ==
  // label-preserving isomorphism (or plain isomorphism when with_labels=false).
  std::vector<int> canonical_encoding(bool with_labels = true) const;
  bool isomorphic(const RibbonGraph& other, bool with_labels = true) const;

  struct AutGroup {
    long order = 0;
    std::vector<Perm> elements;      // dart permutations, identity included
    std::vector<Perm> edge_actions;  // induced permutations of edge ids
  };
  AutGroup automorphism_group(bool respect_labels = true) const;

 private:
  Perm sigma_;
  std::vector<int> vertex_of_, face_of_;
  std::vector<std::vector<int>> vertex_cycles_, face_cycles_;
  std::vector<int> orbit_labels_;
  int genus_ = 0;

  void validate_and_index(std::vector<int> labels_by_dart);
};

struct MetricRibbonGraph {
  RibbonGraph graph;
  std::vector<Rat> lengths;  // per edge, strictly positive
};

struct SurfaceComponent {
  int genus = 0;
  int boundaries = 0;
  int bivalent = 0;
  int univalent = 0;
  RibbonGraph graph;            // component with induced cyclic orders
  std::vector<int> edge_ids;    // original edge ids, parallel to component edges
};

std::pair<int, int> graph_type(const RibbonGraph& G);

// Delete all edges outside `edge_subset`, keep induced cyclic orders, drop
// isolated vertices; one entry per connected component.
std::vector<SurfaceComponent> restrict_graph(const RibbonGraph& G,
                                             const std::vector<int>& edge_subset);

// Complete duplicate-free lists of label-preserving isomorphism classes,
// sorted by canonical encoding.  Desk-scale cap: 6g-6+3n <= 15.
std::vector<RibbonGraph> enumerate_trivalent(int g, int n);
std::vector<RibbonGraph> enumerate_reduced(int g, int n);

// Label-free classes (each admits >= 1 labelling; labellings of one class are
// merged).  Same ordering guarantees.
std::vector<RibbonGraph> enumerate_trivalent_unlabelled(int g, int n);
std::vector<RibbonGraph> enumerate_reduced_unlabelled(int g, int n);

// Streams every labelled class of trivalent type (g,n) without materialising
// the whole list: calls fn once per class, stops early when fn returns false.
void for_each_trivalent_labelled(int g, int n,
                                 const std::function<bool(const RibbonGraph&)>& fn);

// All label-orbit representatives of face labellings of G (which must have n
// distinguishable faces); each returned graph is G with one labelling.
std::vector<RibbonGraph> labellings_up_to_aut(const RibbonGraph& G);

// Stabiliser order of a length assignment inside the label-preserving
// automorphism group (metric-graph automorphisms).
long metric_automorphism_order(const RibbonGraph& G, const std::vector<Rat>& len);

namespace detail {
// Drops the in-process enumeration memo so the next call re-reads the cache
// directory (or recomputes).  Exists so cache behaviour can be exercised
// deterministically; harmless otherwise.
void clear_enumeration_memo();
}  // namespace detail

}  // namespace ribbonvol
