#include "ribbonvol/bvol.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ribbonvol {

namespace {

void validate_lengths(const RibbonGraph& G, const std::vector<Rat>& lengths,
                      bool strictly_positive) {
  if (static_cast<int>(lengths.size()) != G.num_edges())
    throw std::invalid_argument("length vector size mismatch");
  for (const Rat& l : lengths) {
    if (strictly_positive ? (l <= 0) : (l < 0))
      throw std::invalid_argument("edge lengths must be positive");
  }
}

}  // namespace

Rat BvolRationalForm::eval(const std::vector<Rat>& lengths) const {
  for (const Rat& l : lengths)
    if (l < 0) throw std::invalid_argument("edge lengths must be non-negative");
  Rat sum(0);
  for (const BvolTerm& t : terms) {
    Rat prod(1);
    for (const auto& ray : t.rays) {
      if (ray.size() != lengths.size())
        throw std::invalid_argument("length vector size mismatch");
      Rat pair(0);
      for (size_t e = 0; e < ray.size(); ++e) pair += Rat(ray[e]) * lengths[e];
      if (pair <= 0) throw std::runtime_error("vanishing ray length in volume form");
      prod *= pair;
    }
    sum += Rat(1) / (Rat(t.det) * prod);
  }
  return sum / Rat(dim_factorial);
}

BvolRationalForm bvol_form(const RibbonGraph& G, RayOrder order) {
  ConeDecomposition D = cone_decomposition(G, order);
  BvolRationalForm form;
  form.dim = D.dim;
  form.dim_factorial = factorial(D.dim);
  if (D.dim == 0) {
    // the decomposition is the origin: a single empty product
    form.terms.push_back(BvolTerm{Int(1), {}});
    return form;
  }
  for (const auto& cone : D.cones) {
    for (const auto& s : cone.simplices) {
      BvolTerm t;
      t.det = s.det;
      for (int li : s.rays) t.rays.push_back(D.curves[cone.ray_indices[li]].vec);
      form.terms.push_back(std::move(t));
    }
  }
  return form;
}

Rat bcomb(const RibbonGraph& G, const std::vector<Rat>& lengths) {
  validate_lengths(G, lengths, true);
  return bvol_form(G).eval(lengths);
}

Rat bcomb_bullet(const RibbonGraph& G, const std::vector<Rat>& lengths) {
  validate_lengths(G, lengths, true);
  const int d = 6 * G.genus() - 6 + 2 * G.boundaries();
  const int n = G.boundaries();
  Rat value = bcomb(G, lengths) * Rat(factorial(d)) / Rat(factorial(d + n));
  for (const Rat& L : G.boundary_lengths(lengths)) value /= L;
  return value;
}

RibbonGraph split_vertex_corner(const RibbonGraph& G, int dart) {
  if (dart < 0 || dart >= G.darts()) throw std::invalid_argument("dart id out of range");
  if (G.valency(G.vertex_of(dart)) < 4)
    throw std::invalid_argument("split requires a vertex of valency at least four");
  const int D = G.darts();
  const int n1 = D, n2 = D + 1;  // new edge: n1 stays, n2 moves to the new vertex
  int prev = -1;
  for (int d = 0; d < D; ++d)
    if (G.sigma_at(d) == dart) prev = d;
  std::vector<int> sigma(D + 2), labels(D + 2);
  for (int d = 0; d < D; ++d) {
    sigma[d] = G.sigma_at(d);
    labels[d] = G.label_of_dart(d);
  }
  const int s1 = G.sigma_at(dart);          // second dart of the detached corner
  sigma[prev] = n1;                         // old vertex skips the detached pair
  sigma[n1] = G.sigma_at(s1);
  sigma[n2] = dart;                         // new vertex: (n2, dart, s1)
  sigma[s1] = n2;
  labels[n1] = G.label_of_dart(s1);
  labels[n2] = G.label_of_dart(dart ^ 1);
  return RibbonGraph(sigma, labels);
}

RibbonGraph contract_edge(const RibbonGraph& G, int edge) {
  if (edge < 0 || edge >= G.num_edges()) throw std::invalid_argument("edge id out of range");
  const int da = 2 * edge, db = 2 * edge + 1;
  if (G.vertex_of(da) == G.vertex_of(db))
    throw std::invalid_argument("cannot contract a loop edge");
  const int D = G.darts();
  auto renum = [&](int d) { return d < da ? d : d - 2; };
  std::vector<int> sigma(D - 2), labels(D - 2);
  for (int d = 0; d < D; ++d) {
    if (d == da || d == db) continue;
    int s = G.sigma_at(d);
    // splice the rotations: successors that were the removed darts jump to
    // the successor on the other endpoint, skipping the edge entirely
    if (s == da) s = G.sigma_at(db);
    if (s == db) s = G.sigma_at(da);
    sigma[renum(d)] = renum(s);
    labels[renum(d)] = G.label_of_dart(d);
  }
  return RibbonGraph(sigma, labels);
}

RibbonGraph trivalent_resolution(const RibbonGraph& G) {
  RibbonGraph R = G;
  for (;;) {
    int pick = -1;
    for (int d = 0; d < R.darts() && pick < 0; ++d)
      if (R.valency(R.vertex_of(d)) > 3) pick = d;
    if (pick < 0) return R;
    R = split_vertex_corner(R, pick);
  }
}

Rat bcomb_resolved(const RibbonGraph& G, const std::vector<Rat>& lengths) {
  validate_lengths(G, lengths, true);
  if (G.is_trivalent()) return bcomb(G, lengths);
  RibbonGraph R = trivalent_resolution(G);
  std::vector<Rat> extended = lengths;
  extended.resize(R.num_edges(), Rat(0));  // added edges carry zero length
  return bvol_form(R).eval(extended);
}

}  // namespace ribbonvol
