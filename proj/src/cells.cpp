#include "ribbonvol/cells.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "qlinalg.hpp"

namespace ribbonvol {

namespace {

using detail::QMat;
using detail::QVec;
using detail::q_det;
using detail::q_solve_square;

void validate_perimeters(const std::vector<Rat>& L) {
  if (L.empty()) throw std::invalid_argument("empty perimeter vector");
  for (const Rat& l : L)
    if (l <= 0) throw std::invalid_argument("perimeters must be positive");
}

// Face-adjacency components along the edge subset: returns, per component,
// its vertex (face) count, edge count, and whether it fails to be unicyclic
// with an odd cycle.  Uses union-find over faces.
struct DualComponents {
  std::vector<int> comp_of_face;  // -1 when the face meets no chosen edge
  int components = 0;
  bool every_face_met = true;
  bool all_odd_unicyclic = true;
};

DualComponents analyze_dual(const RibbonGraph& G, const std::vector<int>& S) {
  const int n = G.num_faces();
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<char> met(n, 0);
  for (int e : S) {
    int f1 = G.label_of_dart(2 * e) - 1, f2 = G.label_of_dart(2 * e + 1) - 1;
    met[f1] = met[f2] = 1;
    parent[find(f1)] = find(f2);
  }
  DualComponents out;
  out.comp_of_face.assign(n, -1);
  std::vector<int> root_id(n, -1);
  std::vector<int> verts, edges, odd_loops;
  for (int f = 0; f < n; ++f) {
    if (!met[f]) {
      out.every_face_met = false;
      continue;
    }
    int r = find(f);
    if (root_id[r] < 0) {
      root_id[r] = out.components++;
      verts.push_back(0);
      edges.push_back(0);
    }
    out.comp_of_face[f] = root_id[r];
    verts[root_id[r]] += 1;
  }
  if (!out.every_face_met) {
    out.all_odd_unicyclic = false;
    return out;
  }
  // count edges per component and run a parity 2-colouring to detect whether
  // the unique cycle is odd: a unicyclic component is non-bipartite exactly
  // when its cycle has odd length
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (face, edge id)
  for (int e : S) {
    int f1 = G.label_of_dart(2 * e) - 1, f2 = G.label_of_dart(2 * e + 1) - 1;
    edges[out.comp_of_face[f1]] += 1;
    adj[f1].push_back({f2, e});
    if (f1 != f2) adj[f2].push_back({f1, e});
  }
  std::vector<int> colour(n, -1);
  std::vector<char> bipartite_comp(out.components, 1);
  for (int f = 0; f < n; ++f) {
    if (out.comp_of_face[f] < 0 || colour[f] >= 0) continue;
    std::vector<int> stack = {f};
    colour[f] = 0;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[u]) {
        if (w == u) {  // same face on both sides: odd length-one cycle
          bipartite_comp[out.comp_of_face[u]] = 0;
          continue;
        }
        if (colour[w] < 0) {
          colour[w] = colour[u] ^ 1;
          stack.push_back(w);
        } else if (colour[w] == colour[u]) {
          bipartite_comp[out.comp_of_face[w]] = 0;
        }
      }
    }
  }
  for (int c = 0; c < out.components; ++c) {
    if (edges[c] != verts[c] || bipartite_comp[c]) {
      out.all_odd_unicyclic = false;
      return out;
    }
  }
  return out;
}

// The n x n submatrix of face-edge multiplicities on the columns S.
QMat support_submatrix(const RibbonGraph& G, const std::vector<int>& S) {
  const int n = G.num_faces();
  QMat M(n, QVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = Rat(G.face_edge_multiplicity(i + 1, S[j]));
  return M;
}

}  // namespace

bool is_nonresonant(const std::vector<Rat>& L) {
  validate_perimeters(L);
  const size_t n = L.size();
  std::vector<int> eps(n, -1);
  for (;;) {
    bool all_zero = true;
    Rat sum(0);
    for (size_t i = 0; i < n; ++i) {
      if (eps[i] != 0) all_zero = false;
      sum += Rat(eps[i]) * L[i];
    }
    if (!all_zero && sum == 0) return false;
    size_t i = 0;
    while (i < n && eps[i] == 1) eps[i++] = -1;
    if (i == n) return true;
    ++eps[i];
  }
}

std::vector<std::vector<int>> support_sets(const RibbonGraph& G) {
  if (!G.is_trivalent()) throw std::invalid_argument("support_sets: graph must be trivalent");
  const int E = G.num_edges(), n = G.num_faces();
  std::vector<std::vector<int>> out;
  std::vector<int> S;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(S.size()) == n) {
      DualComponents d = analyze_dual(G, S);
      if (d.every_face_met && d.all_odd_unicyclic) out.push_back(S);
      return;
    }
    for (int e = from; e < E; ++e) {
      S.push_back(e);
      rec(e + 1);
      S.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<CellVertex> cell_vertices(const RibbonGraph& G, const std::vector<Rat>& L) {
  if (static_cast<int>(L.size()) != G.num_faces())
    throw std::invalid_argument("perimeter vector size mismatch");
  if (!is_nonresonant(L)) throw std::invalid_argument("perimeters are resonant");
  const int E = G.num_edges(), n = G.num_faces();
  const int g = G.genus();
  std::vector<CellVertex> out;
  for (const auto& S : support_sets(G)) {
    QMat M = support_submatrix(G, S);
    Rat det = q_det(M);
    if (det == 0)
      throw std::logic_error("cell_vertices: singular system on a support set");
    auto sol = q_solve_square(M, QVec(L.begin(), L.end()));
    bool positive = true;
    for (const Rat& v : *sol)
      if (v <= 0) {
        positive = false;
        break;
      }
    if (!positive) continue;
    CellVertex cv;
    cv.lambda.assign(E, Rat(0));
    for (size_t j = 0; j < S.size(); ++j) cv.lambda[S[j]] = (*sol)[j];
    cv.support = S;
    for (int e = 0; e < E; ++e)
      if (!std::binary_search(S.begin(), S.end(), e)) cv.vanishing.push_back(e);
    cv.density = rat_pow(Rat(2), 2 * g - 2 + n) / abs(det);
    out.push_back(std::move(cv));
  }
  return out;
}

std::vector<Rat> theta_map(const RibbonGraph& G, const CellVertex& v,
                           const std::vector<Rat>& x) {
  const int n = G.num_faces();
  if (x.size() != v.vanishing.size())
    throw std::invalid_argument("coordinate vector size mismatch");
  std::vector<Rat> L = G.boundary_lengths(v.lambda);
  // subtract the contribution of the prescribed coordinates, then solve for
  // the support coordinates so every perimeter is restored exactly
  QVec rhs(L.begin(), L.end());
  for (size_t k = 0; k < v.vanishing.size(); ++k)
    for (int i = 0; i < n; ++i)
      rhs[i] -= Rat(G.face_edge_multiplicity(i + 1, v.vanishing[k])) * x[k];
  auto sol = q_solve_square(support_submatrix(G, v.support), rhs);
  if (!sol) throw std::logic_error("theta_map: singular support system");
  std::vector<Rat> full(G.num_edges(), Rat(0));
  for (size_t k = 0; k < v.vanishing.size(); ++k) full[v.vanishing[k]] = x[k];
  for (size_t j = 0; j < v.support.size(); ++j) full[v.support[j]] = (*sol)[j];
  return full;
}

Rat cover_epsilon(int g, int n, const std::vector<Rat>& L) {
  validate_perimeters(L);
  if (static_cast<int>(L.size()) != n)
    throw std::invalid_argument("perimeter vector size mismatch");
  if (!is_nonresonant(L)) throw std::invalid_argument("perimeters are resonant");
  bool any = false;
  Rat min_coord(0);
  size_t max_count = 0;
  for (const RibbonGraph& G : enumerate_trivalent(g, n)) {
    std::vector<CellVertex> vs = cell_vertices(G, L);
    max_count = std::max(max_count, vs.size());
    for (const CellVertex& cv : vs)
      for (int e : cv.support) {
        if (!any || cv.lambda[e] < min_coord) min_coord = cv.lambda[e];
        any = true;
      }
  }
  if (!any) throw std::runtime_error("no cell vertices found for this type");
  // one more than the vertex count keeps every membership strict, including
  // at the vertices themselves and at uniform convex combinations
  return min_coord / Rat(static_cast<long>(max_count) + 1);
}

bool in_cover_neighbourhood(const RibbonGraph& G, const CellVertex& v,
                            const std::vector<Rat>& lengths, const Rat& epsilon) {
  if (lengths.size() != v.lambda.size())
    throw std::invalid_argument("length vector size mismatch");
  for (const Rat& l : lengths)
    if (l < 0) return false;
  if (G.boundary_lengths(lengths) != G.boundary_lengths(v.lambda)) return false;
  for (int e : v.support)
    if (lengths[e] <= epsilon) return false;
  return true;
}

}  // namespace ribbonvol
