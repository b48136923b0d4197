#include "ribbonvol/curves.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "qlinalg.hpp"

namespace ribbonvol {

namespace {

using detail::QMat;
using detail::QVec;
using detail::q_dot;
using detail::q_nullvec;
using detail::q_rank;
using detail::q_solve_square;
using detail::to_qmat;

// --- Smith-style diagonalisation over Z ----------------------------------

// Product of the diagonal entries after diagonalising a k x n integer matrix
// of rank k by unimodular row/column operations: the index of the lattice
// generated by the rows inside its saturation.  Returns 0 if rank < k.
Int diagonal_index(std::vector<std::vector<Int>> M) {
  const size_t k = M.size();
  if (k == 0) return 1;
  const size_t n = M[0].size();
  Int product = 1;
  for (size_t t = 0; t < k; ++t) {
    size_t pi = k, pj = n;
    for (size_t i = t; i < k; ++i)
      for (size_t j = t; j < n; ++j)
        if (M[i][j] != 0 && (pi == k || abs(M[i][j]) < abs(M[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == k) return 0;
    std::swap(M[pi], M[t]);
    if (pj != t)
      for (size_t i = 0; i < k; ++i) std::swap(M[i][pj], M[i][t]);
    for (;;) {
      size_t bad_row = k;
      for (size_t i = t + 1; i < k; ++i)
        if (M[i][t] != 0) {
          bad_row = i;
          break;
        }
      if (bad_row < k) {
        Int q = M[bad_row][t] / M[t][t];
        for (size_t j = t; j < n; ++j) M[bad_row][j] -= q * M[t][j];
        if (M[bad_row][t] != 0) std::swap(M[bad_row], M[t]);
        continue;
      }
      size_t bad_col = n;
      for (size_t j = t + 1; j < n; ++j)
        if (M[t][j] != 0) {
          bad_col = j;
          break;
        }
      if (bad_col < n) {
        Int q = M[t][bad_col] / M[t][t];
        for (size_t i = t; i < k; ++i) M[i][bad_col] -= q * M[i][t];
        if (M[t][bad_col] != 0)
          for (size_t i = 0; i < k; ++i) std::swap(M[i][bad_col], M[i][t]);
        continue;
      }
      break;
    }
    product *= abs(M[t][t]);
  }
  return product;
}

// --- cyclic edge sequences ------------------------------------------------

// Lexicographic minimum over all rotations of the sequence and of its
// reversal: the canonical key of a closed walk viewed as an unoriented
// cyclic edge sequence.
std::vector<int> normalize_cyclic(const std::vector<int>& seq) {
  const size_t n = seq.size();
  std::vector<int> best;
  auto consider = [&](const std::vector<int>& s) {
    for (size_t r = 0; r < n; ++r) {
      std::vector<int> rot(n);
      for (size_t i = 0; i < n; ++i) rot[i] = s[(r + i) % n];
      if (best.empty() || rot < best) best = rot;
    }
  };
  consider(seq);
  std::vector<int> rev(seq.rbegin(), seq.rend());
  consider(rev);
  return best;
}

std::vector<int> walk_edges(const std::vector<int>& darts) {
  std::vector<int> e(darts.size());
  for (size_t i = 0; i < darts.size(); ++i) e[i] = RibbonGraph::edge_of(darts[i]);
  return e;
}

std::set<std::vector<int>> face_walk_keys(const RibbonGraph& G) {
  std::set<std::vector<int>> keys;
  for (const auto& cyc : G.face_cycles()) keys.insert(normalize_cyclic(walk_edges(cyc)));
  return keys;
}

// --- simple cycles and connecting paths ------------------------------------

struct Cycle {
  std::vector<int> darts;  // closed walk; dart i runs from its vertex to the next
  std::vector<long> chi;   // edge multiplicities, all in {0,1}
  std::vector<char> on_vertex;
};

// All vertex-simple cycles, each reported once with a deterministic witness
// walk.  The walk starts at the smallest vertex of the cycle.
std::vector<Cycle> simple_cycles(const RibbonGraph& G) {
  const int E = G.num_edges(), V = G.num_vertices();
  std::vector<Cycle> out;
  std::set<std::vector<int>> seen;  // sorted edge lists
  std::vector<int> path;
  std::vector<char> visited(V, 0);

  auto record = [&](const std::vector<int>& darts) {
    std::vector<int> edges = walk_edges(darts);
    std::vector<int> key = edges;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) return;
    Cycle c;
    c.darts = darts;
    c.chi.assign(E, 0);
    for (int e : edges) c.chi[e] = 1;
    c.on_vertex.assign(V, 0);
    for (int d : darts) c.on_vertex[G.vertex_of(d)] = 1;
    out.push_back(std::move(c));
  };

  std::function<void(int, int)> dfs = [&](int v0, int cur) {
    for (int d : G.vertex_cycles()[cur]) {
      if (!path.empty() && d == (path.back() ^ 1)) continue;  // no edge backtrack
      int w = G.vertex_of(d ^ 1);
      if (w == v0) {
        path.push_back(d);
        record(path);
        path.pop_back();
      } else if (w > v0 && !visited[w]) {
        visited[w] = 1;
        path.push_back(d);
        dfs(v0, w);
        path.pop_back();
        visited[w] = 0;
      }
    }
  };
  for (int v0 = 0; v0 < V; ++v0) {
    std::fill(visited.begin(), visited.end(), 0);
    visited[v0] = 1;
    path.clear();
    dfs(v0, v0);
  }
  return out;
}

std::vector<int> rotate_cycle_to(const RibbonGraph& G, const std::vector<int>& darts,
                                 int start_vertex) {
  size_t t = 0;
  while (t < darts.size() && G.vertex_of(darts[t]) != start_vertex) ++t;
  std::vector<int> rot;
  rot.reserve(darts.size());
  for (size_t i = 0; i < darts.size(); ++i) rot.push_back(darts[(t + i) % darts.size()]);
  return rot;
}

std::vector<int> reverse_walk(const std::vector<int>& darts) {
  std::vector<int> rev;
  rev.reserve(darts.size());
  for (auto it = darts.rbegin(); it != darts.rend(); ++it) rev.push_back(*it ^ 1);
  return rev;
}

std::vector<int> concat(std::initializer_list<const std::vector<int>*> parts) {
  std::vector<int> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

void require_trivalent(const RibbonGraph& G, const char* op) {
  if (!G.is_trivalent())
    throw std::invalid_argument(std::string(op) + ": graph must be trivalent");
}

// F_2 row reduction of the vertex/edge parity matrix.
struct ParityRref {
  std::vector<std::vector<int>> rows;  // reduced rows, one per pivot
  std::vector<int> pivot_col;          // pivot column of each reduced row
  std::vector<int> row_of_pivot_col;   // edge -> row index or -1
};

ParityRref parity_rref(const RibbonGraph& G) {
  std::vector<std::vector<int>> M = parity_matrix(G);
  const int E = G.num_edges();
  ParityRref R;
  R.row_of_pivot_col.assign(E, -1);
  size_t row = 0;
  for (int col = 0; col < E && row < M.size(); ++col) {
    size_t piv = row;
    while (piv < M.size() && M[piv][col] == 0) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[row]);
    for (size_t i = 0; i < M.size(); ++i)
      if (i != row && M[i][col] != 0)
        for (int j = 0; j < E; ++j) M[i][j] ^= M[row][j];
    R.pivot_col.push_back(col);
    R.row_of_pivot_col[col] = static_cast<int>(row);
    ++row;
  }
  // collect rows only now: later pivot steps keep reducing earlier rows
  R.rows.assign(M.begin(), M.begin() + row);
  return R;
}

}  // namespace

// --- corners ----------------------------------------------------------------

std::vector<Corner> corners(const RibbonGraph& G) {
  require_trivalent(G, "corners");
  std::vector<Corner> out;
  out.reserve(G.darts());
  for (int d = 0; d < G.darts(); ++d) {
    Corner c;
    c.id = d;
    c.vertex = G.vertex_of(d);
    c.edge_a = RibbonGraph::edge_of(d);
    c.edge_b = RibbonGraph::edge_of(G.sigma_at(d));
    c.edge_opposite = RibbonGraph::edge_of(G.sigma_at(G.sigma_at(d)));
    c.face_label = G.label_of_dart(d);
    out.push_back(c);
  }
  return out;
}

// --- loops and dumbbells -----------------------------------------------------

std::vector<CurveVector> all_loops_and_dumbbells(const RibbonGraph& G) {
  require_trivalent(G, "all_loops_and_dumbbells");
  const int E = G.num_edges();
  const std::set<std::vector<int>> faces = face_walk_keys(G);
  auto is_face_walk = [&](const std::vector<int>& darts) {
    return faces.count(normalize_cyclic(walk_edges(darts))) > 0;
  };

  const std::vector<Cycle> cycles = simple_cycles(G);
  std::map<std::vector<long>, CurveVector> by_vec;

  for (const Cycle& c : cycles) {
    CurveVector cv;
    cv.vec = c.chi;
    cv.kind = is_face_walk(c.darts) ? CurveKind::Boundary : CurveKind::SimpleLoop;
    cv.witnesses = {c.darts};
    by_vec.emplace(cv.vec, std::move(cv));
  }

  // Dumbbells: two vertex-disjoint cycles joined by a vertex-simple path kept
  // away from both cycles except at its endpoints; path edges count twice.
  const int V = G.num_vertices();
  for (size_t i = 0; i < cycles.size(); ++i) {
    for (size_t j = i + 1; j < cycles.size(); ++j) {
      const Cycle &C1 = cycles[i], &C2 = cycles[j];
      bool disjoint = true;
      for (int v = 0; v < V; ++v)
        if (C1.on_vertex[v] && C2.on_vertex[v]) {
          disjoint = false;
          break;
        }
      if (!disjoint) continue;

      std::vector<int> path;
      std::vector<char> visited(V, 0);
      std::function<void(int, int)> walk_paths = [&](int a, int cur) {
        for (int d : G.vertex_cycles()[cur]) {
          if (!path.empty() && d == (path.back() ^ 1)) continue;
          int w = G.vertex_of(d ^ 1);
          if (C2.on_vertex[w]) {
            path.push_back(d);
            // assemble the four oriented realisations of the closed walk
            std::vector<int> c1 = rotate_cycle_to(G, C1.darts, a);
            std::vector<int> c2 = rotate_cycle_to(G, C2.darts, w);
            std::vector<int> c1r = reverse_walk(c1), c2r = reverse_walk(c2);
            std::vector<int> pr = reverse_walk(path);
            std::vector<int> witness = concat({&c1, &path, &c2, &pr});
            bool boundary = is_face_walk(witness) ||
                            is_face_walk(concat({&c1r, &path, &c2, &pr})) ||
                            is_face_walk(concat({&c1, &path, &c2r, &pr})) ||
                            is_face_walk(concat({&c1r, &path, &c2r, &pr}));
            std::vector<long> vec(E);
            for (int e = 0; e < E; ++e) vec[e] = C1.chi[e] + C2.chi[e];
            for (int pd : path) vec[RibbonGraph::edge_of(pd)] += 2;
            auto it = by_vec.find(vec);
            if (it == by_vec.end()) {
              CurveVector cv;
              cv.vec = vec;
              cv.kind = boundary ? CurveKind::Boundary : CurveKind::Dumbbell;
              cv.witnesses = {witness};
              by_vec.emplace(std::move(vec), std::move(cv));
            } else {
              it->second.witnesses.push_back(witness);
              if (!boundary) it->second.kind = CurveKind::Dumbbell;
            }
            path.pop_back();
          } else if (!C1.on_vertex[w] && !visited[w]) {
            visited[w] = 1;
            path.push_back(d);
            walk_paths(a, w);
            path.pop_back();
            visited[w] = 0;
          }
        }
      };
      for (int a = 0; a < V; ++a) {
        if (!C1.on_vertex[a]) continue;
        std::fill(visited.begin(), visited.end(), 0);
        visited[a] = 1;
        path.clear();
        walk_paths(a, a);
      }
    }
  }

  std::vector<CurveVector> out;
  out.reserve(by_vec.size());
  for (auto& [vec, cv] : by_vec) out.push_back(std::move(cv));
  return out;
}

std::vector<CurveVector> essential_loops_and_dumbbells(const RibbonGraph& G) {
  std::vector<CurveVector> all = all_loops_and_dumbbells(G);
  std::vector<CurveVector> out;
  for (auto& cv : all)
    if (cv.kind != CurveKind::Boundary) out.push_back(std::move(cv));
  return out;
}

// --- multicurve lattice -------------------------------------------------------

std::vector<std::vector<int>> parity_matrix(const RibbonGraph& G) {
  std::vector<std::vector<int>> M(G.num_vertices(), std::vector<int>(G.num_edges(), 0));
  for (int e = 0; e < G.num_edges(); ++e) {
    int v1 = G.vertex_of(2 * e), v2 = G.vertex_of(2 * e + 1);
    if (v1 != v2) {
      M[v1][e] ^= 1;
      M[v2][e] ^= 1;
    }
  }
  return M;
}

int parity_rank(const RibbonGraph& G) {
  return static_cast<int>(parity_rref(G).rows.size());
}

Int multicurve_lattice_covolume(const RibbonGraph& G) {
  Int c = 1;
  c <<= parity_rank(G);
  return c;
}

std::vector<std::vector<Int>> multicurve_lattice_basis(const RibbonGraph& G) {
  const int E = G.num_edges();
  const ParityRref R = parity_rref(G);
  std::vector<std::vector<Int>> cols(E, std::vector<Int>(E, 0));
  for (int e = 0; e < E; ++e) {
    if (R.row_of_pivot_col[e] >= 0) {
      cols[e][e] = 2;
    } else {
      cols[e][e] = 1;
      for (size_t r = 0; r < R.rows.size(); ++r)
        if (R.rows[r][e]) cols[e][R.pivot_col[r]] = 1;
    }
  }
  return cols;
}

bool in_multicurve_lattice(const RibbonGraph& G, const std::vector<long>& x) {
  for (const auto& cyc : G.vertex_cycles()) {
    long s = 0;
    for (int d : cyc) s += x[RibbonGraph::edge_of(d)];
    if (s % 2 != 0) return false;
  }
  return true;
}

std::optional<std::vector<Int>> multicurve_lattice_coords(const RibbonGraph& G,
                                                          const std::vector<long>& x) {
  const int E = G.num_edges();
  const ParityRref R = parity_rref(G);
  std::vector<Int> y(E, 0);
  for (int e = 0; e < E; ++e)
    if (R.row_of_pivot_col[e] < 0) y[e] = x[e];
  for (size_t r = 0; r < R.rows.size(); ++r) {
    int p = R.pivot_col[r];
    Int acc = x[p];
    for (int e = 0; e < E; ++e)
      if (R.row_of_pivot_col[e] < 0 && R.rows[r][e]) acc -= x[e];
    if (acc % 2 != 0) return std::nullopt;
    y[p] = acc / 2;
  }
  return y;
}

// --- det of a simplicial cone ---------------------------------------------------

Int det_simplex(const RibbonGraph& G, const std::vector<std::vector<long>>& rays) {
  if (rays.empty()) throw std::invalid_argument("det_simplex: no rays");
  const size_t k = rays.size();
  if (q_rank(to_qmat(rays)) != static_cast<int>(k))
    throw std::invalid_argument("det_simplex: dependent rays");
  std::vector<std::vector<Int>> Y;
  Y.reserve(k);
  for (const auto& r : rays) {
    auto coords = multicurve_lattice_coords(G, r);
    if (!coords)
      throw std::invalid_argument("det_simplex: ray is not in the multicurve lattice");
    Y.push_back(std::move(*coords));
  }
  Int idx = diagonal_index(std::move(Y));
  if (idx == 0) throw std::logic_error("det_simplex: rank lost during reduction");
  return idx;
}

// --- cone decomposition ----------------------------------------------------------

namespace {

// Placing triangulation of the cone spanned by `rays` (distinct, in
// lexicographic order, spanning a d-dimensional space).  Returns simplices as
// sorted index sets, sorted lexicographically.
std::vector<std::vector<int>> placing_triangulation(
    const std::vector<std::vector<long>>& rays, int d) {
  const int m = static_cast<int>(rays.size());
  const size_t E = rays[0].size();
  QMat qrays = to_qmat(rays);

  // Initial simplex: the lexicographically first spanning subset.
  std::vector<int> basis;
  {
    QMat acc;
    for (int i = 0; i < m && static_cast<int>(basis.size()) < d; ++i) {
      acc.push_back(qrays[i]);
      if (q_rank(acc) == static_cast<int>(acc.size()))
        basis.push_back(i);
      else
        acc.pop_back();
    }
    if (static_cast<int>(basis.size()) != d)
      throw std::logic_error("placing_triangulation: rays do not span");
  }

  // Coordinates of every ray in the span, written in the initial basis.
  // Pick d edge-coordinates where the basis has full rank.
  std::vector<int> pivot_rows;
  {
    QMat acc;
    for (size_t e = 0; e < E && static_cast<int>(pivot_rows.size()) < d; ++e) {
      QVec row(d);
      for (int j = 0; j < d; ++j) row[j] = qrays[basis[j]][e];
      acc.push_back(row);
      if (q_rank(acc) == static_cast<int>(acc.size()))
        pivot_rows.push_back(static_cast<int>(e));
      else
        acc.pop_back();
    }
  }
  QMat Msys(d, QVec(d));  // Msys[r][j] = basis ray j at pivot row r
  for (int r = 0; r < d; ++r)
    for (int j = 0; j < d; ++j) Msys[r][j] = qrays[basis[j]][pivot_rows[r]];
  std::vector<QVec> coord(m);
  for (int i = 0; i < m; ++i) {
    QVec rhs(d);
    for (int r = 0; r < d; ++r) rhs[r] = qrays[i][pivot_rows[r]];
    auto sol = q_solve_square(Msys, rhs);
    if (!sol) throw std::logic_error("placing_triangulation: basis is singular");
    // verify the ray really lies in the span
    for (size_t e = 0; e < E; ++e) {
      Rat acc(0);
      for (int j = 0; j < d; ++j) acc += (*sol)[j] * qrays[basis[j]][e];
      if (acc != qrays[i][e])
        throw std::logic_error("placing_triangulation: ray outside span");
    }
    coord[i] = std::move(*sol);
  }

  std::vector<std::vector<int>> simplices;
  {
    std::vector<int> t0 = basis;
    std::sort(t0.begin(), t0.end());
    simplices.push_back(t0);
  }
  std::vector<char> in_basis(m, 0);
  for (int b : basis) in_basis[b] = 1;

  auto covered = [&](const QVec& q) {
    for (const auto& s : simplices) {
      QMat A(d, QVec(d));
      for (int r = 0; r < d; ++r)
        for (int j = 0; j < d; ++j) A[r][j] = coord[s[j]][r];
      auto lam = q_solve_square(A, q);
      if (!lam) continue;
      bool nonneg = true;
      for (const Rat& l : *lam)
        if (l < 0) {
          nonneg = false;
          break;
        }
      if (nonneg) return true;
    }
    return false;
  };

  for (int q = 0; q < m; ++q) {
    if (in_basis[q]) continue;
    if (covered(coord[q])) continue;
    // census of boundary facets of the current union
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> facets;
    for (size_t si = 0; si < simplices.size(); ++si) {
      const auto& s = simplices[si];
      for (int drop = 0; drop < d; ++drop) {
        std::vector<int> f;
        f.reserve(d - 1);
        for (int j = 0; j < d; ++j)
          if (j != drop) f.push_back(s[j]);
        facets[f].push_back({static_cast<int>(si), s[drop]});
      }
    }
    std::vector<std::vector<int>> added;
    for (const auto& [f, owners] : facets) {
      if (owners.size() != 1) continue;
      if (d == 1) {
        // facet is the apex: visible iff q points the other way
        // (cannot happen: 1-dimensional admissible sets of distinct
        // non-negative rays are always covered by the first ray)
        continue;
      }
      QMat rows;
      rows.reserve(d - 1);
      for (int fi : f) rows.push_back(coord[fi]);
      QVec nrm = q_nullvec(rows);
      Rat side = q_dot(nrm, coord[owners[0].second]);
      if (side == 0) throw std::logic_error("placing_triangulation: degenerate facet");
      if (side < 0)
        for (Rat& v : nrm) v = -v;
      if (q_dot(nrm, coord[q]) < 0) {
        std::vector<int> ns = f;
        ns.push_back(q);
        std::sort(ns.begin(), ns.end());
        added.push_back(std::move(ns));
      }
    }
    if (added.empty())
      throw std::logic_error("placing_triangulation: uncovered ray extends nothing");
    for (auto& s : added) simplices.push_back(std::move(s));
  }
  std::sort(simplices.begin(), simplices.end());
  return simplices;
}

}  // namespace

ConeDecomposition cone_decomposition(const RibbonGraph& G, RayOrder order) {
  require_trivalent(G, "cone_decomposition");
  ConeDecomposition D;
  D.dim = 6 * G.genus() - 6 + 2 * G.boundaries();
  D.all_corners = corners(G);
  D.curves = essential_loops_and_dumbbells(G);
  D.duplicate_delta_merges = 0;
  if (D.dim == 0) return D;  // (0,3): the cone is the origin

  const int n = G.boundaries();
  std::vector<std::vector<int>> face_corner_ids(n);
  for (const Corner& c : D.all_corners) face_corner_ids[c.face_label - 1].push_back(c.id);

  std::map<std::vector<int>, DeltaCone> by_rayset;

  std::vector<int> pick(n, 0);
  for (;;) {
    std::vector<int> delta(n);
    for (int f = 0; f < n; ++f) delta[f] = face_corner_ids[f][pick[f]];

    std::vector<int> admissible;
    for (size_t i = 0; i < D.curves.size(); ++i) {
      bool ok = true;
      for (int f = 0; f < n; ++f)
        if (D.all_corners[delta[f]].slack(D.curves[i].vec) != 0) {
          ok = false;
          break;
        }
      if (ok) admissible.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(admissible.size()) >= D.dim) {
      std::vector<std::vector<long>> rays;
      rays.reserve(admissible.size());
      for (int i : admissible) rays.push_back(D.curves[i].vec);
      if (q_rank(to_qmat(rays)) == D.dim) {
        auto it = by_rayset.find(admissible);
        if (it != by_rayset.end()) {
          it->second.deltas.push_back(delta);
          ++D.duplicate_delta_merges;
        } else {
          DeltaCone cone;
          cone.deltas = {delta};
          cone.ray_indices = admissible;
          const int k = static_cast<int>(rays.size());
          std::vector<std::vector<long>> tri_rays = rays;
          if (order == RayOrder::Descending)
            std::reverse(tri_rays.begin(), tri_rays.end());
          std::vector<std::vector<int>> local = placing_triangulation(tri_rays, D.dim);
          for (auto& s : local) {
            if (order == RayOrder::Descending) {
              for (int& li : s) li = k - 1 - li;
              std::sort(s.begin(), s.end());
            }
          }
          std::sort(local.begin(), local.end());
          for (const auto& s : local) {
            SimplicialCone sc;
            sc.rays = s;
            std::vector<std::vector<long>> svecs;
            svecs.reserve(s.size());
            for (int li : s) svecs.push_back(rays[li]);
            sc.det = det_simplex(G, svecs);
            cone.simplices.push_back(std::move(sc));
          }
          by_rayset.emplace(admissible, std::move(cone));
        }
      }
    }

    int f = n - 1;
    while (f >= 0 && pick[f] + 1 == static_cast<int>(face_corner_ids[f].size())) {
      pick[f] = 0;
      --f;
    }
    if (f < 0) break;
    ++pick[f];
  }

  if (by_rayset.empty()) throw std::runtime_error("no full-dimensional cone found");
  D.cones.reserve(by_rayset.size());
  for (auto& [key, cone] : by_rayset) D.cones.push_back(std::move(cone));
  return D;
}

// --- membership -------------------------------------------------------------------

namespace {

template <typename T>
bool slack_cone_impl(const RibbonGraph& G, const std::vector<T>& x) {
  for (const auto& v : x)
    if (v < 0) return false;
  for (const Corner& c : corners(G))
    if (c.slack(x) < 0) return false;
  return true;
}

template <typename T>
bool multicurve_cone_impl(const RibbonGraph& G, const std::vector<T>& x) {
  for (const auto& v : x)
    if (v < 0) return false;
  std::vector<char> face_ok(G.boundaries(), 0);
  for (const Corner& c : corners(G)) {
    T s = c.slack(x);
    if (s < 0) return false;
    if (s == 0) face_ok[c.face_label - 1] = 1;
  }
  for (char ok : face_ok)
    if (!ok) return false;
  return true;
}

}  // namespace

bool in_slack_cone(const RibbonGraph& G, const std::vector<long>& x) {
  return slack_cone_impl(G, x);
}
bool in_slack_cone(const RibbonGraph& G, const std::vector<Rat>& x) {
  return slack_cone_impl(G, x);
}
bool in_multicurve_cone(const RibbonGraph& G, const std::vector<long>& x) {
  return multicurve_cone_impl(G, x);
}
bool in_multicurve_cone(const RibbonGraph& G, const std::vector<Rat>& x) {
  return multicurve_cone_impl(G, x);
}

// --- multicurve counting ------------------------------------------------------------

long long count_multicurves(const RibbonGraph& G, const std::vector<Rat>& lengths,
                            const Rat& r) {
  require_trivalent(G, "count_multicurves");
  if (r <= 0) throw std::invalid_argument("count_multicurves: r must be positive");
  const int E = G.num_edges();
  if (static_cast<int>(lengths.size()) != E)
    throw std::invalid_argument("count_multicurves: wrong number of edge lengths");
  for (const Rat& l : lengths)
    if (l <= 0) throw std::invalid_argument("count_multicurves: edge lengths must be positive");

  const std::vector<Corner> cs = corners(G);
  // corners ready for checking once edge e is assigned
  std::vector<std::vector<int>> corner_ready(E), vertex_ready(E);
  for (size_t i = 0; i < cs.size(); ++i) {
    int hi = std::max({cs[i].edge_a, cs[i].edge_b, cs[i].edge_opposite});
    corner_ready[hi].push_back(static_cast<int>(i));
  }
  for (int v = 0; v < G.num_vertices(); ++v) {
    int hi = 0;
    for (int d : G.vertex_cycles()[v]) hi = std::max(hi, RibbonGraph::edge_of(d));
    vertex_ready[hi].push_back(v);
  }

  std::vector<long> cap(E);
  for (int e = 0; e < E; ++e) {
    Rat q = r / lengths[e];
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    cap[e] = fl.get_si();
  }

  std::vector<long> x(E, 0);
  long long count = 0;

  std::function<void(int, Rat)> dfs = [&](int e, Rat used) {
    if (e == E) {
      std::vector<char> face_ok(G.boundaries(), 0);
      for (const Corner& c : cs)
        if (c.slack(x) == 0) face_ok[c.face_label - 1] = 1;
      for (char ok : face_ok)
        if (!ok) return;
      ++count;
      return;
    }
    for (long v = 0; v <= cap[e]; ++v) {
      Rat tot = used + Rat(v) * lengths[e];
      if (tot > r) break;
      x[e] = v;
      bool dead = false, monotone_dead = false;
      for (int ci : corner_ready[e])
        if (cs[ci].slack(x) < 0) {
          dead = true;
          if (cs[ci].edge_opposite == e) monotone_dead = true;
        }
      if (!dead)
        for (int vv : vertex_ready[e]) {
          long s = 0;
          for (int d : G.vertex_cycles()[vv]) s += x[RibbonGraph::edge_of(d)];
          if (s % 2 != 0) {
            dead = true;
            break;
          }
        }
      if (!dead) dfs(e + 1, tot);
      if (monotone_dead) break;  // slack with opposite edge e only decreases
      x[e] = 0;
    }
    x[e] = 0;
  };
  dfs(0, Rat(0));
  return count;
}

}  // namespace ribbonvol
