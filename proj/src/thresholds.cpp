#include "ribbonvol/thresholds.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "qlinalg.hpp"

namespace ribbonvol {

using detail::QMat;
using detail::QVec;
using detail::q_solve_square;

namespace {

void validate_product(const LinearFormProduct& P) {
  if (P.variables < 1) throw std::invalid_argument("product needs at least one variable");
  if (P.rows.empty()) throw std::invalid_argument("product needs at least one form");
  for (const auto& row : P.rows) {
    if (static_cast<int>(row.size()) != P.variables)
      throw std::invalid_argument("incidence row size mismatch");
    bool any = false;
    for (int a : row) {
      if (a != 0 && a != 1) throw std::invalid_argument("incidence entries must be 0 or 1");
      if (a) any = true;
    }
    if (!any) throw std::invalid_argument("every form needs a nonempty support");
  }
  if (!P.coefficients.empty()) {
    if (P.coefficients.size() != P.rows.size())
      throw std::invalid_argument("coefficient shape mismatch");
    for (size_t i = 0; i < P.rows.size(); ++i) {
      if (P.coefficients[i].size() != P.rows[i].size())
        throw std::invalid_argument("coefficient shape mismatch");
      for (size_t j = 0; j < P.rows[i].size(); ++j) {
        const Rat& c = P.coefficients[i][j];
        if (c < 0) throw std::invalid_argument("coefficients must be non-negative");
        if ((c > 0) != (P.rows[i][j] == 1))
          throw std::invalid_argument("coefficients must be positive exactly on the support");
      }
    }
  }
}

// shared maximisation: 1/shat = max over nonempty J of count(J)/#J, where
// count is supplied by the caller
Rat shat_from_counts(int e, const std::vector<uint32_t>& supports,
                     bool form_inside_subset) {
  Rat best(0);
  for (uint32_t J = 1; J < (1u << e); ++J) {
    int cnt = 0;
    for (uint32_t s : supports) {
      bool hit = form_inside_subset ? (s & ~J) == 0   // supp(P_i) inside J
                                    : (J & ~s) == 0;  // J inside supp(P_i)
      if (hit) ++cnt;
    }
    if (cnt == 0) continue;
    Rat ratio = rat(cnt, static_cast<long>(__builtin_popcount(J)));
    if (ratio > best) best = ratio;
  }
  if (best == 0) throw std::logic_error("no subset supports any form");
  return Rat(1) / best;
}

std::vector<uint32_t> support_masks(const LinearFormProduct& P) {
  std::vector<uint32_t> masks;
  for (const auto& row : P.rows) {
    uint32_t m = 0;
    for (int j = 0; j < P.variables; ++j)
      if (row[j]) m |= 1u << j;
    masks.push_back(m);
  }
  return masks;
}

}  // namespace

Rat shat_product(const LinearFormProduct& P) {
  validate_product(P);
  if (P.variables > 30) throw std::invalid_argument("too many variables");
  return shat_from_counts(P.variables, support_masks(P), true);
}

Rat shat_product_containment_reading(const LinearFormProduct& P) {
  validate_product(P);
  if (P.variables > 30) throw std::invalid_argument("too many variables");
  return shat_from_counts(P.variables, support_masks(P), false);
}

int dim_mf_bullet(int g, int n) {
  if (g < 0 || n < 1) throw std::invalid_argument("invalid surface type");
  if (g == 0 && n == 1) return 0;
  if (g == 0 && n == 2) return 1;
  return 6 * g - 6 + 3 * n;
}

int dim_mf_bullet(const std::vector<SurfaceComponent>& components) {
  int total = 0;
  for (const SurfaceComponent& c : components) total += dim_mf_bullet(c.genus, c.boundaries);
  return total;
}

SubgraphScore shat_subgraph(const RibbonGraph& G, const std::vector<int>& edge_subset) {
  if (edge_subset.empty()) throw std::invalid_argument("edge subset must be nonempty");
  SubgraphScore score;
  score.edge_count = static_cast<int>(edge_subset.size());
  for (const SurfaceComponent& c : restrict_graph(G, edge_subset)) {
    score.component_types.push_back({c.genus, c.boundaries});
    score.bivalent_counts.push_back(c.bivalent);
    score.dim += dim_mf_bullet(c.genus, c.boundaries);
  }
  score.finite = score.dim > 0;
  if (score.finite) score.value = rat(score.edge_count, score.dim);
  return score;
}

namespace {

void validate_threshold_perimeters(int n, const std::vector<Rat>& L) {
  if (static_cast<int>(L.size()) != n)
    throw std::invalid_argument("perimeter vector size mismatch");
  for (const Rat& l : L)
    if (l <= 0) throw std::invalid_argument("perimeters must be positive");
  if (!is_nonresonant(L)) throw std::invalid_argument("perimeters are resonant");
}

// vertex ids per dart, from the rotation orbits
std::vector<int> vertex_ids(const RibbonGraph& G) {
  std::vector<int> vid(G.darts(), -1);
  int v = 0;
  for (int d = 0; d < G.darts(); ++d) {
    if (vid[d] >= 0) continue;
    for (int x = d; vid[x] < 0; x = G.sigma_at(x)) vid[x] = v;
    ++v;
  }
  return vid;
}

// minimum subgraph score over nonempty subsets of `pool`, pruned to connected
// restrictions without univalent vertices (the minimum is always attained on
// one); also collects the minimising subsets when `witnesses` is given
struct PoolScan {
  std::optional<Rat> best;
  std::vector<std::pair<std::vector<int>, SubgraphScore>> minimisers;
};

PoolScan scan_pool(const RibbonGraph& G, const std::vector<int>& pool, bool collect) {
  PoolScan out;
  const int k = static_cast<int>(pool.size());
  if (k == 0 || k > 30) {
    if (k > 30) throw std::runtime_error("edge pool too large to scan");
    return out;
  }
  std::vector<int> vid = vertex_ids(G);
  std::vector<int> degree(G.num_vertices(), 0);
  for (uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> subset;
    for (int b = 0; b < k; ++b)
      if (mask & (1u << b)) subset.push_back(pool[b]);
    // cheap pruning: a univalent vertex disqualifies the subset
    bool univalent = false;
    for (int e : subset) {
      degree[vid[2 * e]] += 1;
      degree[vid[2 * e + 1]] += 1;
    }
    for (int e : subset)
      if (degree[vid[2 * e]] == 1 || degree[vid[2 * e + 1]] == 1) univalent = true;
    for (int e : subset) {
      degree[vid[2 * e]] = 0;
      degree[vid[2 * e + 1]] = 0;
    }
    if (univalent) continue;
    SubgraphScore s = shat_subgraph(G, subset);
    if (s.component_types.size() > 1) continue;  // a component alone scores lower
    if (!s.finite) continue;
    if (!out.best || s.value < *out.best) {
      out.best = s.value;
      out.minimisers.clear();
    }
    if (collect && s.value == *out.best) out.minimisers.push_back({subset, s});
  }
  return out;
}

}  // namespace

std::optional<Rat> local_threshold(const RibbonGraph& G, const std::vector<Rat>& L,
                                   const CellVertex& v) {
  if (!G.is_trivalent()) throw std::invalid_argument("graph must be trivalent");
  validate_threshold_perimeters(G.num_faces(), L);
  if (v.lambda.size() != static_cast<size_t>(G.num_edges()))
    throw std::invalid_argument("vertex does not match the graph");
  return scan_pool(G, v.vanishing, false).best;
}

namespace {

// does some assignment of the perimeters to the faces make the support
// system solution strictly positive?
bool realizable(const RibbonGraph& G, const std::vector<int>& S, const std::vector<Rat>& L) {
  const int n = G.num_faces();
  QMat M(n, QVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = Rat(G.face_edge_multiplicity(i + 1, S[j]));
  // columns of the inverse, so each assignment is a cheap matrix-vector pass
  QMat inv_cols;
  for (int i = 0; i < n; ++i) {
    QVec e(n, Rat(0));
    e[i] = 1;
    auto col = q_solve_square(M, e);
    if (!col) return false;  // singular support system never yields a vertex
    inv_cols.push_back(std::move(*col));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool positive = true;
    for (int j = 0; j < n && positive; ++j) {
      Rat x(0);
      for (int i = 0; i < n; ++i) x += inv_cols[i][j] * L[perm[i]];
      if (x <= 0) positive = false;
    }
    if (positive) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

GlobalThreshold global_search(int g, int n, const std::vector<Rat>* L) {
  if (L) validate_threshold_perimeters(n, *L);
  struct Pair {
    int graph_index;
    std::vector<int> support;
    Rat best;
    std::vector<std::pair<std::vector<int>, SubgraphScore>> minimisers;
  };
  std::vector<RibbonGraph> classes = enumerate_trivalent_unlabelled(g, n);
  std::vector<Pair> pairs;
  for (size_t gi = 0; gi < classes.size(); ++gi) {
    const RibbonGraph& G = classes[gi];
    const int E = G.num_edges();
    for (const std::vector<int>& S : support_sets(G)) {
      std::vector<int> pool;
      std::vector<char> in_support(E, 0);
      for (int e : S) in_support[e] = 1;
      for (int e = 0; e < E; ++e)
        if (!in_support[e]) pool.push_back(e);
      PoolScan scan = scan_pool(G, pool, true);
      if (scan.best)
        pairs.push_back({static_cast<int>(gi), S, *scan.best, std::move(scan.minimisers)});
    }
  }
  GlobalThreshold result;
  if (pairs.empty()) return result;  // every pool is a forest: +infinity
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.best < b.best; });
  for (const Pair& p : pairs) {
    if (result.value && p.best > *result.value) break;  // sorted: nothing better left
    if (L && !realizable(classes[p.graph_index], p.support, *L)) continue;
    result.value = p.best;
    for (const auto& [subset, score] : p.minimisers)
      result.witnesses.push_back({classes[p.graph_index], p.support, subset, score});
  }
  return result;
}

}  // namespace

GlobalThreshold global_threshold(int g, int n, const std::vector<Rat>& L) {
  return global_search(g, n, &L);
}

GlobalThreshold global_threshold(int g, int n) { return global_search(g, n, nullptr); }

std::optional<Rat> closed_form_threshold(int g, int n) {
  if (g < 0 || n < 1 || 2 * g - 2 + n <= 0)
    throw std::invalid_argument("type (g,n) must satisfy g >= 0, n >= 1, 2g-2+n > 0");
  if (g == 0) {
    if (n == 3) return std::nullopt;
    if (n <= 5) return Rat(2);
    return rat(4, 3) + rat(2, 3) / Rat(n / 2 - 2);
  }
  if (g == 1) return n == 1 ? Rat(2) : rat(4, 3);
  if (n == 1) return Rat(1) + rat(1, 3 * (2 * g - 3));
  return Rat(1) + rat(1, 3 * (2 * g - 1));
}

}  // namespace ribbonvol
