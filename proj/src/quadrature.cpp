#include "ribbonvol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ribbonvol/bvol.hpp"
#include "ribbonvol/thresholds.hpp"

namespace ribbonvol {

namespace {

constexpr std::uint64_t kChunk = 4096;
constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kHalfPi = 1.570796326794896619231321691639751;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Substream key for one chunk of one stratum: depends only on the arguments,
// never on how strata are scheduled, so estimates are reproducible.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stratum, std::uint64_t chunk) {
  return mix64(mix64(mix64(seed) ^ stratum) ^ chunk);
}

// Uniform in (0, 1]: never 0, so logarithms stay finite.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1p-53;
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x) {
    ++n;
    const double dx = x - mean;
    mean += dx / static_cast<double>(n);
    m2 += dx * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double mean_error() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

// ----------------------------------------------------------------------------
// Exact linear algebra on chart coordinates.

Rat rat_det(std::vector<std::vector<Rat>> m) {
  const int n = static_cast<int>(m.size());
  Rat det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

// Dimension of the affine hull of the given points.
int affine_dim(const std::vector<std::vector<Rat>>& pts, const std::vector<int>& idx) {
  if (idx.size() <= 1) return 0;
  const int d = static_cast<int>(pts[idx[0]].size());
  std::vector<std::vector<Rat>> rows;
  rows.reserve(idx.size() - 1);
  for (std::size_t i = 1; i < idx.size(); ++i) {
    std::vector<Rat> r(d);
    for (int j = 0; j < d; ++j) r[j] = pts[idx[i]][j] - pts[idx[0]][j];
    rows.push_back(std::move(r));
  }
  int rank = 0;
  for (int col = 0; col < d && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      if (rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[rank][col];
      for (int c = col; c < d; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

// Pulling triangulation of a face (given as a sorted vertex-index list of
// affine dimension k): cone the lexicographically first vertex over the
// recursively triangulated facets that do not contain it.  Facets are cut out
// by the edge-nonnegativity constraints; `zero_sets` lists, per edge, the
// sorted vertex indices where that edge length vanishes.
void pull_triangulate(const std::vector<std::vector<Rat>>& pts,
                      const std::vector<std::vector<int>>& zero_sets,
                      const std::vector<int>& face, int k,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(face.size()) == k + 1) {
    out.push_back(face);
    return;
  }
  const int anchor = face.front();
  std::set<std::vector<int>> seen;
  for (const auto& zs : zero_sets) {
    std::vector<int> sub;
    std::set_intersection(face.begin(), face.end(), zs.begin(), zs.end(),
                          std::back_inserter(sub));
    if (sub.empty() || sub.size() == face.size()) continue;
    if (std::binary_search(sub.begin(), sub.end(), anchor)) continue;
    if (static_cast<int>(sub.size()) < k) continue;  // cannot span a facet
    if (!seen.insert(sub).second) continue;          // same facet, other edge
    if (affine_dim(pts, sub) != k - 1) continue;     // lower-dimensional face
    const std::size_t base = out.size();
    pull_triangulate(pts, zero_sets, sub, k - 1, out);
    for (std::size_t i = base; i < out.size(); ++i)
      out[i].insert(out[i].begin(), anchor);
  }
}

Rat factorial(int k) {
  Int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rat(f);
}

// ----------------------------------------------------------------------------
// Double-precision evaluation of the per-cell volume function.

struct DoubleForm {
  struct Term {
    double coef = 0.0;
    std::vector<std::vector<double>> rays;
  };
  std::vector<Term> terms;

  double eval(const std::vector<double>& len) const {
    double acc = 0.0;
    for (const Term& t : terms) {
      double den = 1.0;
      for (const auto& ray : t.rays) {
        double dot = 0.0;
        for (std::size_t e = 0; e < ray.size(); ++e) dot += ray[e] * len[e];
        den *= dot;
      }
      acc += t.coef / den;
    }
    return acc;
  }
};

DoubleForm compile_form(const RibbonGraph& G) {
  const BvolRationalForm form = bvol_form(G);
  DoubleForm out;
  out.terms.reserve(form.terms.size());
  for (const BvolTerm& t : form.terms) {
    DoubleForm::Term ct;
    ct.coef = Rat(Rat(1) / (Rat(form.dim_factorial) * Rat(t.det))).get_d();
    ct.rays.reserve(t.rays.size());
    for (const auto& ray : t.rays)
      ct.rays.emplace_back(ray.begin(), ray.end());
    out.terms.push_back(std::move(ct));
  }
  return out;
}

// ----------------------------------------------------------------------------
// Sample allocation: two per stratum up front (so every variance is defined),
// remainder by largest-remainder proportional to the stratum weights.

std::vector<std::uint64_t> allocate_samples(const std::vector<double>& w,
                                            std::uint64_t total) {
  const std::size_t n = w.size();
  std::vector<std::uint64_t> out(n, 2);
  std::uint64_t rest = total - 2 * n;
  double sumw = 0.0;
  for (double x : w) sumw += x;
  if (!(sumw > 0.0)) {
    out[0] += rest;
    return out;
  }
  std::vector<std::pair<double, std::size_t>> frac;
  frac.reserve(n);
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double ideal =
        static_cast<long double>(rest) * static_cast<long double>(w[i] / sumw);
    std::uint64_t base = static_cast<std::uint64_t>(ideal);
    if (base > rest) base = rest;
    out[i] += base;
    used += base;
    frac.emplace_back(static_cast<double>(ideal - static_cast<long double>(base)), i);
  }
  while (used > rest) {  // defensive: floating-point overshoot
    auto it = std::max_element(out.begin(), out.end());
    --*it;
    --used;
  }
  std::uint64_t leftover = rest - used;
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; k < frac.size() && leftover > 0; ++k, --leftover)
    out[frac[k].second] += 1;
  // any remainder beyond one round (extreme weight skew) goes to the heaviest
  if (leftover > 0) out[frac.empty() ? 0 : frac[0].second] += leftover;
  return out;
}

// ----------------------------------------------------------------------------
// Per-cell sampling state.

struct CellData {
  detail::CellGeometry geo;
  DoubleForm form;
  std::vector<std::vector<double>> lam;  // vertex metrics as doubles
  long aut = 1;
  double weight = 0.0;                    // measure / aut
  std::vector<double> simplex_weight;     // measure_of_simplex / aut
  std::vector<double> cum_volume;         // cumulative chart volumes (doubles)
  double total_volume = 0.0;
};

// Uniform point of the simplex with the given vertices: normalised
// exponential spacings, then the matching convex combination of vertex
// metrics (perimeter constraints are affine, so the combination stays in the
// cell and its chart coordinates are the same combination of vertex charts).
void sample_point(const CellData& cd, const std::vector<int>& simplex,
                  std::mt19937_64& rng, std::vector<double>& wts,
                  std::vector<double>& len) {
  const std::size_t k = simplex.size();
  wts.resize(k);
  double esum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    wts[i] = -std::log(canonical(rng));
    esum += wts[i];
  }
  if (!(esum > 0.0)) {
    std::fill(wts.begin(), wts.end(), 0.0);
    wts[0] = 1.0;
    esum = 1.0;
  }
  const std::size_t E = cd.lam.empty() ? 0 : cd.lam[0].size();
  len.assign(E, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double w = wts[i] / esum;
    const std::vector<double>& v = cd.lam[simplex[i]];
    for (std::size_t e = 0; e < E; ++e) len[e] += w * v[e];
  }
}

double sample_value(const CellData& cd, const std::vector<int>& simplex,
                    std::mt19937_64& rng, double power, std::vector<double>& wts,
                    std::vector<double>& len) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    sample_point(cd, simplex, rng, wts, len);
    const double f = cd.form.eval(len);
    const double v = std::pow(f, power);
    if (std::isfinite(v)) return v;
    // measure-zero boundary hit (a pole ray vanished): redraw deterministically
  }
  throw std::runtime_error("mc_integral: integrand failed to evaluate");
}

void validate_perimeters(const char* who, int boundaries, const std::vector<Rat>& L) {
  if (static_cast<int>(L.size()) != boundaries)
    throw std::invalid_argument(std::string(who) + ": expected " +
                                std::to_string(boundaries) + " perimeters");
  for (const Rat& l : L)
    if (l <= 0)
      throw std::invalid_argument(std::string(who) + ": perimeters must be positive");
  if (!is_nonresonant(L))
    throw std::invalid_argument(std::string(who) + ": perimeters are resonant");
}

// ----------------------------------------------------------------------------
// Double-exponential (tanh-sinh) quadrature over (0,1).  `term_fn(t)` returns
// the fully weighted trapezoid term at abscissa parameter t; the level loop halves
// the step until two successive levels agree to rel_tol.

struct TsNode {
  double x = 0.0;    // abscissa in (0,1)
  double omx = 0.0;  // 1 - x, computed without cancellation
  double w = 0.0;    // weight, already includes the (0,1) mapping
};

TsNode ts_node(double t) {
  const double u = kHalfPi * std::sinh(t);
  const double em = std::exp(-2.0 * u);
  TsNode nd;
  nd.x = 1.0 / (1.0 + em);
  nd.omx = em / (1.0 + em);
  nd.w = kPi * std::cosh(t) * nd.x * nd.omx;
  return nd;
}

template <class TermFn>
double tanh_sinh_sum(TermFn&& term_fn, double rel_tol, int max_level) {
  const double tmax = 6.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double result = 0.0;
  for (int level = 0; level <= max_level; ++level) {
    const double h = std::ldexp(1.0, -level);
    double sum = term_fn(0.0);
    for (long k = 1; h * static_cast<double>(k) <= tmax; ++k) {
      const double t = h * static_cast<double>(k);
      const double term = term_fn(t) + term_fn(-t);
      sum += term;
      if (t > 3.0 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    result = h * sum;
    if (level >= 2 && std::abs(result - prev) <= rel_tol * std::abs(result)) return result;
    prev = result;
  }
  return result;
}

}  // namespace

// ----------------------------------------------------------------------------
// Cell geometry.

namespace detail {

CellGeometry cell_geometry(const RibbonGraph& G, const std::vector<Rat>& L,
                           const std::vector<int>& order) {
  CellGeometry geo;
  std::vector<CellVertex> raw = cell_vertices(G, L);
  geo.dim = G.num_edges() - G.num_faces();
  geo.density = 0;
  geo.total = 0;
  geo.measure = 0;
  if (raw.empty()) return geo;

  const int m = static_cast<int>(raw.size());
  std::vector<int> ord = order;
  if (ord.empty()) {
    ord.resize(m);
    std::iota(ord.begin(), ord.end(), 0);
  } else {
    std::vector<int> check = ord;
    std::sort(check.begin(), check.end());
    bool ok = static_cast<int>(check.size()) == m;
    for (int i = 0; ok && i < m; ++i) ok = check[i] == i;
    if (!ok)
      throw std::invalid_argument(
          "cell_geometry: order must be a permutation of the vertex indices");
  }
  geo.vertices.reserve(m);
  for (int i = 0; i < m; ++i) geo.vertices.push_back(raw[ord[i]]);

  const CellVertex& chart_vertex = geo.vertices.front();
  geo.chart = chart_vertex.vanishing;
  geo.density = chart_vertex.density;
  const int d = geo.dim;

  std::vector<std::vector<Rat>> pts(m, std::vector<Rat>(d));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) pts[i][j] = geo.vertices[i].lambda[geo.chart[j]];

  std::vector<std::vector<int>> zero_sets;
  for (int e = 0; e < G.num_edges(); ++e) {
    std::vector<int> zs;
    for (int i = 0; i < m; ++i)
      if (geo.vertices[i].lambda[e] == 0) zs.push_back(i);
    if (!zs.empty()) zero_sets.push_back(std::move(zs));
  }

  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  if (affine_dim(pts, all) != d) return geo;  // degenerate: measure zero

  pull_triangulate(pts, zero_sets, all, d, geo.simplices);

  const Rat dfac = factorial(d);
  geo.volumes.reserve(geo.simplices.size());
  for (const auto& s : geo.simplices) {
    std::vector<std::vector<Rat>> mdiff(d, std::vector<Rat>(d));
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) mdiff[r][c] = pts[s[r + 1]][c] - pts[s[0]][c];
    Rat vol = rat_det(std::move(mdiff)) / dfac;
    if (vol < 0) vol = -vol;
    geo.volumes.push_back(vol);
    geo.total += geo.volumes.back();
  }
  geo.measure = geo.density * geo.total;
  return geo;
}

CellGeometry cell_geometry(const RibbonGraph& G, const std::vector<Rat>& L) {
  return cell_geometry(G, L, {});
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Monte-Carlo integral.

IntegralEstimate mc_integral(int genus, int boundaries, const std::vector<Rat>& L,
                             double power, std::uint64_t samples, std::uint64_t seed,
                             SamplingMode mode) {
  if (samples == 0) throw std::invalid_argument("mc_integral: zero samples");
  if (!std::isfinite(power))
    throw std::invalid_argument("mc_integral: power must be finite");
  validate_perimeters("mc_integral", boundaries, L);

  const std::vector<RibbonGraph> graphs = enumerate_trivalent(genus, boundaries);

  IntegralEstimate est;
  est.seed = seed;
  // Compare against the threshold's double image: a caller writing the
  // threshold as a double literal (e.g. 4.0/3.0 for 4/3) lands within one ulp
  // below the exact rational, and the rational-to-double conversion truncates
  // toward zero, so this still flags exactly-at-threshold requests.
  if (const auto thr = closed_form_threshold(genus, boundaries))
    est.divergence_warning = power >= thr->get_d();

  std::vector<CellData> cells;
  cells.reserve(graphs.size());
  for (const RibbonGraph& G : graphs) {
    CellData cd;
    cd.geo = detail::cell_geometry(G, L);
    cd.aut = G.automorphism_group(true).order;
    if (cd.geo.measure > 0) {
      cd.form = compile_form(G);
      cd.lam.reserve(cd.geo.vertices.size());
      for (const CellVertex& v : cd.geo.vertices) {
        std::vector<double> lv(v.lambda.size());
        for (std::size_t e = 0; e < v.lambda.size(); ++e) lv[e] = v.lambda[e].get_d();
        cd.lam.push_back(std::move(lv));
      }
      cd.weight = Rat(cd.geo.measure / cd.aut).get_d();
      double cum = 0.0;
      for (const Rat& vol : cd.geo.volumes) {
        cd.simplex_weight.push_back(Rat(cd.geo.density * vol / cd.aut).get_d());
        cum += vol.get_d();
        cd.cum_volume.push_back(cum);
      }
      cd.total_volume = cum;
    }
    cells.push_back(std::move(cd));
  }

  // Strata: (cell, simplex) pairs when stratified, whole cells when plain.
  struct StratumRef {
    std::size_t cell;
    int simplex;  // -1: sample the whole cell through the volume CDF
    double weight;
  };
  std::vector<StratumRef> strata;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    if (!(cells[ci].weight > 0.0)) continue;
    if (mode == SamplingMode::Stratified) {
      for (std::size_t si = 0; si < cells[ci].simplex_weight.size(); ++si)
        if (cells[ci].simplex_weight[si] > 0.0)
          strata.push_back({ci, static_cast<int>(si), cells[ci].simplex_weight[si]});
    } else {
      strata.push_back({ci, -1, cells[ci].weight});
    }
  }

  est.cells.reserve(cells.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    CellEstimate ce{graphs[ci], cells[ci].aut, cells[ci].geo.measure, 0.0, 0.0, 0};
    est.cells.push_back(std::move(ce));
  }

  if (strata.empty()) return est;  // every cell is empty

  if (samples < 2 * strata.size())
    throw std::invalid_argument("mc_integral: need at least two samples per stratum (" +
                                std::to_string(2 * strata.size()) + " total)");

  std::vector<double> weights;
  weights.reserve(strata.size());
  for (const StratumRef& s : strata) weights.push_back(s.weight);
  const std::vector<std::uint64_t> alloc = allocate_samples(weights, samples);

  std::vector<double> wts, len;
  std::vector<double> cell_var(cells.size(), 0.0);
  for (std::size_t gi = 0; gi < strata.size(); ++gi) {
    const StratumRef& st = strata[gi];
    const CellData& cd = cells[st.cell];
    Welford acc;
    std::uint64_t remaining = alloc[gi];
    std::uint64_t chunk = 0;
    while (remaining > 0) {
      const std::uint64_t take = std::min<std::uint64_t>(kChunk, remaining);
      std::mt19937_64 rng(stream_seed(seed, gi, chunk));
      for (std::uint64_t i = 0; i < take; ++i) {
        if (st.simplex >= 0) {
          acc.add(sample_value(cd, cd.geo.simplices[st.simplex], rng, power, wts, len));
        } else {
          const double u = canonical(rng) * cd.total_volume;
          const std::size_t pick =
              std::lower_bound(cd.cum_volume.begin(), cd.cum_volume.end(), u) -
              cd.cum_volume.begin();
          const std::size_t sx = std::min(pick, cd.geo.simplices.size() - 1);
          acc.add(sample_value(cd, cd.geo.simplices[sx], rng, power, wts, len));
        }
      }
      remaining -= take;
      ++chunk;
    }
    CellEstimate& ce = est.cells[st.cell];
    ce.value += st.weight * acc.mean;
    cell_var[st.cell] +=
        st.weight * st.weight * acc.variance() / static_cast<double>(acc.n);
    ce.samples += acc.n;
  }

  double total_var = 0.0;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    est.cells[ci].std_error = std::sqrt(cell_var[ci]);
    est.value += est.cells[ci].value;
    est.samples += est.cells[ci].samples;
    total_var += cell_var[ci];
  }
  est.std_error = std::sqrt(total_var);
  return est;
}

// ----------------------------------------------------------------------------
// One-holed-torus boundary integral.

double b11_special(double s) {
  if (!(s > 0.0 && s < 2.0))
    throw std::invalid_argument("b11_special: power must satisfy 0 < s < 2");

  // B(s) = Integral over {a,b >= 0, a+b <= 1} of ((a+b)(1-a)(1-b))^(-s).
  // The integrand blows up only at the three simplex corners, and the mass
  // near each scale-like corner hides below any fixed quadrature resolution
  // as s -> 2.  Split the simplex into the three corner pieces
  //   {a+b <= 1/2},  {a >= 1/2},  {b >= 1/2}
  // plus the middle {a,b <= 1/2, a+b >= 1/2}, and remove the corner power
  // analytically so every remaining integrand is smooth and bounded.
  //
  // Corner at the origin, fibred over c = a+b with (a,b) = c(1-u, u):
  //   I0 = Integral_0^{1/2} c^(1-s) K(c) dc,
  //   K(c) = Integral_0^1 ((1 - c u)(1 - c + c u))^(-s) du.
  // The corner at (1,0) becomes the same integral under
  // (c, u) = (1-a, b/(1-a)) (Jacobian c), and (0,1) by the a<->b swap,
  // so the corners contribute 3*I0 in total.
  const auto corner_kernel = [s](double c) {
    return tanh_sinh_sum(
        [s, c](double t) {
          const TsNode nd = ts_node(t);
          const double f1 = 1.0 - c * nd.x;    // 1 - c u
          const double f2 = 1.0 - c * nd.omx;  // 1 - c + c u
          return nd.w * std::pow(f1 * f2, -s);
        },
        1e-13, 9);
  };

  // The substitution c = (1/2) tau^(1/(2-s)) absorbs the power exactly:
  //   I0 = (1/2)^(2-s) / (2-s) * Integral_0^1 K((1/2) tau^(1/(2-s))) dtau.
  // K is continuous with K(0) = 1, so the underflow of tau^(1/(2-s)) for
  // tiny tau is harmless, and the boundary layer near tau = 1 (width ~ 2-s)
  // sits where the node clustering is densest.
  const double beta = 1.0 / (2.0 - s);
  const double corner =
      std::pow(0.5, 2.0 - s) * beta *
      tanh_sinh_sum(
          [&corner_kernel, beta](double t) {
            const TsNode nd = ts_node(t);
            // log(tau) from the 1-tau side once tau > 1/2, to keep
            // tau^beta accurate for the huge exponents near s = 2.
            const double ltau =
                (nd.x > 0.5) ? std::log1p(-nd.omx) : std::log(nd.x);
            const double c = 0.5 * std::exp(beta * ltau);
            return nd.w * corner_kernel(c);
          },
          1e-12, 9);

  // Middle region {a <= 1/2, b <= 1/2, a+b >= 1/2}: every factor lies in
  // [1/2, 1], so the integrand is bounded by 8^s and analytic.
  const auto middle_inner = [s](double a) {
    const double lo = 0.5 - a;  // b ranges over [1/2 - a, 1/2]
    return tanh_sinh_sum(
        [s, a, lo](double t) {
          const TsNode nd = ts_node(t);
          const double b = lo + a * nd.x;
          return nd.w * a * std::pow((a + b) * (1.0 - a) * (1.0 - b), -s);
        },
        1e-12, 9);
  };
  const double middle = tanh_sinh_sum(
      [&middle_inner](double t) {
        const TsNode nd = ts_node(t);
        return nd.w * 0.5 * middle_inner(0.5 * nd.x);
      },
      1e-11, 9);

  return 3.0 * corner + middle;
}

// ----------------------------------------------------------------------------
// Divergence probe.

DivergenceProbe divergence_probe(int genus, int boundaries, const std::vector<Rat>& L,
                                 double power, const std::vector<double>& deltas,
                                 std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("divergence_probe: zero samples");
  if (!std::isfinite(power))
    throw std::invalid_argument("divergence_probe: power must be finite");
  for (double d : deltas)
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::invalid_argument("divergence_probe: deltas must be positive");
  validate_perimeters("divergence_probe", boundaries, L);

  const std::vector<RibbonGraph> graphs = enumerate_trivalent(genus, boundaries);
  std::vector<std::vector<CellVertex>> verts(graphs.size());
  bool have = false;
  Rat best;
  std::size_t bg = 0;
  std::size_t bv = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    verts[gi] = cell_vertices(graphs[gi], L);
    for (std::size_t vi = 0; vi < verts[gi].size(); ++vi) {
      const auto lt = local_threshold(graphs[gi], L, verts[gi][vi]);
      if (lt && (!have || *lt < best)) {
        have = true;
        best = *lt;
        bg = gi;
        bv = vi;
      }
    }
  }
  if (!have) {  // every vertex integrates all powers: probe the first cell
    bool found = false;
    for (std::size_t gi = 0; gi < graphs.size() && !found; ++gi)
      if (!verts[gi].empty()) {
        bg = gi;
        bv = 0;
        found = true;
      }
    if (!found) {  // no cell has a vertex at all: nothing to probe
      return DivergenceProbe{power, graphs[0], CellVertex{}, std::nullopt, 0, seed, {}};
    }
  }

  const RibbonGraph& G = graphs[bg];
  const CellVertex& vx = verts[bg][bv];
  DivergenceProbe rep{power,
                      G,
                      vx,
                      have ? std::optional<Rat>(best) : std::nullopt,
                      samples,
                      seed,
                      {}};

  std::vector<double> ds = deltas;
  std::sort(ds.begin(), ds.end(), std::greater<double>());
  rep.rungs.reserve(ds.size());
  for (double d : ds) rep.rungs.push_back(ProbeRung{d, 0.0, 0.0});
  if (ds.empty()) return rep;

  const int E = G.num_edges();
  const int d = static_cast<int>(vx.vanishing.size());
  const long aut = G.automorphism_group(true).order;
  const double log_scale =
      std::log(Rat(vx.density / aut).get_d());  // density and orbifold weight

  // Affine chart at the worst vertex: lengths(x) = lambda + sum_j x_j * col_j,
  // where x_j are the vanishing-edge coordinates.
  std::vector<double> lam0(E);
  for (int e = 0; e < E; ++e) lam0[e] = vx.lambda[e].get_d();
  std::vector<std::vector<double>> cols(d, std::vector<double>(E));
  for (int j = 0; j < d; ++j) {
    std::vector<Rat> x(d, Rat(0));
    x[j] = 1;
    const std::vector<Rat> image = theta_map(G, vx, x);
    for (int e = 0; e < E; ++e) cols[j][e] = Rat(image[e] - vx.lambda[e]).get_d();
  }

  // Proposal box: log-uniform per vanishing coordinate between the smallest
  // delta and the coordinate's maximum over the cell's vertices.
  const double dmin = ds.back();
  std::vector<double> log_lo(d), log_range(d);
  double log_box = log_scale;
  for (int j = 0; j < d; ++j) {
    Rat mx = 0;
    for (const CellVertex& w : verts[bg])
      if (w.lambda[vx.vanishing[j]] > mx) mx = w.lambda[vx.vanishing[j]];
    const double xmax = mx.get_d();
    if (!(xmax > dmin)) return rep;  // the restriction empties the cell
    log_lo[j] = std::log(dmin);
    log_range[j] = std::log(xmax) - log_lo[j];
    log_box += std::log(log_range[j]);
  }

  const DoubleForm form = compile_form(G);
  std::vector<Welford> acc(ds.size());
  std::vector<double> x(d), len(E);
  std::uint64_t remaining = samples;
  std::uint64_t chunk = 0;
  while (remaining > 0) {
    const std::uint64_t take = std::min<std::uint64_t>(kChunk, remaining);
    std::mt19937_64 rng(stream_seed(seed, 0, chunk));
    for (std::uint64_t i = 0; i < take; ++i) {
      double log_weight = log_box;
      double xmin = std::numeric_limits<double>::infinity();
      for (int j = 0; j < d; ++j) {
        const double lx = log_lo[j] + log_range[j] * canonical(rng);
        x[j] = std::exp(lx);
        log_weight += lx;
        xmin = std::min(xmin, x[j]);
      }
      len = lam0;
      for (int j = 0; j < d; ++j)
        for (int e = 0; e < E; ++e) len[e] += x[j] * cols[j][e];
      bool inside = true;
      for (int e = 0; e < E && inside; ++e) inside = len[e] > 0.0;
      double val = 0.0;
      if (inside) {
        const double f = form.eval(len);
        val = std::exp(power * std::log(f) + log_weight);
        if (!std::isfinite(val)) val = 0.0;  // measure-zero boundary artefact
      }
      for (std::size_t r = 0; r < ds.size(); ++r)
        acc[r].add(xmin > ds[r] ? val : 0.0);
    }
    remaining -= take;
    ++chunk;
  }

  for (std::size_t r = 0; r < ds.size(); ++r) {
    rep.rungs[r].value = acc[r].mean;
    rep.rungs[r].std_error = acc[r].mean_error();
  }
  return rep;
}

}  // namespace ribbonvol
