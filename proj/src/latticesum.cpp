#include "ribbonvol/latticesum.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ribbonvol/bvol.hpp"
#include "ribbonvol/quadrature.hpp"

namespace ribbonvol {

namespace {

// Deterministic pairwise reduction: terms are merged in a binary-counter
// pattern, so the association order depends only on the number of terms and
// not on how the work might be batched.
class TreeSum {
 public:
  void add(Rat term) {
    levels_.push_back(std::move(term));
    for (std::size_t m = ++count_; (m & 1) == 0; m >>= 1) {
      levels_[levels_.size() - 2] += levels_.back();
      levels_.pop_back();
    }
  }
  Rat total() const {
    Rat s(0);
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) s += *it;
    return s;
  }

 private:
  std::vector<Rat> levels_;
  std::size_t count_ = 0;
};

// Compensated binary128 accumulator; `abs_sum` feeds the error bound.
struct KahanQ {
  __float128 sum = 0;
  __float128 comp = 0;
  __float128 abs_sum = 0;
  void add(__float128 x) {
    abs_sum += fabsq(x);
    const __float128 y = x - comp;
    const __float128 t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Rational to binary128 through a double-double split (~106 accurate bits).
__float128 to_f128(const Rat& q) {
  const double hi = q.get_d();
  const double lo = Rat(q - hi).get_d();
  return static_cast<__float128>(hi) + static_cast<__float128>(lo);
}

// Depth-first walk over positive integer edge lengths in lexicographic
// order.  `resid[i]` is what remains of perimeter i; `suff[i][e]` is the
// total multiplicity of face i over edges e, e+1, ..., i.e. the cheapest
// possible completion (all remaining lengths equal to one).
template <class F>
void walk_metrics(int e, int E, int nfaces,
                  const std::vector<std::vector<long>>& mult,
                  const std::vector<std::vector<long>>& suff,
                  std::vector<long>& resid, std::vector<long>& lens, F& emit) {
  for (int i = 0; i < nfaces; ++i) {
    if (resid[i] < suff[i][e]) return;             // cannot consume enough
    if (suff[i][e] == 0 && resid[i] != 0) return;  // cannot consume any more
  }
  if (e == E) {
    // every suffix is exhausted, so the checks above force resid == 0
    emit(const_cast<const std::vector<long>&>(lens));
    return;
  }
  // largest value that leaves every face enough slack for a unit completion
  long vmax = std::numeric_limits<long>::max();
  for (int i = 0; i < nfaces; ++i)
    if (mult[i][e] > 0)
      vmax = std::min(vmax, (resid[i] - suff[i][e + 1]) / mult[i][e]);
  long v = 0;
  while (v < vmax) {
    ++v;
    for (int i = 0; i < nfaces; ++i) resid[i] -= mult[i][e];
    lens[e] = v;
    walk_metrics(e + 1, E, nfaces, mult, suff, resid, lens, emit);
  }
  for (int i = 0; i < nfaces; ++i) resid[i] += mult[i][e] * v;
  lens[e] = 0;
}

template <class F>
void for_each_integer_metric(const RibbonGraph& G, const std::vector<long>& L,
                             F&& emit) {
  const int E = G.num_edges();
  const int n = G.num_faces();
  std::vector<std::vector<long>> mult(n, std::vector<long>(E, 0));
  std::vector<std::vector<long>> suff(n, std::vector<long>(E + 1, 0));
  for (int i = 0; i < n; ++i)
    for (int e = E - 1; e >= 0; --e) {
      mult[i][e] = G.face_edge_multiplicity(i + 1, e);
      suff[i][e] = suff[i][e + 1] + mult[i][e];
    }
  std::vector<long> resid(L);
  std::vector<long> lens(E, 0);
  walk_metrics(0, E, n, mult, suff, resid, lens, emit);
}

}  // namespace

std::vector<std::vector<long>> enumerate_integer_metrics(
    const RibbonGraph& G, const std::vector<long>& L) {
  if (static_cast<int>(L.size()) != G.num_faces())
    throw std::invalid_argument(
        "enumerate_integer_metrics: expected " + std::to_string(G.num_faces()) +
        " perimeters, got " + std::to_string(L.size()));
  std::vector<std::vector<long>> out;
  for_each_integer_metric(
      G, L, [&out](const std::vector<long>& lens) { out.push_back(lens); });
  return out;
}

LatticeSumResult lattice_sum(int genus, int boundaries,
                             const std::vector<Rat>& L, double power) {
  if (!std::isfinite(power))
    throw std::invalid_argument("lattice_sum: power must be finite");
  const std::vector<RibbonGraph> graphs = enumerate_reduced(genus, boundaries);
  if (static_cast<int>(L.size()) != boundaries)
    throw std::invalid_argument("lattice_sum: expected " +
                                std::to_string(boundaries) + " perimeters, got " +
                                std::to_string(L.size()));

  LatticeSumResult res;
  const bool exact_mode =
      power == std::rint(power) && std::abs(power) < 1e15;
  res.is_exact = exact_mode;
  const long spow = exact_mode ? static_cast<long>(std::rint(power)) : 0;

  // Perimeters off the integer lattice admit no integer metric at all.
  std::vector<long> Li(L.size(), 0);
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (L[i].get_den() != 1 || !L[i].get_num().fits_slong_p()) {
      res.empty_lattice = true;
      return res;
    }
    Li[i] = L[i].get_num().get_si();
  }

  TreeSum exact_total;
  KahanQ float_total;
  __float128 abs_total = 0;
  for (const RibbonGraph& G : graphs) {
    GraphLatticeTerm term{G};
    term.aut_order = G.automorphism_group(true).order;
    const int E = G.num_edges();
    // Hoist the per-cell machinery: one trivalent resolution and one exact
    // volume form shared by every metric of the cell.
    const RibbonGraph R = G.is_trivalent() ? G : trivalent_resolution(G);
    const BvolRationalForm form = bvol_form(R);
    std::vector<Rat> lr(R.num_edges(), Rat(0));  // resolution edges stay at zero
    TreeSum acc;
    KahanQ facc;
    for_each_integer_metric(G, Li, [&](const std::vector<long>& lens) {
      ++term.metrics;
      for (int e = 0; e < E; ++e) lr[e] = lens[e];
      const Rat B = form.eval(lr);
      if (exact_mode)
        acc.add(rat_pow(B, spow));
      else
        facc.add(powq(to_f128(B), static_cast<__float128>(power)));
    });
    if (exact_mode) {
      term.exact = acc.total() / term.aut_order;
      term.value = static_cast<long double>(to_f128(term.exact));
      exact_total.add(term.exact);
    } else {
      const __float128 t = facc.sum / static_cast<__float128>(term.aut_order);
      term.value = static_cast<long double>(t);
      float_total.add(t);
      abs_total += facc.abs_sum / static_cast<__float128>(term.aut_order);
    }
    res.metrics += term.metrics;
    res.graphs.push_back(std::move(term));
  }
  if (exact_mode) {
    res.exact = exact_total.total();
    res.value = static_cast<long double>(to_f128(res.exact));
  } else {
    res.value = static_cast<long double>(float_total.sum);
    // Each term carries ~2^-106 from the double-double conversion plus a few
    // units in the last place from powq and the compensated accumulation.
    res.value_error = static_cast<long double>(abs_total) * 2e-32L;
  }
  res.empty_lattice = (res.metrics == 0);
  return res;
}

Rat n11_closed_form(long L) {
  if (L <= 0 || L % 2 != 0)
    throw std::invalid_argument(
        "n11_closed_form: perimeter must be a positive even integer");
  Rat s(0);
  for (long k = 1; k < L / 2; ++k) s += rat(1, k * k);
  return s / 4;
}

std::vector<Rat> n11_series_coefficients(int max_power) {
  if (max_power < 0)
    throw std::invalid_argument("n11_series_coefficients: negative order");
  // coefficients of z * Li_2(z): the z^m coefficient is 1/(m-1)^2 for m >= 2
  std::vector<Rat> shifted(max_power + 1, Rat(0));
  for (int m = 2; m <= max_power; ++m)
    shifted[m] = rat(1, static_cast<long>(m - 1) * (m - 1));
  // dividing by 1 - z convolves with the all-ones series: running prefix sums
  std::vector<Rat> out(max_power + 1, Rat(0));
  Rat run(0);
  for (int l = 0; l <= max_power; ++l) {
    run += shifted[l];
    out[l] = run / 4;
  }
  return out;
}

AsymptoticReport n11_s2_asymptotic_check(const std::vector<long>& lengths) {
  constexpr double kRatioLo = 0.05;
  constexpr double kRatioHi = 50.0;
  constexpr double kVariationCap = 1.0;
  AsymptoticReport rep;
  rep.lengths = lengths;
  rep.ratios.reserve(lengths.size());
  for (long L : lengths) {
    const LatticeSumResult r = lattice_sum(1, 1, {Rat(L)}, 2.0);
    const long double l2 = static_cast<long double>(L) * L;
    const long double lg =
        L >= 2 ? logl(static_cast<long double>(L)) : 1.0L;
    rep.ratios.push_back(static_cast<double>(r.value * l2 / lg));
  }
  rep.ratios_bounded = true;
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    const double r = rep.ratios[i];
    if (i == 0) {
      rep.min_ratio = rep.max_ratio = r;
    } else {
      rep.min_ratio = std::min(rep.min_ratio, r);
      rep.max_ratio = std::max(rep.max_ratio, r);
    }
    if (!(r >= kRatioLo && r <= kRatioHi)) rep.ratios_bounded = false;
  }
  for (std::size_t i = rep.ratios.size() / 2; i + 1 < rep.ratios.size(); ++i)
    rep.top_half_variation += std::abs(rep.ratios[i + 1] - rep.ratios[i]);
  rep.variation_bounded = rep.top_half_variation <= kVariationCap;
  return rep;
}

ScalingLimitReport scaling_limit_check(int genus, int boundaries,
                                       const std::vector<Rat>& L, double power,
                                       const std::vector<long>& ks,
                                       std::uint64_t samples,
                                       std::uint64_t seed) {
  if (ks.empty())
    throw std::invalid_argument("scaling_limit_check: empty dilation ladder");
  for (long k : ks)
    if (k < 1)
      throw std::invalid_argument(
          "scaling_limit_check: dilations must be positive integers");
  ScalingLimitReport rep;
  rep.ks = ks;
  const IntegralEstimate mc =
      mc_integral(genus, boundaries, L, power, samples, seed);
  // the integer points of the perimeter fibre fill it with density
  // 2^{-(2g-3+n)} relative to the measure the sampler integrates against
  const double norm = std::ldexp(1.0, -(2 * genus - 3 + boundaries));
  rep.continuum = norm * mc.value;
  rep.continuum_error = norm * mc.std_error;
  // B is homogeneous of degree -(6g-6+2n), and the fibre has that dimension,
  // so the k-dilated sum scales like k^{(1-s)(6g-6+2n)}
  const double expo = (power - 1.0) * (6 * genus - 6 + 2 * boundaries);
  for (long k : ks) {
    std::vector<Rat> kL;
    kL.reserve(L.size());
    for (const Rat& q : L) kL.push_back(q * k);
    const LatticeSumResult lat = lattice_sum(genus, boundaries, kL, power);
    const double scaled = std::pow(static_cast<double>(k), expo) *
                          static_cast<double>(lat.value);
    rep.scaled.push_back(scaled);
    rep.rel_deviation.push_back(scaled / rep.continuum - 1.0);
  }
  rep.approach_monotone = true;
  for (std::size_t i = 1; i < rep.rel_deviation.size(); ++i)
    if (std::abs(rep.rel_deviation[i]) >
        std::abs(rep.rel_deviation[i - 1]) + 1e-9)
      rep.approach_monotone = false;
  return rep;
}

}  // namespace ribbonvol
