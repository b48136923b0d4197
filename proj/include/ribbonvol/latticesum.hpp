#pragma once

#include <cstdint>
#include <vector>

#include "ribbonvol/rational.hpp"
#include "ribbonvol/ribbon.hpp"

namespace ribbonvol {

// All assignments of positive integer lengths to the edges of G that realise
// the given positive integer boundary perimeters, in lexicographic order.
// Unrealisable perimeters (odd where evenness is forced, too short, or
// nonpositive) simply give an empty list.  Throws std::invalid_argument only
// when the perimeter count does not match the number of faces.
std::vector<std::vector<long>> enumerate_integer_metrics(const RibbonGraph& G,
                                                         const std::vector<long>& L);

// One graph's share of a discrete volume-power sum.
struct GraphLatticeTerm {
  RibbonGraph graph;
  long aut_order = 1;
  std::uint64_t metrics = 0;  // ordered integer metrics on this graph
  Rat exact;                  // (1/#Aut) * sum of B^s, when s is an integer
  long double value = 0.0L;   // the same contribution as a float
};

// Discrete analogue of the volume-power integral: the sum of
// B(G, lengths)^s / #Aut(G) over all integer metric ribbon graphs of type
// (g, n) with the given integer perimeters, across cells of every dimension.
struct LatticeSumResult {
  bool empty_lattice = false;      // no integer metrics at all (e.g. odd total)
  bool is_exact = false;           // s integral: `exact` is authoritative
  Rat exact;                       // exact value, filled when is_exact
  long double value = 0.0L;        // always filled
  long double value_error = 0.0L;  // accumulation error bound (0 when exact)
  std::uint64_t metrics = 0;       // total ordered integer metrics
  std::vector<GraphLatticeTerm> graphs;
};

// Integer powers are accumulated in exact rationals (deterministic tree
// reduction); other powers in 128-bit floats with a running error bound.
// Perimeters that are not positive integers yield the empty lattice (value 0)
// rather than an error.  Throws std::invalid_argument for a wrong perimeter
// count or non-finite power, and propagates enumeration errors for invalid
// or over-budget (g, n).
LatticeSumResult lattice_sum(int genus, int boundaries, const std::vector<Rat>& L,
                             double power);

// Closed form of the genus-one one-boundary lattice sum at unit power:
//   (1/4) * sum_{k=1}^{L/2 - 1} 1/k^2   for even L > 0.
// Throws std::invalid_argument for odd or nonpositive L.
Rat n11_closed_form(long L);

// Coefficients of z^l, l = 0..max_power, in (1/4) z Li_2(z) / (1 - z), the
// generating series of the closed form above in the variable z^(L/2);
// computed by series convolution rather than through the closed form.
std::vector<Rat> n11_series_coefficients(int max_power);

// Growth check of the genus-one one-boundary sum at the integrability edge
// (power 2): the ratios  N(L; 2) * L^2 / ln L  along a ladder of even L
// should stay inside a fixed window and settle down for large L.
struct AsymptoticReport {
  std::vector<long> lengths;
  std::vector<double> ratios;       // N(L;2) * L^2 / ln L per ladder entry
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool ratios_bounded = false;      // all ratios within [0.05, 50]
  double top_half_variation = 0.0;  // sum of |successive differences|, top half
  bool variation_bounded = false;   // top_half_variation <= 1.0
};
AsymptoticReport n11_s2_asymptotic_check(const std::vector<long>& lengths);

// Rescaled lattice sums against the continuous integral: for a ladder of
// integer dilations k, compares  k^{(s-1)(6g-6+2n)} * N(kL; s)  with
// 2^{-(2g-3+n)} times the Monte-Carlo estimate of the integral of B^s.
struct ScalingLimitReport {
  std::vector<long> ks;
  std::vector<double> scaled;         // rescaled lattice value per k
  double continuum = 0.0;             // normalised Monte-Carlo estimate
  double continuum_error = 0.0;       // its standard error (same scale)
  std::vector<double> rel_deviation;  // scaled / continuum - 1 per k
  bool approach_monotone = false;     // |deviation| non-increasing along ks
};
// Throws std::invalid_argument for an empty ladder or nonpositive k, plus
// everything lattice_sum and the Monte-Carlo integrator reject.
ScalingLimitReport scaling_limit_check(int genus, int boundaries,
                                       const std::vector<Rat>& L, double power,
                                       const std::vector<long>& ks,
                                       std::uint64_t samples = 200000,
                                       std::uint64_t seed = 0);

}  // namespace ribbonvol
