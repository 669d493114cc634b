#ifndef HOMFLOW_POLYNOMIAL_HPP
#define HOMFLOW_POLYNOMIAL_HPP

#include "homflow/rational.hpp"

namespace homflow {

// Dense univariate polynomial over the rationals.
struct PolyQ {
  std::vector<Rat> coeffs; // coeffs[i] multiplies x^i

  int degree() const;
  bool is_zero() const { return degree() < 0; }
  Rat eval(const Rat& x) const;
  double eval(double x) const;
  PolyQ derivative() const;
  void trim();
};

PolyQ poly_sub(const PolyQ& a, const PolyQ& b);
PolyQ poly_scale(const PolyQ& a, const Rat& c);
// remainder of a / b
PolyQ poly_rem(const PolyQ& a, const PolyQ& b);

// open isolating intervals for the distinct real roots in (a, b), each of
// width at most `width`, pairwise disjoint, sorted
std::vector<std::pair<Rat, Rat>> isolate_roots(const PolyQ& p, const Rat& a, const Rat& b,
                                               const Rat& width);

// number of distinct real roots in (a, b] by Sturm's theorem
int count_roots(const PolyQ& p, const Rat& a, const Rat& b);

// two-sided enclosure of a nonnegative quantity
struct RatInterval {
  Rat lo, hi;
};

// enclosure of the Lebesgue measure of {x in [a,b] : |p(x)| < eps}
RatInterval sublevel_measure(const PolyQ& p, const Rat& a, const Rat& b, const Rat& eps);

// enclosure of sup_{[a,b]} |p|
RatInterval sup_abs(const PolyQ& p, const Rat& a, const Rat& b);

struct CGoodLevel {
  Rat eps;
  Rat measure_hi;
  bool holds = false;
};

struct CGoodReport {
  int k = 0;
  double C = 0;       // 2k (k+1)^{1/k}
  double alpha = 0;   // 1/k
  Rat sup_lo, sup_hi;
  std::vector<CGoodLevel> levels;
  bool all_hold = false;
  bool lower_sup_holds = false; // sup >= rho_k * max |coeff|
  double rho_k = 0;
};

// Verifies the sublevel-measure inequality of (C, alpha)-goodness for a
// polynomial of degree <= k on [a, b] at dyadic levels eps_j = 2^{-j} sup,
// j = 1..levels, using exact root isolation. Throws on the zero polynomial.
CGoodReport cgood_check(const PolyQ& p, const Rat& a, const Rat& b, int k,
                        int levels = 20);

// cached sampled estimate of rho_k, the lower-sup constant on [-1,1]
double rho_estimate(int k);

} // namespace homflow

#endif
