#ifndef HOMFLOW_DIOPH_HPP
#define HOMFLOW_DIOPH_HPP

#include "homflow/rational.hpp"

#include <optional>

namespace homflow {

// phi(s) = s Y + Z as a square system of linear forms; sup norm throughout
struct LinearFormsPoint {
  MatQ Y, Z;
  Rat s;

  int n() const { return static_cast<int>(Y.rows()); }
  MatQ matrix() const { return MatQ(Y * s + Z); }
};

LinearFormsPoint make_linear_forms(const MatQ& Y, const MatQ& Z, const Rat& s);

// min over 0 < ||q||_inf <= Qmax of ||p + M q||_inf * ||q||_inf with p the
// nearest integer vector; exact rational arithmetic
Rat bad_approx_margin(const LinearFormsPoint& pt, long Qmax);

// Dirichlet solvability ||p + M q||_inf <= eps / N, 0 < ||q||_inf <= N.
// Exhaustive for n <= 2; reduction-assisted (heuristic) for larger n.
struct SingularFlag {
  long N = 0;
  bool solvable = false;
  bool heuristic = false;
};
std::vector<SingularFlag> singular_profile(const LinearFormsPoint& pt,
                                           const std::vector<long>& n_list, double eps);

// fraction of levels l in {1..N} with a solution of
// ||M q - p||_inf < eps 2^{-l}, 0 < ||q||_inf <= 2^l
double soa_statistic(const LinearFormsPoint& pt, int N, double eps);

// at least two witnesses of ||M q - p||_inf < ||q||_inf^{-1-gamma}
struct VwaResult {
  bool very_well_approximable = false;
  std::vector<VecZ> witnesses;
};
VwaResult vwa_check(const LinearFormsPoint& pt, double gamma, long Qmax);

// continued fraction data of a rational number (deep convergents of
// irrational targets are passed as exact rationals)
struct CfData {
  std::vector<Int> quotients;
  std::vector<std::pair<Int, Int>> convergents; // (p_k, q_k)
  bool terminated = false;   // expansion ended within the requested depth
  double liminf_estimate = 0; // min over the deep half of q ||q x||
  double global_min = 0;      // min over all computed convergents
};
CfData cf_oracle(const Rat& x, int depth = 64);

// exponent calculators for products of SL(2,R)^r x SL(2,C)^s
struct FactorPattern {
  bool complex_place = false;
  bool active = false; // derivative not identically zero in this factor
};
struct ExponentReport {
  std::vector<FactorPattern> pattern;
  Rat characteristic;    // (#inactive real + 2 #inactive complex) / (active same)
  long delta_x = 0;      // sum of delta_i over active factors (2 real, 4 complex)
  long zeta_x = 0;       // sum over inactive factors
  double beta_prime = 0; // beta (1 - zeta/delta)
  double beta_phi = 0;   // (1 - characteristic) / 2
  Rat dimension_bound;   // 1/2 + characteristic / 2
  bool no_information = false; // bound >= 1: the estimate carries no content
};
ExponentReport sl2_products_exponents(const std::vector<FactorPattern>& pattern,
                                      double beta);

// intrinsic approximation quality on the unit circle: min over rational
// points p/q with q <= Qmax of ||x - p/q||_inf * q, rational points
// enumerated through the Pythagorean parametrization
Rat sphere_margin_S1(const Rat& x, const Rat& y, long Qmax);

} // namespace homflow

#endif
