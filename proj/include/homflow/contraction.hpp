#ifndef HOMFLOW_CONTRACTION_HPP
#define HOMFLOW_CONTRACTION_HPP

#include "homflow/flows.hpp"
#include "homflow/quadrature.hpp"

#include <optional>

namespace homflow {

// Average contraction of a vector under g_t u_s in one exterior power.
// The decay reference rate is beta per unit t (alpha(H0)/2 = 1 here).
struct RepCHReport {
  double t = 0;
  double beta = 0;
  long delta_lambda = 0;   // top highest weight of the module
  double lhs = 0;          // (1/2) int ||g_t u_s w||^{-beta/delta} ds
  double bound_ratio = 0;  // lhs * e^{beta t} * ||pi_lambda(w)||^{beta/delta}
  bool quadrature_converged = false;
};

RepCHReport verify_rep_contraction(const Sl2Triple& triple, const RepDecomposition& dec,
                                   const VecQ& w, double t, double beta);

// Integral inequality for the lattice height f_eps^beta along a tangent
// segment. decay_term uses the e^{-beta t} normalization (equivalently
// e^{-(beta/2) alpha(t)}).
struct CHReport {
  double t = 0;
  double beta = 0;
  double log_fx = 0;       // log f_eps(x)
  double lhs = 0;          // (1/2) int f^beta(g_t u(r phi_dot(s)) x) dr
  double decay_term = 0;   // c~ e^{-beta t} f(x)^beta
  double additive_term = 0;
  bool quadrature_converged = false;
};

struct CHFit {
  double c_tilde = 1;
  double b_tilde = 0;
  double m_thresh_beta = 0; // split threshold in f^beta units
  double max_violation = -HUGE_VAL;
  std::vector<CHReport> reports;
};

CHReport verify_ch_point(const FlowSpec& flow, const AdmissibleCurve& curve,
                         const HeightEvaluator& ev, const MatQ& x, const Rat& s, double t,
                         double beta, double c_tilde = 0, double b_tilde = 0);

// Fits (c~, b~) over a family of base points by the high/low split, iterating
// the threshold twice, and reports the construction-level violations.
CHFit fit_ch_constants(const FlowSpec& flow, const AdmissibleCurve& curve,
                       const HeightEvaluator& ev, const std::vector<MatQ>& family,
                       const Rat& s, double t, double beta);

// |B_x(M, t, m; n)|: inside the M-sublevel at step m, outside for the next n
// steps. Times are t = log(expand)/2 so e^{alpha(t)} = expand is an integer.
struct MeasureBxReport {
  long expand = 0;  // e^{alpha(t)}
  int m = 0, n = 0;
  double total = 0;                  // Lebesgue estimate over [-1,1]
  std::vector<double> per_cell;      // one entry per cell of P_{expand^m}
  long grid_points = 0;
};

MeasureBxReport measure_Bx(const FlowSpec& flow, const AdmissibleCurve& curve,
                           const HeightEvaluator& ev, const MatQ& x0, double M,
                           long expand, int m, int n, int points_per_cell = 8);

// covering counts of Z_x(M, N, t, delta)
struct CoverReport {
  long expand = 0;
  int N = 0;
  double delta = 0;
  double M = 0;
  double alpha_nt = 0;       // N log(expand)
  long count = 0;            // cells of P_{expand^N} meeting the set
  double interval_width = 0; // 2 / expand^N
  double fitted_c3 = 0;      // count^{1/N} / e^{(1-delta*beta) alpha(Nt)/N}
};

CoverReport cover_Zx(const FlowSpec& flow, const AdmissibleCurve& curve,
                     const HeightEvaluator& ev, const MatQ& x0, double M, int N,
                     long expand, double delta, double beta);

// least-squares slope of log(count) against alpha(Nt); empty when all counts
// vanish
std::optional<double> dimension_estimate(const std::vector<CoverReport>& reports);

// window averages (1/|J_t|) int_{J_t + s0} f^beta over J_t = [-e^{-d a(t)}, e^{-d a(t)}]
std::vector<double> shrinking_average(const FlowSpec& flow, const AdmissibleCurve& curve,
                                      const HeightEvaluator& ev, const MatQ& x0,
                                      double delta, const std::vector<double>& t_list,
                                      const Rat& s0);

} // namespace homflow

#endif
