#ifndef HOMFLOW_FLOWS_HPP
#define HOMFLOW_FLOWS_HPP

#include "homflow/heights.hpp"
#include "homflow/plane.hpp"

#include <functional>

namespace homflow {

// One-parameter diagonal flow g_t = exp(t H0) together with the eigenvalue
// functional alpha(t) = alpha1 * t on the expanding line.
struct FlowSpec {
  Sl2Triple triple;
  double alpha1 = 2.0;

  double alpha(double t) const { return alpha1 * t; }
};

// Validates the conjugation identity g_t u(s Zplus) g_{-t} = u(s e^{alpha(t)} Zplus)
// on a sample grid and returns the flow.
FlowSpec make_flow(const Sl2Triple& triple);

// A curve s -> phi(s) into the expanding eigenspace, with its derivative and
// Hoelder data. Values are nilpotent rational matrices.
struct AdmissibleCurve {
  std::function<MatQ(const Rat&)> value;
  std::function<MatQ(const Rat&)> derivative;
  double lo = -1.0;
  double hi = 1.0;
  double holder_gamma = 1.0;

  bool contains(double s) const { return s >= lo - 1e-12 && s <= hi + 1e-12; }
};

// phi(s) = s * direction (affine curves have holder_gamma = 1)
AdmissibleCurve line_curve(const Sl2Triple& triple);
AdmissibleCurve line_curve(const MatQ& direction);

// Checks the admissibility contract on a sample grid: values in the
// alpha-eigenspace, commuting image, nonvanishing derivative. Throws.
void validate_admissible(const FlowSpec& flow, const AdmissibleCurve& curve,
                         int samples = 32);

struct FlowedPoint {
  MatQ basis;  // exact basis of u(phi(s)) x0
  double t;    // diagonal flow applied analytically at evaluation time
};

// exp(phi(s)) * x0 with the flow time recorded; checks unimodularity exactly.
FlowedPoint flow_point(const FlowSpec& flow, const AdmissibleCurve& curve, const Rat& s,
                       double t, const MatQ& x0);

// log f_eps(g_t u(phi(s)) x0); routes d=2 standard flows through the exact
// plane evaluator, everything else through the generic machinery.
double orbit_log_height(const FlowSpec& flow, const AdmissibleCurve& curve,
                        const HeightEvaluator& ev, const Rat& s, double t,
                        const MatQ& x0);

// fraction of sample times t in {0, dt, ..., T} with f(orbit) > M
double doa_statistic(const FlowSpec& flow, const AdmissibleCurve& curve,
                     const HeightEvaluator& ev, const Rat& s, const MatQ& x0, double M,
                     double T, double dt);

// max over t in [T/2, T] of log f(orbit) / t
double growth_slope(const FlowSpec& flow, const AdmissibleCurve& curve,
                    const HeightEvaluator& ev, const Rat& s, const MatQ& x0, double T);

// normalized second-order residual of the tangent approximation
double tangent_residual(const FlowSpec& flow, const AdmissibleCurve& curve, const Rat& s,
                        long n, double t, double r);

} // namespace homflow

#endif
