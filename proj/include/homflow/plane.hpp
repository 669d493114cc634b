#ifndef HOMFLOW_PLANE_HPP
#define HOMFLOW_PLANE_HPP

#include "homflow/rational.hpp"

namespace homflow {

// e^x as an exact rational with about prec_bits of relative precision.
// Splits x = m ln2 + r and sums the Taylor series of e^r in rationals.
Rat rat_exp(double x, long prec_bits = 96);

// log of the shortest-vector norm of the plane lattice
// diag(tau, 1/tau) * basis * Z^2, where tau2 = tau^2 is given exactly as a
// rational. Works at any flow time since all arithmetic is exact. When a
// hint transform is supplied it is applied first and updated in place, which
// makes sweeps over nearby lattices run in near-constant time per point.
double plane_log_lambda1(const MatQ& basis, const Rat& tau2, MatZ* hint = nullptr);

// log f_eps of the same flowed plane lattice: log(eps) - log(lambda1).
double plane_log_height(const MatQ& basis, const Rat& tau2, double eps,
                        MatZ* hint = nullptr);

// sup over t in [0, T] (grid step dt, with local golden-section sharpening)
// of log f_eps(diag(e^t, e^-t}) * basis * Z^2)
double plane_sup_log_height(const MatQ& basis, double T, double dt, double eps);

} // namespace homflow

#endif
