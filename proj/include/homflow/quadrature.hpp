#ifndef HOMFLOW_QUADRATURE_HPP
#define HOMFLOW_QUADRATURE_HPP

#include <functional>

namespace homflow {

struct QuadratureResult {
  double value = 0;
  double previous = 0;  // value at half the panel count
  bool converged = false;
  long evals = 0;

  double relative_change() const;
};

// Composite Simpson with panel doubling until the relative change drops
// below rel_tol (the convergence flag reports whether that happened).
QuadratureResult integrate_doubling(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol = 1e-3, long start_n = 256,
                                    long max_n = 1 << 20);

// Stratified adaptive Simpson: the interval starts as init_panels panels and
// each is refined recursively until its local Richardson error estimate is
// below its share of rel_tol. The convergence flag compares against a run at
// a quarter of the tolerance.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol = 1e-4,
                                    int init_panels = 128, int max_depth = 40);

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace homflow

#endif
