#include "homflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace homflow {

double QuadratureResult::relative_change() const {
  double scale = std::max(std::fabs(value), 1e-300);
  return std::fabs(value - previous) / scale;
}

QuadratureResult integrate_doubling(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol, long start_n, long max_n) {
  if (!(b > a)) throw std::invalid_argument("integrate_doubling: empty interval");
  QuadratureResult out;
  long n = start_n;
  double prev = NAN;
  while (n <= max_n) {
    // composite Simpson with n panels (2n+1 points)
    const double h = (b - a) / (2.0 * n);
    double acc = f(a) + f(b);
    out.evals += 2;
    for (long i = 1; i < 2 * n; ++i) {
      double w = (i % 2 == 1) ? 4.0 : 2.0;
      acc += w * f(a + h * i);
      ++out.evals;
    }
    double value = acc * h / 3.0;
    if (!std::isnan(prev)) {
      out.previous = prev;
      out.value = value;
      double scale = std::max(std::fabs(value), 1e-300);
      if (std::fabs(value - prev) / scale < rel_tol) {
        out.converged = true;
        return out;
      }
    }
    prev = value;
    n *= 2;
  }
  out.value = prev;
  out.converged = false;
  return out;
}

namespace {

double adaptive_panel(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double tol, int depth,
                      long& evals) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  evals += 2;
  double h = b - a;
  double whole = h / 6.0 * (fa + 4.0 * fm + fb);
  double left = h / 12.0 * (fa + 4.0 * flm + fm);
  double right = h / 12.0 * (fm + 4.0 * frm + fb);
  double err = (left + right - whole) / 15.0;
  if (depth <= 0 || std::fabs(err) <= tol)
    return left + right + err;
  return adaptive_panel(f, a, m, fa, flm, fm, tol / 2, depth - 1, evals) +
         adaptive_panel(f, m, b, fm, frm, fb, tol / 2, depth - 1, evals);
}

double adaptive_run(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, int init_panels, int max_depth, long& evals) {
  double h = (b - a) / init_panels;
  double acc = 0;
  double prev_val = f(a);
  ++evals;
  for (int i = 0; i < init_panels; ++i) {
    double lo = a + i * h, hi = a + (i + 1) * h;
    double mid = 0.5 * (lo + hi);
    double fl = prev_val, fm = f(mid), fh = f(hi);
    evals += 2;
    prev_val = fh;
    acc += adaptive_panel(f, lo, hi, fl, fm, fh, abs_tol / init_panels, max_depth, evals);
  }
  return acc;
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol, int init_panels,
                                    int max_depth) {
  if (!(b > a)) throw std::invalid_argument("integrate_adaptive: empty interval");
  QuadratureResult out;
  // scale pass to set the absolute tolerance
  double scale = 0;
  for (int i = 0; i <= 32; ++i) scale = std::max(scale, std::fabs(f(a + (b - a) * i / 32.0)));
  out.evals += 33;
  if (scale == 0) scale = 1;
  double abs_tol = rel_tol * scale * (b - a);
  double coarse = adaptive_run(f, a, b, abs_tol, init_panels, max_depth, out.evals);
  double fine = adaptive_run(f, a, b, abs_tol / 4, init_panels, max_depth, out.evals);
  out.previous = coarse;
  out.value = fine;
  double ref = std::max(std::fabs(fine), 1e-300);
  out.converged = std::fabs(fine - coarse) / ref < 1e-3;
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need matching samples, at least two");
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return num / den;
}

} // namespace homflow
