#include "homflow/plane.hpp"

#include <stdexcept>

namespace homflow {

Rat rat_exp(double x, long prec_bits) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_exp: nonfinite exponent");
  // two-part ln2 keeps the reduction error near one ulp even for large |x|
  static const double ln2_hi = 6.93147180369123816490e-01;
  static const double ln2_lo = 1.90821492927058770002e-10;
  double md = std::nearbyint(x / M_LN2);
  long m = static_cast<long>(md);
  double r = (x - md * ln2_hi) - md * ln2_lo;
  Rat rq(r); // exact dyadic
  Rat term = 1, sum = 1;
  for (long k = 1; k < 80; ++k) {
    term *= rq;
    term /= k;
    sum += term;
    // |r| <= 0.35, so terms shrink superexponentially
    if (k > 8 && rat_abs(term) < make_rat(1, 4) / rat_pow_2(prec_bits + 16)) break;
  }
  // collapse the factorial denominators to a dyadic mantissa: downstream
  // arithmetic only needs the stated relative precision, not the exact sum
  {
    Rat scaled = sum * rat_pow_2(prec_bits);
    Int mant = round_nearest(scaled);
    sum = Rat(mant) / rat_pow_2(prec_bits);
  }
  if (m >= 0) {
    mpq_mul_2exp(sum.get_mpq_t(), sum.get_mpq_t(), static_cast<unsigned long>(m));
  } else {
    mpq_div_2exp(sum.get_mpq_t(), sum.get_mpq_t(), static_cast<unsigned long>(-m));
  }
  return sum;
}

double plane_log_lambda1(const MatQ& basis, const Rat& tau2, MatZ* hint) {
  if (basis.rows() != 2 || basis.cols() != 2)
    throw std::invalid_argument("plane_log_lambda1: basis must be 2x2");
  if (tau2 <= 0) throw std::invalid_argument("plane_log_lambda1: tau2 must be positive");
  MatQ b = basis;
  if (hint) {
    if (hint->rows() != 2 || hint->cols() != 2) *hint = MatZ::Identity(2, 2);
    b = basis * to_rational(*hint);
  }
  // Gram of the flowed basis vectors, exact
  Rat inv = 1 / tau2;
  auto gram_entry = [&](int i, int j) -> Rat {
    return tau2 * b(0, i) * b(0, j) + inv * b(1, i) * b(1, j);
  };
  Rat g00 = gram_entry(0, 0), g01 = gram_entry(0, 1), g11 = gram_entry(1, 1);
  if (g00 == 0 || g11 == 0)
    throw std::invalid_argument("plane_log_lambda1: degenerate basis");

  // Lagrange reduction on the Gram data, tracking the transform for the hint
  bool swapped = false;
  MatZ u = MatZ::Identity(2, 2);
  long guard = 0;
  while (true) {
    if (++guard > 1000000) throw std::runtime_error("plane_log_lambda1: reduction stuck");
    if (g00 > g11) {
      std::swap(g00, g11);
      u.col(0).swap(u.col(1));
      swapped = !swapped;
    }
    Rat mu = round_nearest(g01 / g00);
    if (mu != 0) {
      // b2 <- b2 - mu b1
      g11 = g11 - 2 * mu * g01 + mu * mu * g00;
      g01 = g01 - mu * g00;
      Int m(mu.get_num());
      u.col(1) -= (m * u.col(0).array()).matrix();
    }
    if (g11 >= g00 && 2 * rat_abs(g01) <= g00) break;
  }
  if (hint) *hint = MatZ(*hint * u);
  (void)swapped;
  return 0.5 * log_abs(g00);
}

double plane_log_height(const MatQ& basis, const Rat& tau2, double eps, MatZ* hint) {
  return std::log(eps) - plane_log_lambda1(basis, tau2, hint);
}

double plane_sup_log_height(const MatQ& basis, double T, double dt, double eps) {
  double best = -HUGE_VAL;
  double best_t = 0;
  MatZ hint = MatZ::Identity(2, 2);
  long n = static_cast<long>(std::ceil(T / dt));
  for (long i = 0; i <= n; ++i) {
    double t = std::min(T, i * dt);
    double v = plane_log_height(basis, rat_exp(2 * t), eps, &hint);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  // golden-section sharpening around the best grid point
  double lo = std::max(0.0, best_t - dt), hi = std::min(T, best_t + dt);
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = plane_log_height(basis, rat_exp(2 * x1), eps, &hint);
  double f2 = plane_log_height(basis, rat_exp(2 * x2), eps, &hint);
  for (int iter = 0; iter < 40 && (b - a) > 1e-9 * (1 + T); ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = plane_log_height(basis, rat_exp(2 * x2), eps, &hint);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = plane_log_height(basis, rat_exp(2 * x1), eps, &hint);
    }
  }
  return std::max(best, std::max(f1, f2));
}

} // namespace homflow
