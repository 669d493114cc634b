#ifndef HOMFLOW_RATIONAL_HPP
#define HOMFLOW_RATIONAL_HPP

#include <Eigen/Dense>
#include <gmpxx.h>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace Eigen {

template <> struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

} // namespace Eigen

namespace homflow {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Rat = mpq_class;
using Int = mpz_class;

using MatQ = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using MatZ = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using VecZ = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using MatD = Eigen::MatrixXd;
using VecD = Eigen::VectorXd;

inline double to_double(const Rat& q) { return q.get_d(); }
inline double to_double(const Int& z) { return z.get_d(); }

// the two-argument mpq constructor does not reduce the fraction
inline Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}
inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline MatD to_double(const MatQ& m) {
  MatD out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

inline VecD to_double(const VecQ& v) {
  VecD out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).get_d();
  return out;
}

inline MatQ to_rational(const MatZ& m) {
  MatQ out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rat(m(i, j));
  return out;
}

// log |z| for arbitrary-size integers; exact to double precision via the
// top limbs plus the bit length.
inline double log_abs(const Int& z) {
  if (z == 0) throw std::domain_error("log_abs: zero");
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * M_LN2;
}

inline double log_abs(const Rat& q) {
  if (q == 0) throw std::domain_error("log_abs: zero");
  return log_abs(Int(q.get_num())) - log_abs(Int(q.get_den()));
}

// log(exp(a) + exp(b)) without overflow
inline double log_add_exp(double a, double b) {
  if (a == -HUGE_VAL) return b;
  if (b == -HUGE_VAL) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

inline Rat rat_pow_2(long e) {
  Rat r = 1;
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  return r;
}

inline Int int_pow(Int base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// round to nearest integer, ties toward even
inline Int round_nearest(const Rat& q) {
  Int num = q.get_num(), den = q.get_den();
  Int twice = 2 * num + den; // floor((2n+d)/(2d)) = round(n/d) for den>0
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), Int(2 * den).get_mpz_t());
  return r;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// exact determinant by fraction-free-ish Gaussian elimination on mpq
Rat det_exact(const MatQ& m);
Int det_exact(const MatZ& m);

// exact rank over the rationals
int rank_exact(MatQ m);

// exact kernel basis (columns) of m over the rationals
MatQ kernel_exact(const MatQ& m);

// exact inverse; throws std::invalid_argument if singular
MatQ inverse_exact(const MatQ& m);

// solve m x = rhs exactly; throws if inconsistent/singular
MatQ solve_exact(const MatQ& m, const MatQ& rhs);

} // namespace homflow

#endif
