#include "homflow/dioph.hpp"

#include "homflow/exact_lattice.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace homflow {

LinearFormsPoint make_linear_forms(const MatQ& Y, const MatQ& Z, const Rat& s) {
  if (Y.rows() != Y.cols() || Z.rows() != Z.cols() || Y.rows() != Z.rows())
    throw std::invalid_argument("linear forms: Y, Z must be square of equal size");
  if (det_exact(Y) == 0)
    throw std::invalid_argument("linear forms: Y must be invertible");
  return LinearFormsPoint{Y, Z, s};
}

namespace {

Rat round_residual(const Rat& v) {
  // distance to the nearest integer
  Int r = round_nearest(v);
  return rat_abs(v - Rat(r));
}

// enumerate q with 0 < ||q||_inf <= Q in n dimensions, calling visit(q)
template <typename Visit>
void scan_q(int n, long Q, Visit visit) {
  std::vector<long> q(static_cast<size_t>(n), -Q);
  while (true) {
    bool zero = true;
    long norm = 0;
    for (long c : q) {
      zero = zero && c == 0;
      norm = std::max(norm, std::labs(c));
    }
    if (!zero && norm <= Q) visit(q);
    int pos = 0;
    while (pos < n && q[static_cast<size_t>(pos)] == Q) q[static_cast<size_t>(pos++)] = -Q;
    if (pos == n) break;
    ++q[static_cast<size_t>(pos)];
  }
}

} // namespace

Rat bad_approx_margin(const LinearFormsPoint& pt, long Qmax) {
  if (Qmax < 1) throw std::invalid_argument("bad_approx_margin: Qmax >= 1");
  const int n = pt.n();
  MatQ m = pt.matrix();
  Rat best = -1;

  if (n == 1) {
    // convergent-driven scan: residual minima over q <= Qmax occur at
    // continued-fraction denominators, but the full loop is cheap enough
    // to stay exact and assumption-free
    Rat x = m(0, 0);
    for (long q = 1; q <= Qmax; ++q) {
      Rat r = round_residual(x * q) * q;
      if (best < 0 || r < best) best = r;
      if (best == 0) break;
    }
    return best;
  }

  scan_q(n, Qmax, [&](const std::vector<long>& q) {
    Rat resid = 0;
    long qn = 0;
    for (int i = 0; i < n; ++i) {
      Rat acc = 0;
      for (int j = 0; j < n; ++j) acc += m(i, j) * q[static_cast<size_t>(j)];
      resid = std::max(resid, round_residual(acc), [](const Rat& a, const Rat& b) { return a < b; });
      qn = std::max(qn, std::labs(q[static_cast<size_t>(i)]));
    }
    Rat value = resid * qn;
    if (best < 0 || value < best) best = value;
  });
  return best;
}

std::vector<SingularFlag> singular_profile(const LinearFormsPoint& pt,
                                           const std::vector<long>& n_list, double eps) {
  const int n = pt.n();
  MatQ m = pt.matrix();
  std::vector<SingularFlag> out;
  for (long N : n_list) {
    if (N < 1) throw std::invalid_argument("singular_profile: N >= 1");
    SingularFlag flag;
    flag.N = N;
    Rat bound = Rat(eps) / N;
    if (n <= 2) {
      scan_q(n, N, [&](const std::vector<long>& q) {
        if (flag.solvable) return;
        Rat resid = 0;
        for (int i = 0; i < n; ++i) {
          Rat acc = 0;
          for (int j = 0; j < n; ++j) acc += m(i, j) * q[static_cast<size_t>(j)];
          Rat r = round_residual(acc);
          if (r > resid) resid = r;
        }
        if (resid <= bound) flag.solvable = true;
      });
    } else {
      // reduction-assisted search in the Dani lattice, flagged heuristic
      flag.heuristic = true;
      const int d = 2 * n;
      MatQ basis = MatQ::Identity(d, d);
      Rat scale = 1 / bound; // residual block normalized to unit scale
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) basis(i, n + j) = m(i, j) * scale;
        basis(i, i) = scale;
        basis(n + i, n + i) = make_rat(1, N);
      }
      MatQ gram = basis.transpose() * basis;
      auto cands = short_vectors(gram, Rat(d), 200000);
      for (const auto& v : cands) {
        bool qzero = true;
        long qn = 0;
        for (int j = 0; j < n; ++j) {
          if (v(n + j) != 0) qzero = false;
          qn = std::max(qn, std::labs(v(n + j).get_si()));
        }
        if (qzero || qn > N) continue;
        Rat resid = 0;
        for (int i = 0; i < n; ++i) {
          Rat acc = 0;
          for (int j = 0; j < n; ++j) acc += m(i, j) * v(n + j);
          acc += v(i);
          if (rat_abs(acc) > resid) resid = rat_abs(acc);
        }
        if (resid <= bound) {
          flag.solvable = true;
          break;
        }
      }
    }
    out.push_back(flag);
  }
  return out;
}

double soa_statistic(const LinearFormsPoint& pt, int N, double eps) {
  if (N < 1) throw std::invalid_argument("soa_statistic: N >= 1");
  const int n = pt.n();
  MatQ m = pt.matrix();
  long hits = 0;
  if (n == 1) {
    // exact minima over q <= 2^l from the continued fraction of the entry
    CfData cf = cf_oracle(m(0, 0), 20000);
    for (int l = 1; l <= N; ++l) {
      Int qcap = int_pow(Int(2), static_cast<unsigned long>(l));
      Rat tol = Rat(eps) / rat_pow_2(l);
      bool hit = false;
      for (const auto& [p, q] : cf.convergents) {
        if (q > qcap || q == 0) break;
        if (rat_abs(m(0, 0) * Rat(q) - Rat(p)) < tol) {
          hit = true;
          break;
        }
      }
      // exact rational points: residual 0 once the denominator is reachable
      if (!hit && m(0, 0).get_den() <= qcap) hit = true;
      if (hit) ++hits;
    }
  } else if (n <= 2) {
    for (int l = 1; l <= N; ++l) {
      long qcap = 1L << std::min(l, 20);
      Rat tol = Rat(eps) / rat_pow_2(l);
      bool hit = false;
      scan_q(n, qcap, [&](const std::vector<long>& q) {
        if (hit) return;
        Rat resid = 0;
        for (int i = 0; i < n; ++i) {
          Rat acc = 0;
          for (int j = 0; j < n; ++j) acc += m(i, j) * q[static_cast<size_t>(j)];
          Rat r = round_residual(acc);
          if (r > resid) resid = r;
        }
        if (resid < tol) hit = true;
      });
      if (hit) ++hits;
    }
  } else {
    throw std::invalid_argument("soa_statistic: exhaustive search limited to n <= 2");
  }
  return static_cast<double>(hits) / N;
}

VwaResult vwa_check(const LinearFormsPoint& pt, double gamma, long Qmax) {
  if (gamma <= 0) throw std::invalid_argument("vwa_check: gamma must be positive");
  const int n = pt.n();
  MatQ m = pt.matrix();
  VwaResult out;
  // witnesses below sqrt(Qmax) are excluded: the inequality is asymptotic
  // and every number admits a few spurious small-denominator solutions
  const long scale_floor = std::max(1L, static_cast<long>(std::sqrt(static_cast<double>(Qmax))));
  auto consider = [&](const std::vector<long>& q) {
    long qn = 0;
    for (long c : q) qn = std::max(qn, std::labs(c));
    if (qn < scale_floor) return;
    Rat resid = 0;
    for (int i = 0; i < n; ++i) {
      Rat acc = 0;
      for (int j = 0; j < n; ++j) acc += m(i, j) * q[static_cast<size_t>(j)];
      Rat r = round_residual(acc);
      if (r > resid) resid = r;
    }
    double thr = std::pow(static_cast<double>(qn), -1.0 - gamma);
    if (to_double(resid) < thr) {
      VecZ w(n);
      for (int i = 0; i < n; ++i) w(i) = Int(q[static_cast<size_t>(i)]);
      out.witnesses.push_back(w);
    }
  };
  if (n == 1) {
    // convergents and their small multiples carry every candidate scale
    CfData cf = cf_oracle(m(0, 0), 20000);
    for (const auto& [p, q] : cf.convergents) {
      if (q == 0) continue;
      for (long mult = 1; mult <= 4; ++mult) {
        Int qm = mult * q;
        if (qm > Qmax) break;
        consider({qm.get_si()});
      }
    }
  } else {
    scan_q(n, Qmax, consider);
  }
  out.very_well_approximable = out.witnesses.size() >= 2;
  return out;
}

CfData cf_oracle(const Rat& x, int depth) {
  if (depth < 1 || depth > 100000) throw std::invalid_argument("cf_oracle: depth out of range");
  CfData out;
  Rat rem = x;
  Int p0 = 1, q0 = 0; // p_{-1}, q_{-1}
  Int p1, q1;         // p_0 = a_0, q_0 = 1 once the first quotient lands
  bool first = true;
  for (int k = 0; k < depth; ++k) {
    Int a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num().get_mpz_t(), rem.get_den().get_mpz_t());
    out.quotients.push_back(a);
    if (first) {
      p1 = a;
      q1 = 1;
      first = false;
    } else {
      Int p2 = a * p1 + p0, q2 = a * q1 + q0;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
    }
    out.convergents.emplace_back(p1, q1);
    Rat frac = rem - Rat(a);
    if (frac == 0) {
      out.terminated = true;
      break;
    }
    rem = 1 / frac;
  }
  // q ||q x|| along convergents. For a terminating expansion the last two
  // convergents sit at the resolution edge (the terminal one is exact), so
  // they are excluded from the value series.
  size_t usable = out.convergents.size();
  if (out.terminated) usable = usable >= 2 ? usable - 2 : 0;
  std::vector<double> vals;
  for (size_t i = 0; i < usable; ++i) {
    const auto& [p, q] = out.convergents[i];
    if (q == 0) continue;
    Rat v = rat_abs(x * Rat(q) - Rat(p)) * Rat(q);
    vals.push_back(to_double(v));
  }
  if (!vals.empty()) {
    double g = HUGE_VAL, tail = HUGE_VAL;
    for (size_t i = 0; i < vals.size(); ++i) {
      g = std::min(g, vals[i]);
      if (i >= vals.size() / 2) tail = std::min(tail, vals[i]);
    }
    out.global_min = g;
    out.liminf_estimate = tail;
  }
  return out;
}

ExponentReport sl2_products_exponents(const std::vector<FactorPattern>& pattern,
                                      double beta) {
  if (pattern.empty()) throw std::invalid_argument("exponents: empty pattern");
  long active = 0, inactive = 0, dx = 0, zx = 0;
  for (const auto& f : pattern) {
    long weight = f.complex_place ? 2 : 1;
    long delta = f.complex_place ? 4 : 2;
    if (f.active) {
      active += weight;
      dx += delta;
    } else {
      inactive += weight;
      zx += delta;
    }
  }
  if (active == 0) throw std::invalid_argument("exponents: all-zero pattern (constant curve)");

  ExponentReport rep;
  rep.pattern = pattern;
  rep.characteristic = make_rat(inactive, active);
  rep.delta_x = dx;
  rep.zeta_x = zx;
  rep.beta_prime = beta * (1.0 - static_cast<double>(zx) / static_cast<double>(dx));
  rep.beta_phi = 0.5 * (1.0 - to_double(rep.characteristic));
  rep.dimension_bound = make_rat(1, 2) + rep.characteristic / 2;
  rep.no_information = rep.dimension_bound >= 1;
  return rep;
}

Rat sphere_margin_S1(const Rat& x, const Rat& y, long Qmax) {
  Rat r2 = x * x + y * y;
  if (rat_abs(r2 - 1) > make_rat(1, 1000000000000L))
    throw std::invalid_argument("sphere_margin_S1: point must lie on the unit circle");
  if (Qmax < 1) throw std::invalid_argument("sphere_margin_S1: Qmax >= 1");

  Rat best = -1;
  auto consider = [&](const Rat& px, const Rat& py, long q) {
    Rat dx = rat_abs(x - px), dy = rat_abs(y - py);
    Rat dist = dx > dy ? dx : dy; // sup norm
    Rat val = dist * q;
    if (best < 0 || val < best) best = val;
  };
  // axis points have q = 1
  consider(Rat(1), Rat(0), 1);
  consider(Rat(-1), Rat(0), 1);
  consider(Rat(0), Rat(1), 1);
  consider(Rat(0), Rat(-1), 1);
  // primitive Pythagorean parametrization q = m^2 + k^2
  for (long mm = 1; mm * mm <= Qmax; ++mm) {
    for (long k = (mm == 1 ? 1 : 0); k < mm; ++k) {
      long q = mm * mm + k * k;
      if (q > Qmax) break;
      if (std::gcd(mm, k) != 1) continue;
      long aa = mm * mm - k * k, bb = 2 * mm * k;
      for (int signs = 0; signs < 4; ++signs) {
        long sa = (signs & 1) ? -aa : aa;
        long sb = (signs & 2) ? -bb : bb;
        consider(make_rat(sa, q), make_rat(sb, q), q);
        consider(make_rat(sb, q), make_rat(sa, q), q);
      }
    }
  }
  return best;
}

} // namespace homflow
