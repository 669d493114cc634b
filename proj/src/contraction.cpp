#include "homflow/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace homflow {

namespace {

MatQ exp_nilpotent_q(const MatQ& n) {
  const int d = static_cast<int>(n.rows());
  MatQ term = MatQ::Identity(d, d);
  MatQ sum = term;
  Rat fact = 1;
  for (int k = 1; k <= d; ++k) {
    term = term * n;
    bool zero = true;
    for (Eigen::Index i = 0; i < term.rows() && zero; ++i)
      for (Eigen::Index j = 0; j < term.cols(); ++j)
        if (term(i, j) != 0) { zero = false; break; }
    if (zero) break;
    fact *= k;
    sum += term / fact;
  }
  return sum;
}

// log f^beta along the tangent segment r -> g_t u(r phi_dot(s)) x
std::function<double(double)> tangent_height_integrand(const FlowSpec& flow,
                                                       const AdmissibleCurve& curve,
                                                       const HeightEvaluator& ev,
                                                       const MatQ& x, const Rat& s,
                                                       double t, double beta) {
  MatQ dir = curve.derivative(s);
  const Sl2Triple tr = flow.triple;
  const bool planar = tr.dim() == 2 && tr.h0_diagonal() && tr.H0(0, 0) == 1 &&
                      tr.H0(1, 1) == -1;
  Rat tau2 = rat_exp(2 * t);
  double eps = ev.config().epsilon;
  return [=, &ev](double r) -> double {
    MatQ u = exp_nilpotent_q(MatQ(dir * Rat(r)));
    MatQ basis = u * x;
    double logf = planar ? plane_log_height(basis, tau2, eps)
                         : ev.lattice_height(basis, t).log_value;
    if (logf == HUGE_VAL)
      throw std::runtime_error("contraction: infinite height on the segment");
    return std::exp(beta * logf);
  };
}

} // namespace

RepCHReport verify_rep_contraction(const Sl2Triple& triple, const RepDecomposition& dec,
                                   const VecQ& w, double t, double beta) {
  if (beta <= 0 || beta >= 1)
    throw std::invalid_argument("verify_rep_contraction: beta must lie in (0,1)");
  const long top = dec.top_lambda();
  if (top == 0) throw std::invalid_argument("verify_rep_contraction: module is trivial");
  VecQ pw = dec.project(top, w);
  double pw_norm = to_double(pw).norm();
  if (pw_norm == 0)
    throw std::invalid_argument("verify_rep_contraction: top projection vanishes");

  // coefficients of s -> u_s w as exact vectors a_k = (N^k / k!) w
  std::vector<VecD> poly;
  {
    VecQ cur = w;
    Rat fact = 1;
    poly.push_back(to_double(cur));
    for (long k = 1; k <= top + 1; ++k) {
      cur = dec.zp_action * cur;
      bool zero = true;
      for (Eigen::Index i = 0; i < cur.size(); ++i)
        if (cur(i) != 0) { zero = false; break; }
      if (zero) break;
      fact *= k;
      poly.push_back(to_double(VecQ(cur / fact)));
    }
  }
  // per-coordinate weights for the diagonal flow
  std::vector<double> wexp;
  {
    if (!triple.h0_diagonal())
      throw std::invalid_argument("verify_rep_contraction: needs diagonal H0");
    auto h0w = triple.h0_weights();
    SubsetBasis sb(triple.dim(), dec.degree);
    for (int s = 0; s < sb.dim(); ++s) {
      long acc = 0;
      for (int j : sb.subset(s)) acc += h0w[j];
      wexp.push_back(std::exp(2.0 * t * acc));
    }
  }

  const double expnt = -beta / static_cast<double>(top);
  auto f = [&](double s) {
    double n2 = 0;
    for (size_t c = 0; c < wexp.size(); ++c) {
      double acc = 0, sk = 1;
      for (const auto& a : poly) {
        acc += sk * a(static_cast<Eigen::Index>(c));
        sk *= s;
      }
      n2 += wexp[c] * acc * acc;
    }
    return std::pow(n2, 0.5 * expnt);
  };
  QuadratureResult q = integrate_doubling(f, -1.0, 1.0, 1e-4, 512);

  RepCHReport rep;
  rep.t = t;
  rep.beta = beta;
  rep.delta_lambda = top;
  rep.lhs = 0.5 * q.value;
  rep.bound_ratio = rep.lhs * std::exp(beta * t) * std::pow(pw_norm, beta / top);
  rep.quadrature_converged = q.converged;
  return rep;
}

CHReport verify_ch_point(const FlowSpec& flow, const AdmissibleCurve& curve,
                         const HeightEvaluator& ev, const MatQ& x, const Rat& s, double t,
                         double beta, double c_tilde, double b_tilde) {
  if (ev.config().beta <= 0) throw std::invalid_argument("verify_ch: beta must be positive");
  MatQ dir = curve.derivative(s);
  {
    bool zero = true;
    for (Eigen::Index i = 0; i < dir.rows() && zero; ++i)
      for (Eigen::Index j = 0; j < dir.cols(); ++j)
        if (dir(i, j) != 0) { zero = false; break; }
    if (zero) throw std::invalid_argument("verify_ch: curve derivative vanishes");
  }
  CHReport rep;
  rep.t = t;
  rep.beta = beta;
  const Sl2Triple& tr = flow.triple;
  const bool planar =
      tr.dim() == 2 && tr.h0_diagonal() && tr.H0(0, 0) == 1 && tr.H0(1, 1) == -1;
  rep.log_fx = planar ? plane_log_height(x, Rat(1), ev.config().epsilon)
                      : ev.lattice_height(x).log_value;
  if (rep.log_fx == HUGE_VAL) throw std::invalid_argument("verify_ch: f(x) is infinite");

  auto f = tangent_height_integrand(flow, curve, ev, x, s, t, beta);
  QuadratureResult q = integrate_adaptive(f, -1.0, 1.0, 1e-4, 128);
  rep.lhs = 0.5 * q.value;
  rep.quadrature_converged = q.converged;
  rep.decay_term = c_tilde * std::exp(-beta * t) * std::exp(beta * rep.log_fx);
  rep.additive_term = b_tilde;
  return rep;
}

CHFit fit_ch_constants(const FlowSpec& flow, const AdmissibleCurve& curve,
                       const HeightEvaluator& ev, const std::vector<MatQ>& family,
                       const Rat& s, double t, double beta) {
  if (family.empty()) throw std::invalid_argument("fit_ch_constants: empty family");
  std::vector<CHReport> reports;
  reports.reserve(family.size());
  for (const auto& x : family)
    reports.push_back(verify_ch_point(flow, curve, ev, x, s, t, beta));

  // initial split at the geometric mean of f^beta
  double mean = 0;
  for (const auto& r : reports) mean += beta * r.log_fx;
  mean /= static_cast<double>(reports.size());
  double split = mean;

  CHFit fit;
  for (int pass = 0; pass < 3; ++pass) {
    double c = 0, b = 0;
    for (const auto& r : reports) {
      double fb = beta * r.log_fx; // log f^beta
      if (fb > split)
        c = std::max(c, r.lhs * std::exp(beta * t) / std::exp(fb));
      else
        b = std::max(b, r.lhs);
    }
    if (c == 0) c = 1e-12;
    if (b == 0) b = 1e-12;
    fit.c_tilde = c;
    fit.b_tilde = b;
    // the proof's threshold T = b~ e^{beta t} / c~, in f^beta units
    split = std::log(fit.b_tilde) + beta * t - std::log(fit.c_tilde);
  }
  fit.m_thresh_beta = split;
  fit.max_violation = -HUGE_VAL;
  for (auto& r : reports) {
    r.decay_term = fit.c_tilde * std::exp(-beta * t) * std::exp(beta * r.log_fx);
    r.additive_term = fit.b_tilde;
    fit.max_violation =
        std::max(fit.max_violation, r.lhs - r.decay_term - r.additive_term);
  }
  fit.reports = std::move(reports);
  return fit;
}

namespace {

// orbit heights along integer expansion steps: log f(g_{l t} u(phi(s)) x0),
// with e^{alpha(t)} = expand so tau2 at step l is expand^l exactly
struct StepHeights {
  const FlowSpec& flow;
  const AdmissibleCurve& curve;
  const HeightEvaluator& ev;
  const MatQ& x0;
  long expand;
  bool planar;

  double log_f(const Rat& s, int l) const {
    MatQ u = exp_nilpotent_q(curve.value(s));
    MatQ basis = u * x0;
    if (planar) {
      Rat tau2 = 1;
      for (int i = 0; i < l; ++i) tau2 *= expand;
      return plane_log_height(basis, tau2, ev.config().epsilon);
    }
    double t = 0.5 * l * std::log(static_cast<double>(expand));
    return ev.lattice_height(basis, t).log_value;
  }
};

bool is_planar(const Sl2Triple& tr) {
  return tr.dim() == 2 && tr.h0_diagonal() && tr.H0(0, 0) == 1 && tr.H0(1, 1) == -1;
}

} // namespace

MeasureBxReport measure_Bx(const FlowSpec& flow, const AdmissibleCurve& curve,
                           const HeightEvaluator& ev, const MatQ& x0, double M,
                           long expand, int m, int n, int points_per_cell) {
  if (expand < 2) throw std::invalid_argument("measure_Bx: expand must be >= 2");
  if (m < 1 || n < 1) throw std::invalid_argument("measure_Bx: m, n >= 1");
  if (points_per_cell < 4)
    throw std::invalid_argument(
        "measure_Bx: grid too coarse; need at least 4 points per finest cell");
  StepHeights sh{flow, curve, ev, x0, expand, is_planar(flow.triple)};
  const double logM = std::log(M);

  // finest cells: expand^{m+n} over [-1,1]
  long fine = 1;
  for (int i = 0; i < m + n; ++i) {
    fine *= expand;
    if (fine > (1L << 40)) throw std::invalid_argument("measure_Bx: resolution overflow");
  }
  const long total_points = fine * points_per_cell;
  long coarse = 1;
  for (int i = 0; i < m; ++i) coarse *= expand;

  MeasureBxReport rep;
  rep.expand = expand;
  rep.m = m;
  rep.n = n;
  rep.per_cell.assign(static_cast<size_t>(coarse), 0.0);
  rep.grid_points = total_points;
  const Rat step = make_rat(2, total_points);
  const double step_d = to_double(step);

  for (long j = 0; j < total_points; ++j) {
    Rat s = Rat(-1) + step * Rat(static_cast<long>(j)) + step / 2;
    bool in_b = sh.log_f(s, m) < logM;
    if (in_b) {
      for (int l = 1; l <= n && in_b; ++l)
        if (!(sh.log_f(s, m + l) >= logM)) in_b = false;
    }
    if (in_b) {
      double pos = to_double(s);
      long cell = static_cast<long>((pos + 1.0) / (2.0 / coarse));
      cell = std::clamp(cell, 0L, coarse - 1);
      rep.per_cell[static_cast<size_t>(cell)] += step_d;
      rep.total += step_d;
    }
  }
  return rep;
}

CoverReport cover_Zx(const FlowSpec& flow, const AdmissibleCurve& curve,
                     const HeightEvaluator& ev, const MatQ& x0, double M, int N,
                     long expand, double delta, double beta) {
  if (delta <= 0 || delta > 1) throw std::invalid_argument("cover_Zx: delta in (0,1]");
  StepHeights sh{flow, curve, ev, x0, expand, is_planar(flow.triple)};
  const double logM = std::log(M);

  long cells = 1;
  for (int i = 0; i < N; ++i) {
    cells *= expand;
    if (cells > (1L << 40)) throw std::invalid_argument("cover_Zx: resolution overflow");
  }
  CoverReport rep;
  rep.expand = expand;
  rep.N = N;
  rep.delta = delta;
  rep.M = M;
  rep.alpha_nt = N * std::log(static_cast<double>(expand));
  rep.interval_width = 2.0 / static_cast<double>(cells);

  const long need = static_cast<long>(std::floor(delta * N)) + 1; // "> delta N"
  for (long c = 0; c < cells; ++c) {
    Rat s = Rat(-1) + make_rat(2 * c + 1, cells); // cell center
    long excursions = 0;
    for (int l = 1; l <= N; ++l) {
      if (sh.log_f(s, l) > logM) ++excursions;
      if (excursions >= need) break;
      if (excursions + (N - l) < need) break; // cannot reach the threshold
    }
    if (excursions >= need) ++rep.count;
  }
  if (rep.count > 0) {
    double rhs_exp = (1.0 - delta * beta) * rep.alpha_nt;
    rep.fitted_c3 = std::exp((std::log(static_cast<double>(rep.count)) - rhs_exp) / N);
  }
  return rep;
}

std::optional<double> dimension_estimate(const std::vector<CoverReport>& reports) {
  if (reports.size() < 3)
    throw std::invalid_argument("dimension_estimate: need at least 3 reports");
  std::vector<double> x, y;
  for (const auto& r : reports) {
    if (r.count == 0) continue;
    x.push_back(r.alpha_nt);
    y.push_back(std::log(static_cast<double>(r.count)));
  }
  if (x.empty()) return std::nullopt; // empty set at every scale
  if (x.size() < 2) return 0.0;       // a single populated scale: flat
  return fit_slope(x, y);
}

std::vector<double> shrinking_average(const FlowSpec& flow, const AdmissibleCurve& curve,
                                      const HeightEvaluator& ev, const MatQ& x0,
                                      double delta, const std::vector<double>& t_list,
                                      const Rat& s0) {
  const double beta = ev.config().beta;
  if (delta < 0 || delta >= beta)
    throw std::invalid_argument("shrinking_average: need 0 <= delta < beta");
  const Sl2Triple& tr = flow.triple;
  const bool planar = is_planar(tr);
  std::vector<double> out;
  for (double t : t_list) {
    double radius = std::exp(-delta * flow.alpha(t));
    double lo = to_double(s0) - radius, hi = to_double(s0) + radius;
    if (lo < curve.lo - 1e-12 || hi > curve.hi + 1e-12)
      throw std::invalid_argument("shrinking_average: window leaves the curve domain");
    Rat tau2 = rat_exp(2 * t);
    auto f = [&](double sval) {
      MatQ u = exp_nilpotent_q(curve.value(Rat(sval)));
      MatQ basis = u * x0;
      double logf = planar ? plane_log_height(basis, tau2, ev.config().epsilon)
                           : ev.lattice_height(basis, t).log_value;
      if (logf == HUGE_VAL)
        throw std::runtime_error("shrinking_average: infinite height in the window");
      return std::exp(beta * logf);
    };
    QuadratureResult q = integrate_adaptive(f, lo, hi, 1e-4, 128);
    out.push_back(q.value / (hi - lo));
  }
  return out;
}

} // namespace homflow
