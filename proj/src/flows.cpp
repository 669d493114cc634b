#include "homflow/flows.hpp"

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

bool is_zero(const MatQ& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

double frob(const MatQ& m) {
  double acc = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = to_double(m(i, j));
      acc += v * v;
    }
  return std::sqrt(acc);
}

} // namespace

FlowSpec make_flow(const Sl2Triple& triple) {
  FlowSpec flow{triple, 2.0};
  // conjugation identity on a grid: g_t u(s Z) g_{-t} = u(s e^{2t} Z)
  for (double t : {0.5, 1.0, 3.0, 10.0}) {
    for (double s : {-1.0, -0.25, 0.5, 1.0}) {
      GroupElement gt = flow_element(triple, t);
      GroupElement gmt = flow_element(triple, -t);
      GroupElement us = horocycle_element(triple, s);
      MatD lhs = gt.image * us.image * gmt.image;
      MatD rhs = horocycle_element(triple, s * std::exp(flow.alpha(t))).image;
      double scale = std::max(1.0, rhs.norm());
      if ((lhs - rhs).norm() > 1e-9 * scale)
        throw std::invalid_argument("make_flow: conjugation identity fails");
    }
  }
  return flow;
}

AdmissibleCurve line_curve(const Sl2Triple& triple) { return line_curve(triple.Zplus); }

AdmissibleCurve line_curve(const MatQ& direction) {
  AdmissibleCurve c;
  MatQ dir = direction;
  c.value = [dir](const Rat& s) { return MatQ(dir * s); };
  c.derivative = [dir](const Rat&) { return dir; };
  c.holder_gamma = 1.0;
  return c;
}

void validate_admissible(const FlowSpec& flow, const AdmissibleCurve& curve, int samples) {
  const MatQ& h0 = flow.triple.H0;
  Rat lo(curve.lo), hi(curve.hi);
  std::vector<Rat> pts;
  for (int i = 0; i <= samples; ++i) pts.push_back(lo + (hi - lo) * make_rat(i, samples));
  for (size_t i = 0; i < pts.size(); ++i) {
    MatQ v = curve.value(pts[i]);
    MatQ dv = curve.derivative(pts[i]);
    // image inside the alpha eigenspace of ad(H0), alpha = 2
    if (!is_zero(MatQ(h0 * v - v * h0 - 2 * v)))
      throw std::invalid_argument("admissible curve: image leaves the expanding eigenspace");
    if (is_zero(dv))
      throw std::invalid_argument("admissible curve: derivative vanishes on the domain");
    // abelian span on sampled pairs
    MatQ w = curve.value(pts[(i + samples / 2) % pts.size()]);
    if (!is_zero(MatQ(v * w - w * v)))
      throw std::invalid_argument("admissible curve: image does not commute");
  }
}

FlowedPoint flow_point(const FlowSpec& flow, const AdmissibleCurve& curve, const Rat& s,
                       double t, const MatQ& x0) {
  if (!curve.contains(to_double(s)))
    throw std::invalid_argument("flow_point: s outside the curve domain");
  MatQ u = exp_nilpotent_q(curve.value(s));
  FlowedPoint p{MatQ(u * x0), t};
  Rat det = det_exact(p.basis);
  if (det != 1 && det != -1) throw std::logic_error("flow_point: lost unimodularity");
  // the diagonal factor is kept analytic; reject times outside double range
  if (flow.triple.h0_diagonal()) {
    auto w = flow.triple.h0_weights();
    long wmax = 0;
    for (long x : w) wmax = std::max(wmax, std::labs(x));
    if (std::fabs(t) * wmax > 600.0 && flow.triple.dim() != 2)
      throw std::overflow_error("flow_point: e^{alpha(t)} exceeds double range");
  }
  return p;
}

double orbit_log_height(const FlowSpec& flow, const AdmissibleCurve& curve,
                        const HeightEvaluator& ev, const Rat& s, double t,
                        const MatQ& x0) {
  FlowedPoint p = flow_point(flow, curve, s, t, x0);
  const Sl2Triple& tr = flow.triple;
  if (tr.dim() == 2 && tr.h0_diagonal() && tr.H0(0, 0) == 1 && tr.H0(1, 1) == -1) {
    return plane_log_height(p.basis, rat_exp(2 * t), ev.config().epsilon);
  }
  return ev.lattice_height(p.basis, t).log_value;
}

double doa_statistic(const FlowSpec& flow, const AdmissibleCurve& curve,
                     const HeightEvaluator& ev, const Rat& s, const MatQ& x0, double M,
                     double T, double dt) {
  if (dt > T / 100.0) throw std::invalid_argument("doa_statistic: need dt <= T/100");
  const double logM = std::log(M);
  long hits = 0, total = 0;
  for (double t = 0; t <= T + 1e-12; t += dt) {
    double lf = orbit_log_height(flow, curve, ev, s, std::min(t, T), x0);
    ++total;
    if (lf > logM) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double growth_slope(const FlowSpec& flow, const AdmissibleCurve& curve,
                    const HeightEvaluator& ev, const Rat& s, const MatQ& x0, double T) {
  if (T < 10) throw std::invalid_argument("growth_slope: need T >= 10");
  double best = -HUGE_VAL;
  const double dt = T / 1000.0;
  for (double t = T / 2; t <= T + 1e-12; t += dt) {
    double lf = orbit_log_height(flow, curve, ev, s, std::min(t, T), x0);
    if (lf == HUGE_VAL) throw std::runtime_error("growth_slope: infinite height on orbit");
    best = std::max(best, lf / t);
  }
  return best;
}

double tangent_residual(const FlowSpec& flow, const AdmissibleCurve& curve, const Rat& s,
                        long n, double t, double r) {
  const double gamma = curve.holder_gamma;
  if (flow.alpha(static_cast<double>(n)) < 1.0 / gamma)
    throw std::invalid_argument("tangent_residual: need alpha(n) >= 1/gamma");
  const double ant = flow.alpha(static_cast<double>(n) * t);
  Rat step = Rat(r) * Rat(std::exp(-ant));
  Rat shifted = s + step;
  if (!curve.contains(to_double(shifted)))
    throw std::invalid_argument("tangent_residual: shifted point leaves the domain");
  MatQ res = curve.value(shifted) - curve.value(s) - step * curve.derivative(s);
  return frob(res) * std::exp((1.0 + gamma) * ant);
}

} // namespace homflow
