#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homflow/dioph.hpp"
#include "homflow/flows.hpp"

using namespace homflow;

namespace {

Sl2Triple standard2() { return build_triple(BlockRepSpec{1, MatQ::Identity(1, 1)}); }

struct PlaneLab {
  Sl2Triple triple = standard2();
  FlowSpec flow = make_flow(triple);
  AdmissibleCurve curve = line_curve(triple);
  HeightConfig cfg;
  HeightEvaluator ev{triple, [] {
                       HeightConfig c;
                       c.epsilon = 1.0;
                       return c;
                     }()};
};

// Fibonacci convergent of the golden ratio minus one: behaves like the
// worst-approximable number far beyond every horizon used here
Rat golden_like(int depth = 201) {
  Int a = 1, b = 1; // F_1, F_2
  for (int i = 0; i < depth; ++i) {
    Int c = a + b;
    a = b;
    b = c;
  }
  return make_rat(a, b); // F_n / F_{n+1} ~ 0.618...
}

} // namespace

TEST_CASE("flow_point: identity curve value returns the base lattice") {
  PlaneLab lab;
  FlowedPoint p = flow_point(lab.flow, lab.curve, Rat(0), 0.0, MatQ::Identity(2, 2));
  CHECK(p.basis == MatQ(MatQ::Identity(2, 2)));
}

TEST_CASE("flow_point: unimodularity is preserved exactly along the curve") {
  PlaneLab lab;
  for (int j = -4; j <= 4; ++j) {
    FlowedPoint p =
        flow_point(lab.flow, lab.curve, make_rat(j, 5), 7.0, MatQ::Identity(2, 2));
    CHECK(rat_abs(det_exact(p.basis)) == 1);
  }
}

TEST_CASE("flow_point: domain violations rejected") {
  PlaneLab lab;
  CHECK_THROWS_AS(flow_point(lab.flow, lab.curve, Rat(2), 0.0, MatQ::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("make_flow validates the conjugation identity") {
  Sl2Triple t = standard2();
  FlowSpec flow = make_flow(t);
  CHECK(flow.alpha1 == 2.0);
  CHECK(flow.alpha(3.0) == doctest::Approx(6.0));
}

TEST_CASE("admissible line curve passes validation") {
  PlaneLab lab;
  CHECK_NOTHROW(validate_admissible(lab.flow, lab.curve));
}

TEST_CASE("orbit height at a rational parameter follows the aligned vector") {
  PlaneLab lab;
  // u_{p/q} maps (-p, q) to (0, q); after time t its norm is q e^{-t},
  // so log f = log eps + t - log q once t >= log q
  for (long q : {2L, 3L, 5L}) {
    Rat s = make_rat(1, q);
    double t = 10.0;
    double lf = orbit_log_height(lab.flow, lab.curve, lab.ev, s, t, MatQ::Identity(2, 2));
    CHECK(lf == doctest::Approx(t - std::log(static_cast<double>(q))).epsilon(1e-9));
  }
}

TEST_CASE("orbit height stays bounded at a badly approximable parameter") {
  PlaneLab lab;
  Rat s = golden_like();
  // independent bound from the continued-fraction oracle:
  // lambda_1(t)^2 >= 2 min_k q_k |q_k s - p_k| by AM-GM on the two terms
  CfData cf = cf_oracle(s, 400);
  double sup_bound = -0.5 * std::log(2.0 * cf.global_min);
  double worst = -HUGE_VAL;
  for (double t = 0; t <= 30.0; t += 0.25) {
    double lf = orbit_log_height(lab.flow, lab.curve, lab.ev, s, t, MatQ::Identity(2, 2));
    worst = std::max(worst, lf);
  }
  CHECK(worst <= sup_bound + 1e-9);
  CHECK(worst < std::log(20.0)); // concretely small
}

TEST_CASE("doa_statistic: bounded orbit scores zero above its sup") {
  PlaneLab lab;
  Rat s = golden_like();
  double frac = doa_statistic(lab.flow, lab.curve, lab.ev, s, MatQ::Identity(2, 2), 1e3,
                              50.0, 0.1);
  CHECK(frac == 0.0);
}

TEST_CASE("doa_statistic: divergent rational orbit matches the derived fraction") {
  PlaneLab lab;
  // f = eps e^t / q beyond t = log q, so the fraction above M over [0, T]
  // is 1 - log(M q / eps) / T up to grid granularity
  Rat s = make_rat(1, 3);
  double M = 1e3, T = 50.0;
  double frac = doa_statistic(lab.flow, lab.curve, lab.ev, s, MatQ::Identity(2, 2), M, T,
                              0.05);
  double expected = 1.0 - std::log(M * 3.0) / T;
  CHECK(frac == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("doa_statistic is nonincreasing in M") {
  PlaneLab lab;
  Rat s = make_rat(1, 3);
  double prev = 2.0;
  for (double M : {10.0, 100.0, 1000.0}) {
    double frac = doa_statistic(lab.flow, lab.curve, lab.ev, s, MatQ::Identity(2, 2), M,
                                50.0, 0.25);
    CHECK(frac <= prev + 1e-12);
    prev = frac;
  }
}

TEST_CASE("growth_slope: bounded orbit has vanishing slope") {
  PlaneLab lab;
  Rat s = golden_like();
  double slope = growth_slope(lab.flow, lab.curve, lab.ev, s, MatQ::Identity(2, 2), 50.0);
  CHECK(slope < 0.1);
}

TEST_CASE("growth_slope: full-speed divergence runs at alpha(1)/2") {
  PlaneLab lab;
  // the aligned vector contracts like e^{-t}, so log f / t -> 1 = alpha(1)/2
  Rat s = make_rat(1, 3);
  double slope = growth_slope(lab.flow, lab.curve, lab.ev, s, MatQ::Identity(2, 2), 50.0);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("tangent_residual: affine curves have zero residual") {
  PlaneLab lab;
  double r = tangent_residual(lab.flow, lab.curve, make_rat(1, 3), 2, 1.5, 0.7);
  CHECK(r == 0.0);
}

TEST_CASE("tangent_residual: quadratic curve reproduces the Taylor remainder") {
  // phi(s) = upper block diag(s, s^2) inside the d=4 expanding eigenspace
  Sl2Triple t4 = build_triple(BlockRepSpec{2, MatQ::Identity(2, 2)});
  FlowSpec flow = make_flow(t4);
  AdmissibleCurve curve;
  curve.value = [](const Rat& s) {
    MatQ m = MatQ::Zero(4, 4);
    m(0, 2) = s;
    m(1, 3) = s * s;
    return m;
  };
  curve.derivative = [](const Rat& s) {
    MatQ m = MatQ::Zero(4, 4);
    m(0, 2) = 1;
    m(1, 3) = 2 * s;
    return m;
  };
  curve.holder_gamma = 1.0;
  validate_admissible(flow, curve);
  for (double r : {0.3, -0.8, 1.0}) {
    double res = tangent_residual(flow, curve, make_rat(1, 10), 1, 2.0, r);
    CHECK(res == doctest::Approx(r * r).epsilon(1e-9));
    CHECK(res <= 1.0 + 1e-9);
  }
}

TEST_CASE("tangent_residual: expansion threshold enforced") {
  PlaneLab lab;
  AdmissibleCurve rough = lab.curve;
  rough.holder_gamma = 0.25; // needs alpha(n) >= 4, i.e. n >= 2
  CHECK_THROWS_AS(tangent_residual(lab.flow, rough, Rat(0), 1, 1.0, 0.5),
                  std::invalid_argument);
}
