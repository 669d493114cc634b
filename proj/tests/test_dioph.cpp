#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homflow/dioph.hpp"

using namespace homflow;

namespace {

MatQ one_by_one(const Rat& v) {
  MatQ m(1, 1);
  m(0, 0) = v;
  return m;
}

Rat golden_like(int depth = 201) {
  Int a = 1, b = 1;
  for (int i = 0; i < depth; ++i) {
    Int c = a + b;
    a = b;
    b = c;
  }
  return make_rat(a, b);
}

// truncated Liouville-type number sum 10^{-k!} for k = 1..4
Rat liouville_truncation() {
  Rat s = 0;
  for (long f : {1L, 2L, 6L, 24L}) {
    Rat term = 1;
    for (long i = 0; i < f; ++i) term /= 10;
    s += term;
  }
  return s;
}

LinearFormsPoint line_point(const Rat& value) {
  return make_linear_forms(MatQ::Identity(1, 1), one_by_one(Rat(0)) * Rat(0), value);
}

} // namespace

TEST_CASE("bad_approx_margin: golden ratio stays above the classical floor") {
  LinearFormsPoint pt = line_point(golden_like());
  Rat margin = bad_approx_margin(pt, 10000);
  // the global minimum of q ||q x|| sits at q = 1 with value (3 - sqrt 5)/2,
  // while the tail liminf is 1/sqrt(5); the oracle sees both
  CHECK(to_double(margin) == doctest::Approx((3.0 - std::sqrt(5.0)) / 2).epsilon(1e-6));
  CHECK(to_double(margin) >= 0.35);
  CfData cf = cf_oracle(golden_like(), 300);
  CHECK(cf.liminf_estimate == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(0.02));
  CHECK(to_double(margin) >= cf.global_min - 1e-12);
}

TEST_CASE("bad_approx_margin: exact hits at rationals") {
  LinearFormsPoint pt = line_point(make_rat(1, 2));
  CHECK(bad_approx_margin(pt, 2) == 0);
  // n = 2 zero matrix: margin 0 at q = e1
  LinearFormsPoint pt2 = make_linear_forms(MatQ::Identity(2, 2), MatQ::Zero(2, 2), Rat(0));
  CHECK(bad_approx_margin(pt2, 3) == 0);
}

TEST_CASE("bad_approx_margin is nonincreasing in Qmax") {
  LinearFormsPoint pt = line_point(golden_like());
  Rat prev = -1;
  for (long q : {10L, 100L, 1000L}) {
    Rat m = bad_approx_margin(pt, q);
    if (prev >= 0) CHECK(m <= prev);
    prev = m;
  }
}

TEST_CASE("singular_profile: rationals solve for every N past the denominator") {
  LinearFormsPoint pt = line_point(make_rat(3, 7));
  auto flags = singular_profile(pt, {7, 10, 50, 100}, 0.5);
  for (const auto& f : flags) CHECK(f.solvable);
  auto early = singular_profile(pt, {2}, 0.01);
  CHECK(!early[0].solvable);
}

TEST_CASE("singular_profile: golden ratio fails the Dirichlet improvement") {
  LinearFormsPoint pt = line_point(golden_like());
  auto flags = singular_profile(pt, {10, 100, 1000, 10000}, 0.1);
  for (const auto& f : flags) {
    CHECK(!f.solvable);
    CHECK(!f.heuristic);
  }
}

TEST_CASE("singular_profile: Liouville truncation solves on aligned scales") {
  LinearFormsPoint pt = line_point(liouville_truncation());
  // at N = 100 the q = 100 denominator leaves residual ~1e-4 <= 0.1/100
  auto flags = singular_profile(pt, {100}, 0.1);
  CHECK(flags[0].solvable);
}

TEST_CASE("soa_statistic: rational tail fills up, badly approximable stays empty") {
  CHECK(soa_statistic(line_point(make_rat(2, 5)), 20, 0.5) >= 0.9);
  CHECK(soa_statistic(line_point(golden_like()), 20, 0.05) == 0.0);
  double frac = soa_statistic(line_point(make_rat(1, 3)), 12, 0.3);
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);
}

TEST_CASE("vwa_check: Liouville truncation has witnesses, golden has none") {
  VwaResult lv = vwa_check(line_point(liouville_truncation()), 1.0, 10000000);
  CHECK(lv.very_well_approximable);
  CHECK(lv.witnesses.size() >= 2);
  VwaResult gd = vwa_check(line_point(golden_like()), 0.2, 1000000);
  CHECK(!gd.very_well_approximable);
  CHECK_THROWS_AS(vwa_check(line_point(golden_like()), 0.0, 100), std::invalid_argument);
}

TEST_CASE("cf_oracle: golden quotients are all ones") {
  CfData cf = cf_oracle(golden_like(), 150);
  for (size_t i = 1; i + 1 < cf.quotients.size() && i < 140; ++i)
    CHECK(cf.quotients[i] == 1);
  CHECK(!cf.terminated);
}

TEST_CASE("cf_oracle: rationals terminate and are flagged") {
  CfData cf = cf_oracle(make_rat(1, 3), 64);
  CHECK(cf.terminated);
  CHECK(cf.liminf_estimate == 0.0);
}

TEST_CASE("cf_oracle: sqrt(2)-1 has period two-two-two") {
  // Pell convergents give an exact deep rational with the same expansion
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 2; // convergents of sqrt(2)-1 = [0;2,2,...]
  for (int i = 0; i < 150; ++i) {
    Int p2 = 2 * p1 + p0, q2 = 2 * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  CfData cf = cf_oracle(make_rat(p1, q1), 100);
  for (size_t i = 1; i < 90; ++i) CHECK(cf.quotients[i] == 2);
}

TEST_CASE("exponents: fully active real pair") {
  std::vector<FactorPattern> p = {{false, true}, {false, true}};
  ExponentReport rep = sl2_products_exponents(p, 0.4);
  CHECK(rep.characteristic == 0);
  CHECK(rep.dimension_bound == make_rat(1, 2));
  CHECK(rep.beta_phi == doctest::Approx(0.5));
  CHECK(!rep.no_information);
}

TEST_CASE("exponents: the negated real-complex pattern carries no information") {
  std::vector<FactorPattern> p = {{false, true}, {true, false}};
  ExponentReport rep = sl2_products_exponents(p, 0.4);
  CHECK(rep.delta_x == 2);
  CHECK(rep.zeta_x == 4);
  CHECK(rep.beta_prime == doctest::Approx(0.4 * (1.0 - 2.0)));
  CHECK(rep.beta_prime < 0);
  CHECK(rep.dimension_bound >= 1);
  CHECK(rep.no_information);
}

TEST_CASE("exponents: three real places, two active") {
  std::vector<FactorPattern> p = {{false, true}, {false, true}, {false, false}};
  ExponentReport rep = sl2_products_exponents(p, 0.4);
  CHECK(rep.characteristic == make_rat(1, 2));
  CHECK(rep.dimension_bound == make_rat(3, 4));
}

TEST_CASE("exponents: all-zero pattern rejected") {
  std::vector<FactorPattern> p = {{false, false}};
  CHECK_THROWS_AS(sl2_products_exponents(p, 0.4), std::invalid_argument);
}

TEST_CASE("exponents: bound is informative exactly under the majority condition") {
  // all patterns over r real and s complex places with r + 2s <= 8
  for (int r = 0; r <= 8; ++r) {
    for (int s = 0; 2 * s + r <= 8; ++s) {
      if (r + s == 0) continue;
      int places = r + s;
      for (long mask = 1; mask < (1L << places); ++mask) {
        std::vector<FactorPattern> pat;
        long active_weight = 0;
        for (int i = 0; i < places; ++i) {
          bool cplx = i >= r;
          bool act = (mask >> i) & 1;
          pat.push_back({cplx, act});
          if (act) active_weight += cplx ? 2 : 1;
        }
        ExponentReport rep = sl2_products_exponents(pat, 0.4);
        bool majority = 2 * active_weight > r + 2 * s;
        CHECK((rep.dimension_bound < 1) == majority);
        CHECK((rep.beta_phi > 0) == majority);
      }
    }
  }
}

TEST_CASE("sphere_margin_S1: rational points score zero") {
  CHECK(sphere_margin_S1(make_rat(3, 5), make_rat(4, 5), 10) == 0);
  CHECK(sphere_margin_S1(Rat(1), Rat(0), 10) == 0);
}

TEST_CASE("sphere_margin_S1: deep circle point has a positive bounded margin") {
  // Pythagorean point with a large denominator q = m^2 + k^2
  long m = 4001, k = 1910; // coprime, opposite parity
  long q = m * m + k * k;
  Rat x = make_rat(m * m - k * k, q), y = make_rat(2 * m * k, q);
  Rat margin = sphere_margin_S1(x, y, 10000);
  CHECK(margin > 0);
  CHECK(to_double(margin) <= 3.0); // Dirichlet-type approximants exist
  // once the horizon includes the point itself the margin collapses
  CHECK(sphere_margin_S1(x, y, q + 1) == 0);
}

TEST_CASE("off-circle points are rejected") {
  CHECK_THROWS_AS(sphere_margin_S1(make_rat(1, 2), make_rat(1, 2), 10),
                  std::invalid_argument);
}
