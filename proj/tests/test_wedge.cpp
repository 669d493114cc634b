#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homflow/monomials.hpp"
#include "homflow/wedge.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace homflow;

namespace {

VecQ unit(int d, int i) {
  VecQ v = VecQ::Zero(d);
  v(i) = 1;
  return v;
}

VecQ randvec(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-4, 4);
  VecQ v(d);
  for (int i = 0; i < d; ++i) v(i) = make_rat(dist(rng), 1 + static_cast<int>(rng() % 3));
  return v;
}

} // namespace

TEST_CASE("wedge: e1^e2 in d=4 hits the {0,1} coordinate") {
  Multivector w = wedge({unit(4, 0), unit(4, 1)});
  SubsetBasis b(4, 2);
  CHECK(w.coords(b.index_of({0, 1})) == 1);
  Rat total = 0;
  for (Eigen::Index i = 0; i < w.coords.size(); ++i) total += rat_abs(w.coords(i));
  CHECK(total == 1);
}

TEST_CASE("wedge: antisymmetry zeroes repeated vectors") {
  Multivector w = wedge({unit(4, 0), unit(4, 0)});
  CHECK(w.is_zero());
}

TEST_CASE("wedge: multilinearity along a shear") {
  VecQ a = unit(4, 0) + unit(4, 1); // e1 + e2
  Multivector lhs = wedge({a, unit(4, 1)});
  Multivector rhs = wedge({unit(4, 0), unit(4, 1)});
  CHECK(lhs.coords == rhs.coords);
}

TEST_CASE("wedge: permutation sign property on random vectors") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<VecQ> v = {randvec(5, rng), randvec(5, rng), randvec(5, rng)};
    Multivector base = wedge(v);
    std::vector<int> perm = {0, 1, 2};
    for (int p = 0; p < 6; ++p) {
      std::vector<VecQ> pv = {v[perm[0]], v[perm[1]], v[perm[2]]};
      // sign of the permutation by counting inversions
      int inv = 0;
      for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
          if (perm[i] > perm[j]) ++inv;
      Multivector got = wedge(pv);
      Rat sign = (inv % 2 == 0) ? 1 : -1;
      CHECK(got.coords == VecQ(sign * base.coords));
      std::next_permutation(perm.begin(), perm.end());
    }
  }
}

TEST_CASE("wedge: dimension mismatch rejected") {
  CHECK_THROWS_AS(wedge({unit(3, 0), unit(4, 1)}), std::invalid_argument);
}

TEST_CASE("compound matrix is functorial on the exterior power") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dist(-3, 3);
  MatQ a(4, 4), b(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      a(i, j) = dist(rng);
      b(i, j) = dist(rng);
    }
  MatQ lhs = compound_matrix(MatQ(a * b), 2);
  MatQ rhs = compound_matrix(a, 2) * compound_matrix(b, 2);
  CHECK(lhs == rhs);
}

TEST_CASE("enumerate_primitive_monomials: unit vectors of Z^2 below 1.5") {
  MatQ basis = MatQ::Identity(2, 2);
  auto ms = enumerate_primitive_monomials(basis, 1, 1.5);
  // e1, e2, e1 +- e2 have norms 1, 1, sqrt 2: all <= 1.5, one per sign pair
  CHECK(ms.size() == 4);
  int unit_count = 0;
  for (const auto& m : ms)
    if (std::abs(m.norm - 1.0) < 1e-12) ++unit_count;
  CHECK(unit_count == 2);
}

TEST_CASE("enumerate_primitive_monomials: six coordinate planes of Z^4") {
  MatQ basis = MatQ::Identity(4, 4);
  auto ms = enumerate_primitive_monomials(basis, 2, 1.1);
  CHECK(ms.size() == 6);
  for (const auto& m : ms) {
    CHECK(m.norm == doctest::Approx(1.0));
    // each is a pure coordinate plane: exactly one nonzero Pluecker coord
    int nz = 0;
    for (Eigen::Index i = 0; i < m.pluecker.size(); ++i)
      if (m.pluecker(i) != 0) ++nz;
    CHECK(nz == 1);
  }
}

TEST_CASE("enumerate_primitive_monomials: diagonal embedding picks the short image") {
  // diag(4, 1/4): the image of e2 has norm 1/4; bound 0.5 excludes everything else
  MatQ basis = MatQ::Zero(2, 2);
  basis(0, 0) = 4;
  basis(1, 1) = make_rat(1, 4);
  auto ms = enumerate_primitive_monomials(basis, 1, 0.5);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].norm == doctest::Approx(0.25));
  CHECK(ms[0].pluecker(0) == 0);
  CHECK(abs(ms[0].pluecker(1)) == 1);
}

TEST_CASE("enumerate_primitive_monomials agrees with generator brute force") {
  auto key = [](const PrimitiveMonomial& p) {
    std::string s;
    for (Eigen::Index i = 0; i < p.pluecker.size(); ++i)
      s += p.pluecker(i).get_str() + ",";
    return s;
  };

  // exact set equality where the generator box provably covers the bound
  for (int d : {3, 4}) {
    MatQ basis = MatQ::Identity(d, d);
    for (int deg : {1, 2}) {
      auto fast = enumerate_primitive_monomials(basis, deg, 1.6);
      auto slow = brute_force_monomials(basis, deg, 1.6, 3);
      std::vector<std::string> a, b;
      for (const auto& p : fast) a.push_back(key(p));
      for (const auto& p : slow) b.push_back(key(p));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
    }
  }

  // skewed bases: everything the box scan finds must be found (completeness);
  // the box itself cannot see subgroups needing larger generator entries
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> dist(-2, 2);
  for (int trial = 0; trial < 6; ++trial) {
    MatZ m = MatZ::Identity(4, 4);
    for (int step = 0; step < 5; ++step) {
      int i = static_cast<int>(rng() % 4), j = static_cast<int>(rng() % 4);
      if (i == j) continue;
      MatZ e = MatZ::Identity(4, 4);
      e(i, j) = dist(rng);
      m = m * e;
    }
    MatQ basis = to_rational(m);
    for (int deg : {1, 2}) {
      auto fast = enumerate_primitive_monomials(basis, deg, 1.6);
      auto slow = brute_force_monomials(basis, deg, 1.6, 3);
      std::set<std::string> a;
      for (const auto& p : fast) a.insert(key(p));
      for (const auto& p : slow) CHECK(a.count(key(p)) == 1);
      // every reported monomial is genuinely primitive and in range
      for (const auto& p : fast) {
        Int g = 0;
        for (Eigen::Index i = 0; i < p.pluecker.size(); ++i) g = gcd(g, p.pluecker(i));
        CHECK(g == 1);
        CHECK(p.norm <= 1.6 + 1e-9);
      }
    }
  }
}

TEST_CASE("primitive monomials have coprime maximal minors and match hnf extension") {
  MatQ basis = MatQ::Identity(4, 4);
  auto ms = enumerate_primitive_monomials(basis, 2, 2.0);
  for (const auto& m : ms) {
    Int g = 0;
    for (Eigen::Index i = 0; i < m.pluecker.size(); ++i) g = gcd(g, m.pluecker(i));
    CHECK(g == 1);
    // wedge of generators reproduces the Pluecker vector
    std::vector<VecQ> cols;
    for (int c = 0; c < 2; ++c) {
      VecQ v(4);
      for (int r = 0; r < 4; ++r) v(r) = Rat(m.generators(r, c));
      cols.push_back(v);
    }
    Multivector w = wedge(cols);
    for (Eigen::Index i = 0; i < w.coords.size(); ++i)
      CHECK(w.coords(i) == Rat(m.pluecker(i)));
  }
}
