#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homflow/exact_lattice.hpp"

#include <random>

using namespace homflow;

namespace {

MatZ mat2(long a, long b, long c, long d) {
  MatZ m(2, 2);
  m << Int(a), Int(b), Int(c), Int(d);
  return m;
}

// brute-force membership of v in the lattice spanned by basis, coefficients
// scanned over a box
bool brute_member(const MatZ& basis, const VecZ& v, int box) {
  const int k = static_cast<int>(basis.cols());
  std::vector<long> coef(k, -box);
  while (true) {
    VecZ acc = VecZ::Zero(basis.rows());
    for (int i = 0; i < k; ++i) acc += Int(coef[i]) * basis.col(i);
    if (acc == v) return true;
    int pos = 0;
    while (pos < k && coef[pos] == box) coef[pos++] = -box;
    if (pos == k) return false;
    ++coef[pos];
  }
}

} // namespace

TEST_CASE("hnf: identity is fixed") {
  IntBasis b{mat2(1, 0, 0, 1)};
  CHECK(hnf(b).entries == b.entries);
}

TEST_CASE("hnf: canonicalizes [[2,1],[0,1]] to the same lattice") {
  IntBasis b{mat2(2, 1, 0, 1)};
  IntBasis h = hnf(b);
  // same lattice, verified by mutual membership of every column
  CHECK(same_lattice(b, h));
  for (int c = 0; c < 2; ++c) {
    CHECK(brute_member(b.entries, h.entries.col(c), 4));
    CHECK(brute_member(h.entries, b.entries.col(c), 4));
  }
  // canonical shape: lower triangular, positive pivots, det preserved up to sign
  CHECK(h.entries(0, 1) == 0);
  CHECK(h.entries(0, 0) > 0);
  CHECK(h.entries(1, 1) > 0);
  CHECK(abs(det_exact(h.entries)) == abs(det_exact(b.entries)));
}

TEST_CASE("hnf: permutation basis maps to identity") {
  IntBasis b{mat2(0, 1, 1, 0)};
  CHECK(hnf(b).entries == MatZ(MatZ::Identity(2, 2)));
}

TEST_CASE("hnf: rejects rank-deficient input") {
  IntBasis b{mat2(1, 2, 2, 4)};
  CHECK_THROWS_AS(hnf(b), std::invalid_argument);
}

TEST_CASE("hnf: random unimodular 3x3 bases keep the lattice") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    // random product of elementary matrices is unimodular
    MatZ m = MatZ::Identity(3, 3);
    for (int step = 0; step < 6; ++step) {
      int i = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 3);
      if (i == j) continue;
      MatZ e = MatZ::Identity(3, 3);
      e(i, j) = small(rng);
      m = m * e;
    }
    IntBasis b{m};
    IntBasis h = hnf(b);
    CHECK(same_lattice(b, h));
    CHECK(abs(det_exact(h.entries)) == 1);
  }
}

TEST_CASE("lll: identity fixed and unimodular determinant preserved") {
  IntBasis b{mat2(1, 0, 0, 1)};
  CHECK(lll_reduce(b).entries == b.entries);

  MatZ m(3, 3);
  m << Int(1), Int(5), Int(3), Int(0), Int(1), Int(9), Int(0), Int(0), Int(1);
  IntBasis red = lll_reduce(IntBasis{m});
  CHECK(abs(det_exact(red.entries)) == 1);
  CHECK(same_lattice(IntBasis{m}, red));
}

TEST_CASE("lll: finds the short vector in a skewed plane basis") {
  // basis (1,0), (100,1); shortest vector has norm 1
  IntBasis b{mat2(1, 100, 0, 1)};
  IntBasis red = lll_reduce(b, 0.99);
  CHECK(same_lattice(b, red));
  // exhaustive short-vector search in Z^2 up to norm 2 says the minimum is 1
  Rat best = 10;
  for (long x = -3; x <= 3; ++x)
    for (long y = -3; y <= 3; ++y) {
      if (x == 0 && y == 0) continue;
      VecZ v(2);
      v << Int(x) * b.entries.col(0)(0) + Int(y) * b.entries.col(1)(0),
          Int(x) * b.entries.col(0)(1) + Int(y) * b.entries.col(1)(1);
      Rat n2 = Rat(v(0) * v(0) + v(1) * v(1));
      if (n2 < best) best = n2;
    }
  CHECK(best == 1);
  Rat c0 = Rat(red.entries(0, 0) * red.entries(0, 0) + red.entries(1, 0) * red.entries(1, 0));
  CHECK(c0 == best);
}

TEST_CASE("short_vectors: matches direct scan on Z^2") {
  MatQ gram = MatQ::Identity(2, 2);
  auto vs = short_vectors(gram, Rat(2));
  // vectors with norm^2 <= 2 up to sign: e1, e2, e1+e2, e1-e2
  CHECK(vs.size() == 4);
  for (const auto& v : vs) {
    Rat n2 = Rat(v(0) * v(0) + v(1) * v(1));
    CHECK(n2 <= 2);
  }
}

TEST_CASE("short_vectors: budget trips on absurd bound") {
  MatQ gram = MatQ::Identity(2, 2);
  CHECK_THROWS_AS(short_vectors(gram, Rat(1000000), 100), BudgetExceeded);
}

TEST_CASE("kernel_integer: saturated kernel of a simple map") {
  // a = [1 1 1] -> kernel rank 2, contains (1,-1,0) and (0,1,-1)
  MatZ a(1, 3);
  a << Int(1), Int(1), Int(1);
  MatZ k = kernel_integer(a);
  REQUIRE(k.cols() == 2);
  for (int c = 0; c < 2; ++c) CHECK(k(0, c) + k(1, c) + k(2, c) == 0);
  // saturation: (1,-1,0) must be an integer combination of the kernel basis
  IntBasis kb{k};
  VecZ v(3);
  v << Int(1), Int(-1), Int(0);
  CHECK(lattice_contains(kb, v));
}
