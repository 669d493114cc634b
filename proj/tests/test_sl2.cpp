#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homflow/sl2.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <random>

using namespace homflow;

namespace {

Sl2Triple standard2() { return build_triple(BlockRepSpec{1, MatQ::Identity(1, 1)}); }
Sl2Triple block4() { return build_triple(BlockRepSpec{2, MatQ::Identity(2, 2)}); }

// brute-force oracle: eigenvalues of the induced H action and kernel ranks
// of the raising operator, all in floating point
struct EigenOracle {
  std::map<long, int> weight_dims;
  std::map<long, int> hw_dims; // multiplicity of each highest weight
};

EigenOracle eigen_oracle(const Sl2Triple& t, int degree) {
  MatQ h = derivation_matrix(t.H0, degree);
  MatQ zp = derivation_matrix(t.Zplus, degree);
  MatD hd = to_double(h), zpd = to_double(zp);
  Eigen::EigenSolver<MatD> es(hd);
  EigenOracle out;
  std::vector<long> weights;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double re = es.eigenvalues()(i).real();
    long w = std::lround(re);
    REQUIRE(std::abs(re - w) < 1e-8);
    REQUIRE(std::abs(es.eigenvalues()(i).imag()) < 1e-8);
    out.weight_dims[w]++;
    weights.push_back(w);
  }
  // highest weight multiplicities from numeric kernels within eigenspaces
  for (auto& [w, dim] : out.weight_dims) {
    if (w < 0) continue;
    // numeric eigenspace basis
    MatD shifted = hd - static_cast<double>(w) * MatD::Identity(hd.rows(), hd.cols());
    Eigen::FullPivLU<MatD> lu(shifted);
    lu.setThreshold(1e-8);
    MatD basis = lu.kernel();
    MatD restricted = zpd * basis;
    Eigen::FullPivLU<MatD> lu2(restricted);
    lu2.setThreshold(1e-8);
    int hw = static_cast<int>(basis.cols() - lu2.rank());
    if (hw > 0) out.hw_dims[w] = hw;
  }
  return out;
}

} // namespace

TEST_CASE("build_triple: standard sl2 in SL(2)") {
  Sl2Triple t = standard2();
  CHECK(t.H0(0, 0) == 1);
  CHECK(t.H0(1, 1) == -1);
  CHECK(t.Zplus(0, 1) == 1);
  CHECK(t.alpha_rate() == 2.0);
}

TEST_CASE("build_triple: n=2 block spec matches the linear-forms flow") {
  Sl2Triple t = block4();
  for (int i = 0; i < 2; ++i) {
    CHECK(t.H0(i, i) == 1);
    CHECK(t.H0(2 + i, 2 + i) == -1);
    CHECK(t.Zplus(i, 2 + i) == 1);
  }
}

TEST_CASE("build_triple: bracket violations rejected") {
  MatQ h = MatQ::Zero(2, 2), z = MatQ::Zero(2, 2), zm = MatQ::Zero(2, 2);
  h(0, 0) = 1;
  h(1, 1) = -1;
  z(0, 1) = 1;
  zm(1, 0) = 2; // wrong scale: [Zp, Zm] = 2 H0 != H0
  CHECK_THROWS_AS(build_triple(h, z, zm), std::invalid_argument);
}

TEST_CASE("build_triple: singular Y rejected") {
  MatQ y = MatQ::Zero(2, 2);
  y(0, 0) = 1;
  CHECK_THROWS_AS(build_triple(BlockRepSpec{2, y}), std::invalid_argument);
}

TEST_CASE("decompose: d=2 degree 1 is a single standard representation") {
  RepDecomposition dec = decompose(standard2(), 1);
  REQUIRE(dec.isotypic.size() == 1);
  CHECK(dec.isotypic[0].lambda == 1);
  CHECK(dec.isotypic[0].multiplicity == 1);
  CHECK(dec.weight_spaces.count(1) == 1);
  CHECK(dec.weight_spaces.count(-1) == 1);
}

TEST_CASE("decompose: d=4 degree 2 splits as 3 trivial + one 3-dim of weight 2") {
  RepDecomposition dec = decompose(block4(), 2);
  REQUIRE(dec.isotypic.size() == 2);
  const IsotypicComponent* triv = dec.component(0);
  const IsotypicComponent* top = dec.component(2);
  REQUIRE(triv != nullptr);
  REQUIRE(top != nullptr);
  CHECK(triv->multiplicity == 3);
  CHECK(triv->basis.cols() == 3);
  CHECK(top->multiplicity == 1);
  CHECK(top->basis.cols() == 3);
  CHECK(dec.dim_total == 6);

  // brute-force eigendecomposition oracle agrees
  EigenOracle oracle = eigen_oracle(block4(), 2);
  CHECK(oracle.weight_dims[2] == 1);
  CHECK(oracle.weight_dims[0] == 4);
  CHECK(oracle.weight_dims[-2] == 1);
  CHECK(oracle.hw_dims[2] == 1);
  CHECK(oracle.hw_dims[0] == 3);
}

TEST_CASE("decompose: d=4 degree 1 is two standard copies, no trivial part") {
  RepDecomposition dec = decompose(block4(), 1);
  REQUIRE(dec.isotypic.size() == 1);
  CHECK(dec.isotypic[0].lambda == 1);
  CHECK(dec.isotypic[0].multiplicity == 2);
  EigenOracle oracle = eigen_oracle(block4(), 1);
  CHECK(oracle.hw_dims.size() == 1);
  CHECK(oracle.hw_dims[1] == 2);
}

TEST_CASE("decompose: projector algebra is exact") {
  for (int degree : {1, 2, 3}) {
    RepDecomposition dec = decompose(block4(), degree);
    const int n = static_cast<int>(dec.dim_total);
    MatQ sum = MatQ::Zero(n, n);
    for (const auto& a : dec.isotypic) {
      CHECK(MatQ(a.projector * a.projector) == a.projector);
      sum += a.projector;
      for (const auto& b : dec.isotypic) {
        if (a.lambda == b.lambda) continue;
        MatQ prod = a.projector * b.projector;
        CHECK(prod == MatQ(MatQ::Zero(n, n)));
      }
      // invariance under the triple action: projector commutes with all three
      for (const MatQ* m : {&dec.h_action, &dec.zp_action, &dec.zm_action}) {
        CHECK(MatQ(a.projector * (*m)) == MatQ((*m) * a.projector));
      }
    }
    CHECK(sum == MatQ(MatQ::Identity(n, n)));
  }
}

TEST_CASE("decompose: irreducible dimension equals weight plus one") {
  for (int degree : {1, 2, 3}) {
    RepDecomposition dec = decompose(block4(), degree);
    long total = 0;
    for (const auto& c : dec.isotypic) {
      CHECK(c.basis.cols() == c.multiplicity * (c.lambda + 1));
      total += c.basis.cols();
    }
    CHECK(total == dec.dim_total);
  }
}

TEST_CASE("weights are integers of one parity inside each irreducible") {
  RepDecomposition dec = decompose(block4(), 2);
  for (const auto& [w, basis] : dec.weight_spaces) {
    for (const auto& c : dec.isotypic) {
      // a weight present in component lambda satisfies |w| <= lambda and
      // w == lambda mod 2; verified via the projector being nonzero there
      MatQ proj = c.projector * basis;
      bool nonzero = false;
      for (Eigen::Index i = 0; i < proj.rows() && !nonzero; ++i)
        for (Eigen::Index j = 0; j < proj.cols(); ++j)
          if (proj(i, j) != 0) { nonzero = true; break; }
      if (nonzero) {
        CHECK(std::abs(w) <= c.lambda);
        CHECK((c.lambda - w) % 2 == 0);
      }
    }
  }
}

TEST_CASE("act: flow scales e1^e2 by exp(2t) in the d=4 block module") {
  Sl2Triple t = block4();
  SubsetBasis sb(4, 2);
  VecD v = VecD::Zero(sb.dim());
  v(sb.index_of({0, 1})) = 1;
  GroupElement g = flow_element(t, 0.7);
  VecD out = act(g, v, 4, 2);
  CHECK(out(sb.index_of({0, 1})) == doctest::Approx(std::exp(2 * 0.7)));
  for (int i = 0; i < sb.dim(); ++i)
    if (i != sb.index_of({0, 1})) CHECK(out(i) == doctest::Approx(0.0));
}

TEST_CASE("act: horocycle fixes e1 and shears e2 in d=2") {
  Sl2Triple t = standard2();
  GroupElement u = horocycle_element(t, 0.5);
  VecD e1 = VecD::Zero(2), e2 = VecD::Zero(2);
  e1(0) = 1;
  e2(1) = 1;
  VecD a = act(u, e1, 2, 1);
  CHECK(a(0) == doctest::Approx(1.0));
  CHECK(a(1) == doctest::Approx(0.0));
  VecD b = act(u, e2, 2, 1);
  CHECK(b(0) == doctest::Approx(0.5));
  CHECK(b(1) == doctest::Approx(1.0));
}

TEST_CASE("act is functorial within tolerance") {
  Sl2Triple t = block4();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SubsetBasis sb(4, 2);
  for (int trial = 0; trial < 10; ++trial) {
    GroupElement g = flow_element(t, 0.4);
    GroupElement h = horocycle_element(t, gauss(rng));
    VecD v(sb.dim());
    for (int i = 0; i < sb.dim(); ++i) v(i) = gauss(rng);
    GroupElement gh;
    gh.kind = GroupElement::Kind::General;
    gh.image = g.image * h.image;
    VecD lhs = act(gh, v, 4, 2);
    VecD rhs = act(g, act(h, v, 4, 2), 4, 2);
    CHECK((lhs - rhs).norm() <= 1e-9 * (1 + rhs.norm()));
  }
}

TEST_CASE("equivariance: projectors commute with flow and horocycle") {
  Sl2Triple t = block4();
  RepDecomposition dec = decompose(t, 2);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    VecD v(6);
    for (int i = 0; i < 6; ++i) v(i) = gauss(rng);
    for (const auto& c : dec.isotypic) {
      MatD proj = to_double(c.projector);
      for (double param : {0.3, -0.8}) {
        GroupElement g = trial % 2 ? flow_element(t, std::fabs(param))
                                   : horocycle_element(t, param);
        VecD lhs = proj * act(g, v, 4, 2);
        VecD rhs = act(g, VecD(proj * v), 4, 2);
        CHECK((lhs - rhs).norm() <= 1e-8 * (1 + rhs.norm()));
      }
    }
  }
}

TEST_CASE("highest_weight_floor bounds the flowed norm") {
  Sl2Triple t = block4();
  RepDecomposition dec = decompose(t, 2);
  SubsetBasis sb(4, 2);

  // a highest weight vector scales exactly
  VecQ hw = VecQ::Zero(6);
  hw(sb.index_of({0, 1})) = 1;
  CHECK(highest_weight_floor(dec, hw, 1.3) == doctest::Approx(std::exp(2 * 1.3)));

  // vector with zero top projection gives the vacuous bound
  VecQ triv = VecQ::Zero(6);
  triv(sb.index_of({0, 2})) = 1; // e1^e3 is sl2-invariant here
  CHECK(highest_weight_floor(dec, triv, 2.0) == 0.0);

  // random vectors: floor never exceeds the actual flowed norm
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dist(-5, 5);
  for (int trial = 0; trial < 25; ++trial) {
    VecQ v(6);
    for (int i = 0; i < 6; ++i) v(i) = make_rat(dist(rng), 1 + (i % 2));
    double t1 = 1.0;
    GroupElement g = flow_element(t, t1);
    VecD flowed = act(g, to_double(v), 4, 2);
    CHECK(highest_weight_floor(dec, v, t1) <= flowed.norm() * (1 + 1e-6));
  }
}

TEST_CASE("avoidance: top projection of moved highest weight vector stays away from zero") {
  Sl2Triple t = block4();
  RepDecomposition dec = decompose(t, 2);
  SubsetBasis sb(4, 2);
  VecQ hw = VecQ::Zero(6);
  hw(sb.index_of({0, 1})) = 1;
  VecD v = to_double(hw);
  MatD top = to_double(dec.component(2)->projector);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> par(-1.5, 1.5);
  double worst = 1e99;
  for (int trial = 0; trial < 1000; ++trial) {
    // product of bounded generators
    MatD img = MatD::Identity(4, 4);
    for (int step = 0; step < 4; ++step) {
      switch (rng() % 3) {
        case 0: img *= horocycle_element(t, par(rng)).image; break;
        case 1: img *= flow_element(t, 0.5 * par(rng)).image; break;
        default: {
          MatD zm = to_double(t.Zminus);
          img *= (par(rng) * zm).exp();
          break;
        }
      }
    }
    GroupElement g;
    g.kind = GroupElement::Kind::General;
    g.image = img;
    VecD moved = act(g, v, 4, 2);
    double ratio = (top * moved).norm() / moved.norm();
    worst = std::min(worst, ratio);
  }
  MESSAGE("minimum top-projection ratio over samples: ", worst);
  CHECK(worst > 1e-6);
}
