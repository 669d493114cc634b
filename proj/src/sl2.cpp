#include "homflow/sl2.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <stdexcept>

namespace homflow {

namespace {

MatQ bracket(const MatQ& a, const MatQ& b) { return a * b - b * a; }

void check_triple(const Sl2Triple& t) {
  if (bracket(t.H0, t.Zplus) != MatQ(2 * t.Zplus))
    throw std::invalid_argument("sl2 triple: [H0, Zplus] != 2 Zplus");
  if (bracket(t.H0, t.Zminus) != MatQ(-2 * t.Zminus))
    throw std::invalid_argument("sl2 triple: [H0, Zminus] != -2 Zminus");
  if (bracket(t.Zplus, t.Zminus) != t.H0)
    throw std::invalid_argument("sl2 triple: [Zplus, Zminus] != H0");
}

// exp of a nilpotent rational matrix, exact
MatQ exp_nilpotent(const MatQ& n, const Rat& s) {
  const int d = static_cast<int>(n.rows());
  MatQ term = MatQ::Identity(d, d);
  MatQ sum = term;
  Rat fact = 1;
  for (int k = 1; k <= d; ++k) {
    term = term * n;
    bool zero = true;
    for (int i = 0; i < d && zero; ++i)
      for (int j = 0; j < d; ++j)
        if (term(i, j) != 0) { zero = false; break; }
    if (zero) break;
    fact *= k;
    Rat sk = 1;
    for (int p = 0; p < k; ++p) sk *= s;
    sum += term * (sk / fact);
  }
  return sum;
}

} // namespace

bool Sl2Triple::h0_diagonal() const {
  for (Eigen::Index i = 0; i < H0.rows(); ++i)
    for (Eigen::Index j = 0; j < H0.cols(); ++j)
      if (i != j && H0(i, j) != 0) return false;
  return true;
}

std::vector<long> Sl2Triple::h0_weights() const {
  if (!h0_diagonal()) throw std::logic_error("h0_weights: H0 is not diagonal");
  std::vector<long> w;
  for (Eigen::Index i = 0; i < H0.rows(); ++i) {
    if (H0(i, i).get_den() != 1) throw std::logic_error("h0_weights: H0 not integral");
    w.push_back(H0(i, i).get_num().get_si());
  }
  return w;
}

Sl2Triple build_triple(const BlockRepSpec& spec) {
  const int n = spec.n;
  if (spec.Y.rows() != n || spec.Y.cols() != n)
    throw std::invalid_argument("build_triple: Y must be n x n");
  MatQ yinv;
  try {
    yinv = inverse_exact(spec.Y);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("build_triple: Y is singular");
  }
  const int d = 2 * n;
  Sl2Triple t;
  t.H0 = MatQ::Zero(d, d);
  t.Zplus = MatQ::Zero(d, d);
  t.Zminus = MatQ::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    t.H0(i, i) = 1;
    t.H0(n + i, n + i) = -1;
  }
  t.Zplus.block(0, n, n, n) = spec.Y;
  t.Zminus.block(n, 0, n, n) = yinv;
  check_triple(t);
  return t;
}

Sl2Triple build_triple(const MatQ& H0, const MatQ& Zplus, const MatQ& Zminus) {
  Sl2Triple t{H0, Zplus, Zminus};
  check_triple(t);
  return t;
}

const IsotypicComponent* RepDecomposition::component(long lambda) const {
  for (const auto& c : isotypic)
    if (c.lambda == lambda) return &c;
  return nullptr;
}

VecQ RepDecomposition::project(long lambda, const VecQ& v) const {
  const IsotypicComponent* c = component(lambda);
  if (!c) return VecQ::Zero(v.size());
  return c->projector * v;
}

VecQ RepDecomposition::project_top_weight(const VecQ& v) const {
  if (isotypic.empty()) return VecQ::Zero(v.size());
  return isotypic.back().top_weight_projector * v;
}

RepDecomposition decompose(const Sl2Triple& triple, int degree) {
  const int d = triple.dim();
  if (degree < 0 || degree > d) throw std::invalid_argument("decompose: degree out of range");
  RepDecomposition out;
  out.d = d;
  out.degree = degree;
  SubsetBasis basis(d, degree);
  const int dim = basis.dim();
  out.dim_total = dim;
  if (degree == 0 || degree == d) {
    // one trivial line
    out.h_action = MatQ::Zero(1, 1);
    out.zp_action = MatQ::Zero(1, 1);
    out.zm_action = MatQ::Zero(1, 1);
    IsotypicComponent c;
    c.lambda = 0;
    c.multiplicity = 1;
    c.basis = MatQ::Identity(1, 1);
    c.projector = MatQ::Identity(1, 1);
    c.top_weight_projector = MatQ::Identity(1, 1);
    out.weight_spaces[0] = c.basis;
    out.isotypic.push_back(c);
    return out;
  }

  out.h_action = derivation_matrix(triple.H0, degree);
  out.zp_action = derivation_matrix(triple.Zplus, degree);
  out.zm_action = derivation_matrix(triple.Zminus, degree);

  // integer weight range from a Gershgorin bound on the H action
  long bound = 0;
  {
    Rat best = 0;
    for (int r = 0; r < dim; ++r) {
      Rat row = 0;
      for (int c = 0; c < dim; ++c) row += rat_abs(out.h_action(r, c));
      if (row > best) best = row;
    }
    bound = static_cast<long>(best.get_d()) + 1;
  }

  // exact eigenspaces of the H action at integer candidates
  long found = 0;
  for (long w = -bound; w <= bound; ++w) {
    MatQ shifted = out.h_action - Rat(w) * MatQ::Identity(dim, dim);
    MatQ ker = kernel_exact(shifted);
    if (ker.cols() == 0) continue;
    out.weight_spaces[w] = ker;
    found += ker.cols();
  }
  if (found != dim)
    throw std::invalid_argument("decompose: H0 does not act semisimply with integer weights");

  // highest weight vectors per weight, then descend by Zminus chains
  std::vector<IsotypicComponent> comps;
  std::vector<std::pair<long, MatQ>> chains; // lambda -> columns of the component
  for (auto it = out.weight_spaces.rbegin(); it != out.weight_spaces.rend(); ++it) {
    long w = it->first;
    if (w < 0) continue;
    const MatQ& wbasis = it->second;
    MatQ restricted = out.zp_action * wbasis;
    MatQ coeff = kernel_exact(restricted);
    if (coeff.cols() == 0) continue;
    MatQ hw = wbasis * coeff; // highest weight vectors of weight w
    IsotypicComponent c;
    c.lambda = w;
    c.multiplicity = hw.cols();
    c.basis = MatQ((w + 1) * hw.cols(), 0);
    MatQ cols(dim, (w + 1) * hw.cols());
    int col = 0;
    for (Eigen::Index r = 0; r < hw.cols(); ++r) {
      VecQ v = hw.col(r);
      for (long j = 0; j <= w; ++j) {
        cols.col(col++) = v;
        if (j < w) v = out.zm_action * v;
      }
    }
    c.basis = cols;
    comps.push_back(c);
  }
  std::sort(comps.begin(), comps.end(),
            [](const IsotypicComponent& a, const IsotypicComponent& b) { return a.lambda < b.lambda; });

  // assemble the change of basis and cut projectors out of its inverse
  MatQ p(dim, dim);
  {
    int col = 0;
    for (const auto& c : comps) {
      for (Eigen::Index j = 0; j < c.basis.cols(); ++j) p.col(col++) = c.basis.col(j);
    }
    if (col != dim) throw std::logic_error("decompose: isotypic dimensions do not add up");
  }
  MatQ pinv = inverse_exact(p);
  int offset = 0;
  for (auto& c : comps) {
    const int width = static_cast<int>(c.basis.cols());
    MatQ sel = MatQ::Zero(dim, dim);
    MatQ sel_top = MatQ::Zero(dim, dim);
    for (int j = 0; j < width; ++j) sel(offset + j, offset + j) = 1;
    // top-weight columns are the j==0 members of each chain
    for (long r = 0; r < c.multiplicity; ++r)
      sel_top(offset + r * (c.lambda + 1), offset + r * (c.lambda + 1)) = 1;
    c.projector = p * sel * pinv;
    c.top_weight_projector = p * sel_top * pinv;
    offset += width;
  }
  out.isotypic = comps;
  return out;
}

GroupElement flow_element(const Sl2Triple& triple, double t) {
  GroupElement g;
  g.kind = GroupElement::Kind::FlowTime;
  g.t = t;
  const int d = triple.dim();
  if (triple.h0_diagonal()) {
    g.image = MatD::Zero(d, d);
    auto w = triple.h0_weights();
    for (int i = 0; i < d; ++i) g.image(i, i) = std::exp(t * static_cast<double>(w[i]));
  } else {
    MatD h = to_double(triple.H0);
    g.image = (t * h).exp();
  }
  return g;
}

GroupElement horocycle_element(const Sl2Triple& triple, double s) {
  GroupElement g;
  g.kind = GroupElement::Kind::Horocycle;
  g.s = s;
  // polynomial in s with exact matrix coefficients; evaluate in doubles
  const int d = triple.dim();
  MatQ term = MatQ::Identity(d, d);
  MatD sum = MatD::Zero(d, d);
  double sk = 1.0;
  Rat fact = 1;
  sum += to_double(term);
  for (int k = 1; k <= d; ++k) {
    term = term * triple.Zplus;
    bool zero = true;
    for (int i = 0; i < d && zero; ++i)
      for (int j = 0; j < d; ++j)
        if (term(i, j) != 0) { zero = false; break; }
    if (zero) break;
    fact *= k;
    sk *= s;
    sum += to_double(MatQ(term / fact)) * sk;
  }
  g.image = sum;
  return g;
}

GroupElement general_element(const Sl2Triple& triple, const Eigen::Matrix2d& m) {
  GroupElement g;
  g.kind = GroupElement::Kind::General;
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), dd = m(1, 1);
  if (std::fabs(a * dd - b * c - 1.0) > 1e-9)
    throw std::invalid_argument("general_element: determinant must be 1");
  MatD zp = to_double(triple.Zplus);
  MatD zm = to_double(triple.Zminus);
  MatD h = to_double(triple.H0);
  auto expm = [](const MatD& x) { return x.exp().eval(); };
  if (a > 1e-12) {
    // [[a,b],[c,d]] = u^-(c/a) exp(log(a) H0) u^+(b/a)
    g.image = expm((c / a) * zm) * expm(std::log(a) * h) * expm((b / a) * zp);
  } else {
    // push through the Weyl element w = u^+(1) u^-(-1) u^+(1)
    MatD w = expm(zp) * expm(-zm) * expm(zp);
    Eigen::Matrix2d w2;
    w2 << 0, 1, -1, 0;
    Eigen::Matrix2d m2 = w2.inverse() * m;
    GroupElement rest = general_element(triple, m2);
    g.image = w * rest.image;
  }
  return g;
}

VecD act(const GroupElement& g, const VecD& coords, int d, int degree) {
  MatD cm = compound_matrix(g.image, degree);
  (void)d;
  return cm * coords;
}

VecQ act_horocycle_exact(const Sl2Triple& triple, const Rat& s, const VecQ& coords,
                         int degree) {
  MatQ u = exp_nilpotent(triple.Zplus, s);
  MatQ cm = compound_matrix(u, degree);
  return cm * coords;
}

double highest_weight_floor(const RepDecomposition& decomp, const VecQ& v, double t) {
  if (t < 0) throw std::invalid_argument("highest_weight_floor: t must be nonnegative");
  VecQ top = decomp.project_top_weight(v);
  double n = to_double(top).norm();
  if (n == 0) return 0;
  return std::exp(static_cast<double>(decomp.top_lambda()) * t) * n;
}

} // namespace homflow
