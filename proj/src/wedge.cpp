#include "homflow/wedge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace homflow {

SubsetBasis::SubsetBasis(int d, int degree) : d_(d), degree_(degree) {
  if (degree < 0 || degree > d) throw std::invalid_argument("SubsetBasis: degree out of range");
  std::vector<int> cur(degree);
  // lexicographic enumeration
  std::function<void(int, int)> rec = [&](int start, int pos) {
    if (pos == degree) {
      subsets_.push_back(cur);
      return;
    }
    for (int v = start; v < d_; ++v) {
      cur[pos] = v;
      rec(v + 1, pos + 1);
    }
  };
  rec(0, 0);
}

long SubsetBasis::binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

int SubsetBasis::index_of(const std::vector<int>& s) const {
  // rank in the lexicographic order
  long idx = 0;
  int prev = -1;
  for (int pos = 0; pos < degree_; ++pos) {
    for (int v = prev + 1; v < s[pos]; ++v)
      idx += binomial(d_ - v - 1, degree_ - pos - 1);
    prev = s[pos];
  }
  return static_cast<int>(idx);
}

std::pair<int, int> SubsetBasis::index_of_tuple(std::vector<int> tuple) const {
  int sign = 1;
  // insertion sort with sign tracking
  for (size_t i = 1; i < tuple.size(); ++i) {
    for (size_t j = i; j > 0 && tuple[j - 1] > tuple[j]; --j) {
      std::swap(tuple[j - 1], tuple[j]);
      sign = -sign;
    }
  }
  for (size_t i = 1; i < tuple.size(); ++i)
    if (tuple[i] == tuple[i - 1]) return {0, 0};
  return {sign, index_of(tuple)};
}

Multivector wedge(const std::vector<VecQ>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("wedge: empty input");
  const int d = static_cast<int>(vectors[0].size());
  const int i = static_cast<int>(vectors.size());
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument("wedge: dimension mismatch");
  if (i > d) throw std::invalid_argument("wedge: degree exceeds dimension");

  SubsetBasis basis(d, i);
  Multivector out;
  out.d = d;
  out.degree = i;
  out.coords = VecQ::Zero(basis.dim());
  // coordinate on subset S is the minor det(vectors restricted to rows S)
  MatQ m(d, i);
  for (int c = 0; c < i; ++c) m.col(c) = vectors[c];
  for (int s = 0; s < basis.dim(); ++s) {
    const auto& rows = basis.subset(s);
    MatQ minor(i, i);
    for (int r = 0; r < i; ++r)
      for (int c = 0; c < i; ++c) minor(r, c) = m(rows[r], c);
    out.coords(s) = det_exact(minor);
  }
  return out;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  if (a.d != b.d) throw std::invalid_argument("wedge: dimension mismatch");
  const int d = a.d;
  const int deg = a.degree + b.degree;
  if (deg > d) throw std::invalid_argument("wedge: degree exceeds dimension");
  SubsetBasis ba(d, a.degree), bb(d, b.degree), bc(d, deg);
  Multivector out;
  out.d = d;
  out.degree = deg;
  out.coords = VecQ::Zero(bc.dim());
  for (int s = 0; s < ba.dim(); ++s) {
    if (a.coords(s) == 0) continue;
    for (int t = 0; t < bb.dim(); ++t) {
      if (b.coords(t) == 0) continue;
      std::vector<int> tuple = ba.subset(s);
      const auto& st = bb.subset(t);
      tuple.insert(tuple.end(), st.begin(), st.end());
      auto [sign, idx] = bc.index_of_tuple(tuple);
      if (sign != 0) out.coords(idx) += Rat(sign) * a.coords(s) * b.coords(t);
    }
  }
  return out;
}

namespace {

template <typename Mat>
Mat compound_impl(const Mat& m, int degree) {
  const int d = static_cast<int>(m.rows());
  SubsetBasis basis(d, degree);
  Mat out(basis.dim(), basis.dim());
  for (int r = 0; r < basis.dim(); ++r) {
    for (int c = 0; c < basis.dim(); ++c) {
      const auto& rows = basis.subset(r);
      const auto& cols = basis.subset(c);
      Mat minor(degree, degree);
      for (int i = 0; i < degree; ++i)
        for (int j = 0; j < degree; ++j) minor(i, j) = m(rows[i], cols[j]);
      if constexpr (std::is_same_v<typename Mat::Scalar, Rat>)
        out(r, c) = det_exact(minor);
      else
        out(r, c) = degree == 1 ? minor(0, 0) : minor.determinant();
    }
  }
  return out;
}

} // namespace

MatQ compound_matrix(const MatQ& m, int degree) { return compound_impl(m, degree); }
MatD compound_matrix(const MatD& m, int degree) { return compound_impl(m, degree); }

MatQ derivation_matrix(const MatQ& m, int degree) {
  const int d = static_cast<int>(m.rows());
  SubsetBasis basis(d, degree);
  MatQ out = MatQ::Zero(basis.dim(), basis.dim());
  for (int c = 0; c < basis.dim(); ++c) {
    const auto& cols = basis.subset(c);
    for (int slot = 0; slot < degree; ++slot) {
      for (int target = 0; target < d; ++target) {
        Rat coeff = m(target, cols[slot]);
        if (coeff == 0) continue;
        std::vector<int> tuple = cols;
        tuple[slot] = target;
        auto [sign, idx] = basis.index_of_tuple(tuple);
        if (sign != 0) out(idx, c) += Rat(sign) * coeff;
      }
    }
  }
  return out;
}

} // namespace homflow
