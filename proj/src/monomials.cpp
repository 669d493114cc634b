#include "homflow/monomials.hpp"
#include <numeric>

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace homflow {

namespace {

// matrix of v -> v /\ w  as a map R^d -> Lambda^{i+1}
MatZ wedge_by_map(const VecZ& w, int d, int degree) {
  SubsetBasis bi(d, degree), bo(d, degree + 1);
  MatZ out = MatZ::Zero(bo.dim(), d);
  for (int s = 0; s < bi.dim(); ++s) {
    if (w(s) == 0) continue;
    for (int j = 0; j < d; ++j) {
      std::vector<int> tuple;
      tuple.push_back(j);
      const auto& ss = bi.subset(s);
      tuple.insert(tuple.end(), ss.begin(), ss.end());
      auto [sign, idx] = bo.index_of_tuple(tuple);
      if (sign != 0) out(idx, j) += Int(sign) * w(s);
    }
  }
  return out;
}

Int content(const VecZ& v) {
  Int g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  return g;
}

bool lex_less(const MatZ& a, const MatZ& b) {
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (a(r, c) != b(r, c)) return a(r, c) < b(r, c);
    }
  return false;
}

} // namespace

bool is_decomposable(const VecZ& pluecker, int d, int degree) {
  if (degree <= 1 || degree >= d - 1) return true; // always pure there
  MatZ map = wedge_by_map(pluecker, d, degree);
  MatZ ker = kernel_integer(map);
  return ker.cols() == degree;
}

std::vector<PrimitiveMonomial> enumerate_primitive_monomials(const MatQ& basis,
                                                             int degree,
                                                             double norm_bound,
                                                             long budget) {
  if (norm_bound <= 0)
    throw std::invalid_argument("enumerate_primitive_monomials: norm_bound must be positive");
  MatQ embed = compound_matrix(basis, degree);
  MatQ gram = embed.transpose() * embed;
  Rat bound2(norm_bound);
  bound2 = bound2 * bound2;
  return enumerate_primitive_monomials_gram(basis, degree, gram, bound2, budget);
}

std::vector<PrimitiveMonomial> enumerate_primitive_monomials_gram(const MatQ& basis,
                                                                  int degree,
                                                                  const MatQ& gram,
                                                                  const Rat& bound2,
                                                                  long budget) {
  const int d = static_cast<int>(basis.rows());
  if (degree <= 0 || degree >= d)
    throw std::invalid_argument("enumerate_primitive_monomials: need 0 < degree < d");
  if (bound2 <= 0)
    throw std::invalid_argument("enumerate_primitive_monomials: bound must be positive");

  MatQ embed = compound_matrix(basis, degree);

  std::vector<VecZ> cands = short_vectors(gram, bound2, budget);
  std::vector<PrimitiveMonomial> out;
  for (const auto& w : cands) {
    if (content(w) != 1) continue;
    if (!is_decomposable(w, d, degree)) continue;
    PrimitiveMonomial pm;
    pm.degree = degree;
    pm.pluecker = w;
    // recover the subgroup: integer kernel of v -> v /\ w, then HNF
    MatZ gen;
    if (degree == 1) {
      gen = MatZ(w);
    } else {
      MatZ ker = kernel_integer(wedge_by_map(w, d, degree));
      gen = hnf(IntBasis{ker}).entries;
    }
    pm.generators = gen;
    // orient generators so their wedge is exactly +w
    {
      std::vector<VecQ> cols;
      for (int c = 0; c < degree; ++c) {
        VecQ v(d);
        for (int r = 0; r < d; ++r) v(r) = Rat(gen(r, c));
        cols.push_back(v);
      }
      Multivector frame_wedge = wedge(cols);
      bool matches_plus = true, seen = false;
      for (Eigen::Index s = 0; s < frame_wedge.coords.size(); ++s) {
        if (frame_wedge.coords(s) == 0 && w(s) == 0) continue;
        if (frame_wedge.coords(s) == Rat(w(s))) { matches_plus = true; seen = true; break; }
        if (frame_wedge.coords(s) == Rat(-w(s))) { matches_plus = false; seen = true; break; }
        throw std::logic_error("monomial wedge does not match Pluecker vector");
      }
      if (seen && !matches_plus) pm.generators.col(0) = -pm.generators.col(0);
    }
    pm.wedge.d = d;
    pm.wedge.degree = degree;
    MatQ wq = to_rational(MatZ(w));
    pm.wedge.coords = embed * wq;
    MatQ gw = gram * wq;
    Rat n2 = 0;
    for (Eigen::Index s = 0; s < gw.rows(); ++s) n2 += wq(s, 0) * gw(s, 0);
    pm.norm = std::sqrt(n2.get_d());
    out.push_back(std::move(pm));
  }
  std::sort(out.begin(), out.end(), [](const PrimitiveMonomial& a, const PrimitiveMonomial& b) {
    return lex_less(hnf(IntBasis{a.generators}).entries, hnf(IntBasis{b.generators}).entries);
  });
  return out;
}

std::vector<PrimitiveMonomial> brute_force_monomials(const MatQ& basis, int degree,
                                                     double norm_bound, int entry_bound) {
  const int d = static_cast<int>(basis.rows());
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("brute_force_monomials: oracle supports degree 1 and 2");
  MatQ embed = compound_matrix(basis, degree);
  MatD embed_d = to_double(embed);
  SubsetBasis sb(d, degree);

  // small-entry generator tuples in plain machine integers
  std::vector<std::vector<long>> vecs;
  {
    long count = 1;
    for (int i = 0; i < d; ++i) count *= (2 * entry_bound + 1);
    for (long code = 0; code < count; ++code) {
      long c = code;
      std::vector<long> v(d);
      bool zero = true;
      for (int i = 0; i < d; ++i) {
        v[i] = c % (2 * entry_bound + 1) - entry_bound;
        c /= (2 * entry_bound + 1);
        if (v[i] != 0) zero = false;
      }
      if (!zero) vecs.push_back(v);
    }
  }

  std::set<std::vector<long>> seen;
  std::vector<PrimitiveMonomial> out;
  auto push = [&](std::vector<long> w, const std::vector<std::vector<long>>& gens) {
    long cont = 0;
    for (long x : w) cont = std::gcd(cont, std::abs(x));
    if (cont != 1) return; // not a primitive subgroup
    for (size_t s = 0; s < w.size(); ++s) {
      if (w[s] != 0) {
        if (w[s] < 0)
          for (auto& x : w) x = -x;
        break;
      }
    }
    // embedded norm in doubles first (values are tame for the oracle sizes)
    double n2 = 0;
    for (int r = 0; r < sb.dim(); ++r) {
      double acc = 0;
      for (int c = 0; c < sb.dim(); ++c) acc += embed_d(r, c) * static_cast<double>(w[c]);
      n2 += acc * acc;
    }
    if (std::sqrt(n2) > norm_bound * (1 + 1e-12)) return;
    if (!seen.insert(w).second) return;
    PrimitiveMonomial pm;
    pm.degree = degree;
    pm.pluecker = VecZ(sb.dim());
    for (int s = 0; s < sb.dim(); ++s) pm.pluecker(s) = Int(w[s]);
    pm.generators = MatZ(d, degree);
    for (int c = 0; c < degree; ++c)
      for (int r = 0; r < d; ++r) pm.generators(r, c) = Int(gens[c][r]);
    pm.wedge.d = d;
    pm.wedge.degree = degree;
    pm.wedge.coords = embed * to_rational(MatZ(pm.pluecker));
    Rat exact_n2 = 0;
    for (Eigen::Index s = 0; s < pm.wedge.coords.size(); ++s)
      exact_n2 += pm.wedge.coords(s) * pm.wedge.coords(s);
    pm.norm = std::sqrt(exact_n2.get_d());
    if (pm.norm > norm_bound) {
      seen.erase(w);
      return;
    }
    out.push_back(std::move(pm));
  };

  if (degree == 1) {
    for (const auto& v : vecs) push(v, {v});
  } else {
    std::vector<long> w(sb.dim());
    for (size_t a = 0; a < vecs.size(); ++a) {
      for (size_t b = a + 1; b < vecs.size(); ++b) {
        bool zero = true;
        for (int s = 0; s < sb.dim(); ++s) {
          const auto& sub = sb.subset(s);
          w[s] = vecs[a][sub[0]] * vecs[b][sub[1]] - vecs[a][sub[1]] * vecs[b][sub[0]];
          if (w[s] != 0) zero = false;
        }
        if (!zero) push(w, {vecs[a], vecs[b]});
      }
    }
  }
  return out;
}

} // namespace homflow
