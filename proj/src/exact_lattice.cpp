#include "homflow/exact_lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace homflow {

Rat det_exact(const MatQ& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
  MatQ a = m;
  int n = static_cast<int>(a.rows());
  Rat det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != 0) { piv = r; break; }
    if (piv < 0) return 0;
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      det = -det;
    }
    det *= a(col, col);
    Rat inv = 1 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      Rat f = a(r, col) * inv;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

Int det_exact(const MatZ& m) {
  Rat d = det_exact(to_rational(m));
  if (d.get_den() != 1) throw std::logic_error("integer det not integral");
  return d.get_num();
}

int rank_exact(MatQ m) {
  int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (m(r, col) != 0) { piv = r; break; }
    if (piv < 0) continue;
    m.row(piv).swap(m.row(rank));
    Rat inv = 1 / m(rank, col);
    for (int r = rank + 1; r < rows; ++r) {
      if (m(r, col) == 0) continue;
      Rat f = m(r, col) * inv;
      for (int c = col; c < cols; ++c) m(r, c) -= f * m(rank, c);
    }
    ++rank;
  }
  return rank;
}

MatQ kernel_exact(const MatQ& m) {
  int rows = static_cast<int>(m.rows()), cols = static_cast<int>(m.cols());
  MatQ a = m;
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a(r, col) != 0) { piv = r; break; }
    if (piv < 0) continue;
    a.row(piv).swap(a.row(rank));
    Rat inv = 1 / a(rank, col);
    for (int c = 0; c < cols; ++c) a(rank, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || a(r, col) == 0) continue;
      Rat f = a(r, col);
      for (int c = 0; c < cols; ++c) a(r, c) -= f * a(rank, c);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<int> free_cols;
  {
    size_t pi = 0;
    for (int c = 0; c < cols; ++c) {
      if (pi < pivot_col.size() && pivot_col[pi] == c) { ++pi; continue; }
      free_cols.push_back(c);
    }
  }
  MatQ ker(cols, static_cast<Eigen::Index>(free_cols.size()));
  ker.setZero();
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    ker(fc, static_cast<Eigen::Index>(k)) = 1;
    for (int r = 0; r < rank; ++r) ker(pivot_col[r], static_cast<Eigen::Index>(k)) = -a(r, fc);
  }
  return ker;
}

MatQ solve_exact(const MatQ& m, const MatQ& rhs) {
  if (m.rows() != rhs.rows()) throw std::invalid_argument("solve: shape mismatch");
  int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw std::invalid_argument("solve: not square");
  MatQ a(n, n + static_cast<int>(rhs.cols()));
  a.leftCols(n) = m;
  a.rightCols(rhs.cols()) = rhs;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != 0) { piv = r; break; }
    if (piv < 0) throw std::invalid_argument("solve: singular matrix");
    a.row(piv).swap(a.row(col));
    Rat inv = 1 / a(col, col);
    a.row(col) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Rat f = a(r, col);
      a.row(r) -= f * a.row(col);
    }
  }
  return a.rightCols(rhs.cols());
}

MatQ inverse_exact(const MatQ& m) {
  MatQ id = MatQ::Identity(m.rows(), m.rows());
  return solve_exact(m, id);
}

// --- Hermite normal form (column operations, lower-triangular convention) ---

IntBasis hnf(const IntBasis& basis) {
  const int d = basis.dim(), k = basis.rank();
  if (rank_exact(to_rational(basis.entries)) != k)
    throw std::invalid_argument("hnf: columns are linearly dependent");
  MatZ a = basis.entries;

  int col = 0;
  for (int row = 0; row < d && col < k; ++row) {
    // eliminate entries a(row, col+1..) against a(row, col) by gcd steps
    int piv = -1;
    for (int c = col; c < k; ++c)
      if (a(row, c) != 0) { piv = c; break; }
    if (piv < 0) continue;
    if (piv != col) a.col(piv).swap(a.col(col));
    for (int c = col + 1; c < k; ++c) {
      while (a(row, c) != 0) {
        Int q = floor_div(a(row, c), a(row, col));
        a.col(c) -= (q * a.col(col).array()).matrix();
        if (a(row, c) != 0) a.col(c).swap(a.col(col));
      }
    }
    if (a(row, col) < 0) a.col(col) = -a.col(col);
    // reduce earlier columns against the new pivot
    for (int c = 0; c < col; ++c) {
      Int q = floor_div(a(row, c), a(row, col));
      if (q != 0) a.col(c) -= (q * a.col(col).array()).matrix();
    }
    ++col;
  }
  return IntBasis{a};
}

MatZ kernel_integer(const MatZ& a) {
  const int rows = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  MatZ h = a;
  MatZ u = MatZ::Identity(n, n);

  int col = 0;
  for (int row = 0; row < rows && col < n; ++row) {
    int piv = -1;
    for (int c = col; c < n; ++c)
      if (h(row, c) != 0) { piv = c; break; }
    if (piv < 0) continue;
    if (piv != col) {
      h.col(piv).swap(h.col(col));
      u.col(piv).swap(u.col(col));
    }
    for (int c = col + 1; c < n; ++c) {
      while (h(row, c) != 0) {
        Int q = floor_div(h(row, c), h(row, col));
        h.col(c) -= (q * h.col(col).array()).matrix();
        u.col(c) -= (q * u.col(col).array()).matrix();
        if (h(row, c) != 0) {
          h.col(c).swap(h.col(col));
          u.col(c).swap(u.col(col));
        }
      }
    }
    ++col;
  }
  // columns col..n-1 of u span the kernel; u unimodular makes it saturated
  MatZ ker(n, n - col);
  for (int c = col; c < n; ++c) ker.col(c - col) = u.col(c);
  return ker;
}

bool lattice_contains(const IntBasis& basis, const VecZ& v) {
  // solve basis * x = v over Q via least squares on the exact system
  MatQ b = to_rational(basis.entries);
  MatQ g = b.transpose() * b;
  VecQ rhs = b.transpose() * to_rational(MatZ(v));
  MatQ x;
  try {
    x = solve_exact(g, rhs);
  } catch (const std::invalid_argument&) {
    return false;
  }
  // check residual and integrality
  MatQ res = b * x - to_rational(MatZ(v));
  for (Eigen::Index i = 0; i < res.rows(); ++i)
    if (res(i, 0) != 0) return false;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (x(i, 0).get_den() != 1) return false;
  return true;
}

bool same_lattice(const IntBasis& a, const IntBasis& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank()) return false;
  for (int c = 0; c < b.rank(); ++c)
    if (!lattice_contains(a, b.entries.col(c))) return false;
  for (int c = 0; c < a.rank(); ++c)
    if (!lattice_contains(b, a.entries.col(c))) return false;
  return true;
}

// --- LLL on an exact rational Gram form ---

namespace {

struct GramSchmidt {
  // mu(i,j) for j<i, and squared norms B(i) of the orthogonalized vectors,
  // all exact rationals w.r.t. the given Gram form.
  MatQ mu;
  VecQ B;
};

GramSchmidt gram_schmidt(const MatQ& gram, const MatZ& u) {
  const int k = static_cast<int>(u.cols());
  MatQ uq = to_rational(u);
  MatQ g = uq.transpose() * gram * uq; // pairwise inner products
  GramSchmidt gs;
  gs.mu = MatQ::Zero(k, k);
  gs.B = VecQ::Zero(k);
  // standard recurrences on inner products only
  MatQ r = MatQ::Zero(k, k); // r(i,j) = <b_i, b*_j>
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) {
      Rat s = g(i, j);
      for (int l = 0; l < j; ++l) s -= gs.mu(j, l) * r(i, l);
      r(i, j) = s;
      gs.mu(i, j) = s / gs.B(j);
    }
    Rat s = g(i, i);
    for (int l = 0; l < i; ++l) s -= gs.mu(i, l) * r(i, l);
    gs.B(i) = s;
    r(i, i) = s;
  }
  return gs;
}

} // namespace

MatZ lll_reduce_gram(const MatQ& gram, double delta) {
  if (delta <= 0.25 || delta >= 1.0)
    throw std::invalid_argument("lll: delta must lie in (1/4, 1)");
  const int k = static_cast<int>(gram.rows());
  MatZ u = MatZ::Identity(k, k);
  Rat del(delta);
  // exact textbook LLL; recomputes GS data after structural changes, which
  // is fine at the ranks used here (k <= 70)
  GramSchmidt gs = gram_schmidt(gram, u);
  int i = 1;
  long guard = 0;
  while (i < k) {
    if (++guard > 200000) throw std::runtime_error("lll: iteration guard tripped");
    // size-reduce column i against j<i
    for (int j = i - 1; j >= 0; --j) {
      Int q = round_nearest(gs.mu(i, j));
      if (q != 0) {
        u.col(i) -= (q * u.col(j).array()).matrix();
        for (int l = 0; l < j; ++l) gs.mu(i, l) -= Rat(q) * gs.mu(j, l);
        gs.mu(i, j) -= Rat(q);
      }
    }
    // Lovasz condition
    if (gs.B(i) >= (del - gs.mu(i, i - 1) * gs.mu(i, i - 1)) * gs.B(i - 1)) {
      ++i;
    } else {
      u.col(i).swap(u.col(i - 1));
      gs = gram_schmidt(gram, u);
      i = std::max(i - 1, 1);
    }
  }
  return u;
}

IntBasis lll_reduce(const IntBasis& basis, double delta) {
  MatQ b = to_rational(basis.entries);
  MatQ gram = b.transpose() * b;
  if (rank_exact(b) != basis.rank())
    throw std::invalid_argument("lll: columns are linearly dependent");
  MatZ u = lll_reduce_gram(gram, delta);
  return IntBasis{basis.entries * u};
}

// --- Fincke-Pohst enumeration under an exact Gram form ---

std::vector<VecZ> short_vectors(const MatQ& gram, const Rat& bound, long budget) {
  const int k = static_cast<int>(gram.rows());
  if (bound <= 0) return {};
  // reduce first so the search tree stays tight
  MatZ u = lll_reduce_gram(gram, 0.99);
  MatQ uq = to_rational(u);
  MatQ g = uq.transpose() * gram * uq;

  // exact Cholesky-style decomposition: g = R^T D R with R unit upper tri
  MatQ r = MatQ::Identity(k, k);
  VecQ ddiag(k);
  {
    MatQ a = g;
    for (int i = 0; i < k; ++i) {
      ddiag(i) = a(i, i);
      if (ddiag(i) <= 0) throw std::invalid_argument("short_vectors: form not positive definite");
      for (int j = i + 1; j < k; ++j) r(i, j) = a(i, j) / a(i, i);
      for (int p = i + 1; p < k; ++p)
        for (int q = i + 1; q < k; ++q)
          a(p, q) -= a(p, i) * a(i, q) / a(i, i);
    }
  }

  std::vector<VecZ> out;
  VecZ x = VecZ::Zero(k);
  std::vector<Rat> partial(k + 1, Rat(0)); // accumulated quadratic value below level i
  std::vector<Rat> center(k, Rat(0));
  long touched = 0;

  // depth-first over coordinates k-1 .. 0
  struct Frame {
    Int lo, hi, cur;
  };
  std::vector<Frame> stack(k);
  int level = k - 1;
  bool descending = true;
  auto level_bounds = [&](int i) {
    // c_i = -sum_{j>i} r(i,j) x_j ; allowed (x_i - c_i)^2 * d_i <= bound - partial_{i+1}
    Rat c = 0;
    for (int j = i + 1; j < k; ++j) c -= r(i, j) * Rat(x(j));
    center[i] = c;
    Rat room = (bound - partial[i + 1]) / ddiag(i);
    // integer window around c with (x-c)^2 <= room
    double rd = std::sqrt(std::max(0.0, room.get_d())) + 1e-12;
    double cd = c.get_d();
    Int lo(std::ceil(cd - rd - 1)), hi(std::floor(cd + rd + 1));
    // tighten exactly
    while (lo <= hi) {
      Rat t = Rat(lo) - c;
      if (t * t <= room) break;
      ++lo;
    }
    while (hi >= lo) {
      Rat t = Rat(hi) - c;
      if (t * t <= room) break;
      --hi;
    }
    stack[i] = Frame{lo, hi, lo};
  };

  if (k == 0) return out;
  level_bounds(level);
  while (true) {
    Frame& f = stack[level];
    if (f.cur > f.hi) {
      ++level;
      if (level >= k) break;
      ++stack[level].cur;
      continue;
    }
    if (++touched > budget)
      throw BudgetExceeded("short_vectors: candidate budget exceeded");
    x(level) = f.cur;
    Rat t = Rat(f.cur) - center[level];
    partial[level] = partial[level + 1] + ddiag(level) * t * t;
    if (partial[level] > bound) {
      ++f.cur;
      continue;
    }
    if (level == 0) {
      bool nonzero = false;
      for (int i = 0; i < k; ++i)
        if (x(i) != 0) { nonzero = true; break; }
      if (nonzero) {
        VecZ v = u * x;
        // canonical sign: first nonzero coordinate positive
        for (int i = 0; i < k; ++i) {
          if (v(i) != 0) {
            if (v(i) < 0) v = -v;
            break;
          }
        }
        out.push_back(v);
      }
      ++f.cur;
    } else {
      --level;
      level_bounds(level);
    }
  }
  // dedup (each ± pair appears twice in the raw walk)
  std::sort(out.begin(), out.end(), [](const VecZ& a, const VecZ& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const VecZ& a, const VecZ& b) { return a == b; }),
            out.end());
  descending = descending; // silence unused in some configs
  return out;
}

} // namespace homflow
