#ifndef HOMFLOW_EXACT_LATTICE_HPP
#define HOMFLOW_EXACT_LATTICE_HPP

#include "homflow/rational.hpp"

namespace homflow {

// Columns are the basis vectors of a sublattice of Z^d.
struct IntBasis {
  MatZ entries;

  int dim() const { return static_cast<int>(entries.rows()); }
  int rank() const { return static_cast<int>(entries.cols()); }
};

// Column-style Hermite normal form: lower triangular with positive pivots,
// entries to the right of each pivot reduced mod the pivot. Same lattice.
// Throws std::invalid_argument on rank-deficient input.
IntBasis hnf(const IntBasis& basis);

// True iff the two bases generate the same sublattice of Z^d (exact).
bool same_lattice(const IntBasis& a, const IntBasis& b);

// True iff v lies in the lattice spanned by basis (exact membership).
bool lattice_contains(const IntBasis& basis, const VecZ& v);

// LLL reduction of the integer basis under a positive-definite rational
// Gram form. Returns a basis of the same lattice satisfying the Lovasz
// condition with parameter delta.
IntBasis lll_reduce(const IntBasis& basis, double delta = 0.99);

// Same, but reducing with respect to gram = E^T E for an embedding E
// given exactly.
MatZ lll_reduce_gram(const MatQ& gram, double delta = 0.99);

// All nonzero integer vectors x (up to sign, first nonzero coord > 0) with
// x^T gram x <= bound, for gram positive definite rational. Throws
// BudgetExceeded when more than `budget` candidates are touched.
std::vector<VecZ> short_vectors(const MatQ& gram, const Rat& bound,
                                long budget = 1000000);

// Saturated basis (columns) of {v in Z^n : a v = 0}; columns of the result
// span the full integer kernel, not a finite-index subgroup.
MatZ kernel_integer(const MatZ& a);

} // namespace homflow

#endif
