#ifndef HOMFLOW_MONOMIALS_HPP
#define HOMFLOW_MONOMIALS_HPP

#include "homflow/exact_lattice.hpp"
#include "homflow/wedge.hpp"

namespace homflow {

// A primitive rank-i subgroup of a lattice B Z^d, carried as integer
// generator coordinates in the Z^d frame together with its Pluecker vector.
struct PrimitiveMonomial {
  MatZ generators;     // d x i, columns generate the subgroup (frame coords)
  VecZ pluecker;       // integer wedge coordinates in the Z^d frame, gcd 1
  Multivector wedge;   // embedded wedge: compound(B, i) * pluecker
  double norm = 0;     // embedded euclidean norm
  int degree = 0;
};

// Every primitive rank-i subgroup of the lattice basis*Z^d whose embedded
// wedge norm is <= norm_bound, one representative per +- pair, ordered
// lexicographically by the HNF of the generators. Throws BudgetExceeded.
std::vector<PrimitiveMonomial> enumerate_primitive_monomials(
    const MatQ& basis, int degree, double norm_bound, long budget = 1000000);

// Same, but with the quadratic form on integer Pluecker coordinates supplied
// by the caller (e.g. a flowed metric). norms are measured in that form;
// wedge fields still carry the unflowed embedding.
std::vector<PrimitiveMonomial> enumerate_primitive_monomials_gram(
    const MatQ& basis, int degree, const MatQ& gram, const Rat& bound2,
    long budget = 1000000);

// True iff the integer Pluecker vector is decomposable (a pure wedge).
bool is_decomposable(const VecZ& pluecker, int d, int degree);

// Naive oracle: wedges of all i-tuples of integer vectors with entries in
// [-entry_bound, entry_bound], filtered to primitive subgroups below the
// norm bound. For cross-checking the enumerator on small instances.
std::vector<PrimitiveMonomial> brute_force_monomials(const MatQ& basis,
                                                     int degree,
                                                     double norm_bound,
                                                     int entry_bound);

} // namespace homflow

#endif
