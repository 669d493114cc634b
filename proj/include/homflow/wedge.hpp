#ifndef HOMFLOW_WEDGE_HPP
#define HOMFLOW_WEDGE_HPP

#include "homflow/rational.hpp"

namespace homflow {

// Sorted i-subsets of {0,..,d-1} in lexicographic order; the coordinate
// basis of the i-th exterior power.
class SubsetBasis {
public:
  SubsetBasis(int d, int degree);

  int dim() const { return static_cast<int>(subsets_.size()); }
  int degree() const { return degree_; }
  int ambient() const { return d_; }
  const std::vector<int>& subset(int index) const { return subsets_[index]; }
  // index of a sorted subset
  int index_of(const std::vector<int>& s) const;
  // sign-tracked index of an arbitrary tuple; returns {sign, index},
  // sign = 0 when the tuple has a repeat
  std::pair<int, int> index_of_tuple(std::vector<int> tuple) const;

  static long binomial(int n, int k);

private:
  int d_, degree_;
  std::vector<std::vector<int>> subsets_;
};

struct Multivector {
  int d = 0;
  int degree = 0;
  VecQ coords; // indexed by SubsetBasis(d, degree)

  bool is_zero() const {
    for (Eigen::Index i = 0; i < coords.size(); ++i)
      if (coords(i) != 0) return false;
    return true;
  }
  double norm() const { return to_double(coords).norm(); }
};

// Exterior product of rational vectors in R^d (all of size d).
// Throws std::invalid_argument on dimension mismatch or count > d.
Multivector wedge(const std::vector<VecQ>& vectors);

Multivector wedge(const Multivector& a, const Multivector& b);

// i-th compound matrix: action of m on the i-th exterior power in the
// sorted-subset basis (entries are i x i minors).
MatQ compound_matrix(const MatQ& m, int degree);
MatD compound_matrix(const MatD& m, int degree);

// Derivation (Lie-algebra) action of m on the i-th exterior power:
// a (sum over slots) rather than a product over slots.
MatQ derivation_matrix(const MatQ& m, int degree);

} // namespace homflow

#endif
