#ifndef HOMFLOW_SL2_HPP
#define HOMFLOW_SL2_HPP

#include "homflow/wedge.hpp"

#include <map>
#include <optional>

namespace homflow {

// An sl2 triple acting on R^d: [H0, Zp] = 2 Zp, [H0, Zm] = -2 Zm,
// [Zp, Zm] = H0, all exact.
struct Sl2Triple {
  MatQ H0, Zplus, Zminus;

  int dim() const { return static_cast<int>(H0.rows()); }
  // eigenvalue functional of the adjoint action on the Zplus line:
  // Ad(exp(t H0)) Zplus = e^{alpha(1) t} Zplus; always 2 for a triple.
  double alpha_rate() const { return 2.0; }
  bool h0_diagonal() const;
  // diagonal of H0 as integers (requires diagonal integer H0)
  std::vector<long> h0_weights() const;
};

struct BlockRepSpec {
  int n = 1;
  MatQ Y; // invertible n x n
};

// Block triple: H0 = diag(I_n, -I_n), Zplus = [[0, Y], [0, 0]],
// Zminus = [[0, 0], [Y^{-1}, 0]]. Throws on singular Y.
Sl2Triple build_triple(const BlockRepSpec& spec);

// Validates bracket identities of an explicit triple; throws on violation.
Sl2Triple build_triple(const MatQ& H0, const MatQ& Zplus, const MatQ& Zminus);

struct IsotypicComponent {
  long lambda = 0;           // highest weight = delta_lambda = lambda(H0)
  long multiplicity = 0;     // number of irreducible summands
  MatQ basis;                // columns span the component
  MatQ projector;            // equivariant projector onto the component
  MatQ top_weight_projector; // projector onto the top-weight subspace inside
};

struct RepDecomposition {
  int d = 0;
  int degree = 0;
  long dim_total = 0;
  std::map<long, MatQ> weight_spaces;       // weight -> basis columns
  std::vector<IsotypicComponent> isotypic;  // sorted by lambda ascending
  MatQ h_action, zp_action, zm_action;      // derivation actions on the power

  const IsotypicComponent* component(long lambda) const;
  long top_lambda() const { return isotypic.empty() ? 0 : isotypic.back().lambda; }
  // projection of v onto the lambda-isotypic part (zero vector if absent)
  VecQ project(long lambda, const VecQ& v) const;
  // projection onto the top-weight lines of the top isotypic component
  VecQ project_top_weight(const VecQ& v) const;
};

// Exact isotypic decomposition of the degree-th exterior power under the
// triple. H0 must act with integer eigenvalues (true for triples from
// build_triple).
RepDecomposition decompose(const Sl2Triple& triple, int degree);

struct GroupElement {
  enum class Kind { FlowTime, Horocycle, General } kind = Kind::General;
  double t = 0;  // flow time for g_t
  double s = 0;  // horocycle parameter for u_s
  MatD image;    // d x d image under the representation
};

GroupElement flow_element(const Sl2Triple& triple, double t);
GroupElement horocycle_element(const Sl2Triple& triple, double s);
GroupElement general_element(const Sl2Triple& triple, const Eigen::Matrix2d& g);

// Action of a group element on a degree-matching multivector (double coords).
VecD act(const GroupElement& g, const VecD& coords, int d, int degree);

// Exact horocycle action for rational s.
VecQ act_horocycle_exact(const Sl2Triple& triple, const Rat& s, const VecQ& coords,
                         int degree);

// e^{lambda_max t} * ||pi_+(v)||: a lower bound for ||g_t v|| (t >= 0).
double highest_weight_floor(const RepDecomposition& decomp, const VecQ& v, double t);

} // namespace homflow

#endif
