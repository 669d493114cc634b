#ifndef HOMFLOW_HEIGHTS_HPP
#define HOMFLOW_HEIGHTS_HPP

#include "homflow/monomials.hpp"
#include "homflow/sl2.hpp"

#include <memory>
#include <optional>

namespace homflow {

struct EnumBoundPolicy {
  double initial_norm_bound = 2.0;
  double growth_factor = 2.0;
  long budget = 1000000;
};

struct HeightConfig {
  double epsilon = 1.0;
  double beta = 0.4;
  EnumBoundPolicy enum_policy;

  static long delta_i(int i, int d) { return static_cast<long>(i) * (d - i); }
};

// Heights are carried in the log domain so cusp excursions far beyond the
// double range stay representable. log_value = -inf encodes 0, +inf infinity.
struct HeightValue {
  double log_value = -HUGE_VAL;
  std::optional<PrimitiveMonomial> witness;
  std::optional<long> attained_lambda;

  double value() const { return std::exp(log_value); }
  bool is_infinite() const { return log_value == HUGE_VAL; }
  bool is_zero() const { return log_value == -HUGE_VAL; }
};

struct HeightBudgetError : std::runtime_error {
  HeightValue partial_max;
  explicit HeightBudgetError(const std::string& what, HeightValue partial)
      : std::runtime_error(what), partial_max(std::move(partial)) {}
};

struct ComponentReport {
  int count = 0;
  std::vector<std::pair<double, double>> intervals;
  // certified bound on how many components any height of this shape can have,
  // from the polynomial degrees of the witness monomials seen along the orbit
  long certified_component_bound = 0;
  long max_witness_poly_degree = 0;
};

// Shared evaluation context: per-degree isotypic decompositions and sampled
// projector gaps for the dominance-radius certificate.
class HeightEvaluator {
public:
  HeightEvaluator(Sl2Triple triple, HeightConfig cfg);

  const Sl2Triple& triple() const { return triple_; }
  const HeightConfig& config() const { return cfg_; }
  HeightConfig& config() { return cfg_; }
  int dim() const { return triple_.dim(); }
  const RepDecomposition& decomposition(int degree) const;
  // sampled lower bound (with 0.5 safety factor) for
  // min_{|v|=1} max_component |pi_c(v)| on the degree-th power
  double projector_gap(int degree) const;

  // phi_eps on an exact multivector, optionally flowed by exp(t H0)
  HeightValue phi(const Multivector& v, double flow_t = 0.0) const;

  // f_eps over all degrees 0 < i < d with a certified enumeration radius.
  // basis columns generate the lattice; flow_t applies exp(t H0) to norms
  // analytically. Throws HeightBudgetError when certification is impossible
  // within the candidate budget.
  HeightValue lattice_height(const MatQ& basis, double flow_t = 0.0) const;

  // {|s| <= T : f(u(sY) x) > M} component count on an adaptive grid
  ComponentReport count_components_above(const MatQ& basis, const MatQ& direction,
                                         double T, double M, int grid_pow = 12) const;

private:
  Sl2Triple triple_;
  HeightConfig cfg_;
  std::vector<RepDecomposition> decomps_;   // index degree-1
  mutable std::vector<double> gaps_;        // sampled projector gaps

  HeightValue phi_impl(int degree, const VecQ& coords, double flow_t,
                       const PrimitiveMonomial* src) const;
  HeightValue degree_height(const MatQ& basis, int degree, double flow_t,
                            double global_log_max) const;
};

// One-off wrappers matching the operation contracts.
HeightValue phi_eps(const RepDecomposition& decomp, const Multivector& v,
                    const HeightConfig& cfg);
HeightValue f_eps(const MatQ& basis, const Sl2Triple& triple, const HeightConfig& cfg);

// Halve epsilon (at most 20 times, starting from cfg.epsilon) until the
// lattice height is finite; returns the calibrated epsilon.
double calibrate_epsilon(const Sl2Triple& triple, HeightConfig cfg, const MatQ& basis);

} // namespace homflow

#endif
