#include "homflow/heights.hpp"

#include "homflow/plane.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace homflow {

namespace {

// exact squared euclidean norm of a rational vector
Rat norm2_exact(const VecQ& v) {
  Rat out = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += v(i) * v(i);
  return out;
}

// exact rational power eps^k for integer k >= 0 of a double epsilon
Rat rat_pow(const Rat& base, long k) {
  Rat out = 1;
  for (long i = 0; i < k; ++i) out *= base;
  return out;
}

} // namespace

HeightEvaluator::HeightEvaluator(Sl2Triple triple, HeightConfig cfg)
    : triple_(std::move(triple)), cfg_(cfg) {
  const int d = triple_.dim();
  decomps_.reserve(d - 1);
  for (int i = 1; i < d; ++i) decomps_.push_back(decompose(triple_, i));
  gaps_.assign(d - 1, -1.0);
}

const RepDecomposition& HeightEvaluator::decomposition(int degree) const {
  if (degree < 1 || degree >= dim())
    throw std::domain_error("heights: degree must satisfy 0 < i < d");
  return decomps_[degree - 1];
}

double HeightEvaluator::projector_gap(int degree) const {
  const RepDecomposition& dec = decomposition(degree);
  double& cached = gaps_[degree - 1];
  if (cached > 0) return cached;
  std::vector<MatD> projs;
  for (const auto& c : dec.isotypic) projs.push_back(to_double(c.projector));
  std::mt19937_64 rng(0x9e3779b9u + degree);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = static_cast<int>(dec.dim_total);
  double worst = 1.0;
  for (int trial = 0; trial < 2000; ++trial) {
    VecD v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    v.normalize();
    double best = 0;
    for (const auto& p : projs) best = std::max(best, (p * v).norm());
    worst = std::min(worst, best);
  }
  cached = 0.5 * worst; // sampled minimum, halved as the soundness margin
  return cached;
}

HeightValue HeightEvaluator::phi(const Multivector& v, double flow_t) const {
  return phi_impl(v.degree, v.coords, flow_t, nullptr);
}

HeightValue HeightEvaluator::phi_impl(int degree, const VecQ& coords, double flow_t,
                                      const PrimitiveMonomial* src) const {
  const RepDecomposition& dec = decomposition(degree);
  bool zero = true;
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    if (coords(i) != 0) { zero = false; break; }
  if (zero) throw std::invalid_argument("phi: zero multivector");

  std::vector<long> weights;
  if (flow_t != 0.0) {
    if (!triple_.h0_diagonal())
      throw std::invalid_argument("phi: flowed evaluation needs a diagonal H0");
    auto h0w = triple_.h0_weights();
    SubsetBasis sb(dim(), degree);
    weights.resize(sb.dim());
    for (int s = 0; s < sb.dim(); ++s) {
      long w = 0;
      for (int j : sb.subset(s)) w += h0w[j];
      weights[static_cast<size_t>(s)] = w;
      if (std::fabs(2.0 * flow_t * w) > 600.0)
        throw std::overflow_error(
            "phi: flow factor exceeds double range; extended precision required");
    }
  }

  const long di = HeightConfig::delta_i(degree, dim());
  Rat eps(cfg_.epsilon);
  Rat cutoff2 = rat_pow(eps, 2 * di);

  // cutoff branch on the trivial projection (flow-invariant)
  const IsotypicComponent* triv = dec.component(0);
  if (triv) {
    VecQ p0 = triv->projector * coords;
    if (norm2_exact(p0) >= cutoff2) {
      HeightValue out;
      out.log_value = -HUGE_VAL;
      if (src) out.witness = *src;
      return out;
    }
  }

  // flowed log-norm of an exact vector
  auto flowed_lognorm = [&](const VecQ& w) -> double {
    double acc = -HUGE_VAL;
    for (Eigen::Index s = 0; s < w.size(); ++s) {
      if (w(s) == 0) continue;
      double term = 2.0 * log_abs(w(s));
      if (flow_t != 0.0) term += 2.0 * flow_t * weights[static_cast<size_t>(s)];
      acc = log_add_exp(acc, term);
    }
    return 0.5 * acc; // -inf for the zero vector
  };

  const double log_eps = std::log(cfg_.epsilon);
  HeightValue out;
  out.log_value = HUGE_VAL;
  bool any = false;
  for (const auto& comp : dec.isotypic) {
    if (comp.lambda == 0) continue;
    VecQ p = comp.projector * coords;
    double ln = flowed_lognorm(p);
    if (ln == -HUGE_VAL) continue; // vanishing projection contributes +inf
    any = true;
    double cand = (static_cast<double>(di) / comp.lambda) * log_eps - ln / comp.lambda;
    if (cand < out.log_value) {
      out.log_value = cand;
      out.attained_lambda = comp.lambda;
    }
  }
  if (!any) out.log_value = HUGE_VAL; // all nonzero-weight projections vanish
  if (src) out.witness = *src;
  return out;
}

HeightValue HeightEvaluator::degree_height(const MatQ& basis, int degree, double flow_t,
                                           double global_log_max) const {
  const int d = dim();
  const RepDecomposition& dec = decomposition(degree);
  const long di = HeightConfig::delta_i(degree, d);
  long delta_max = 0;
  for (const auto& c : dec.isotypic) delta_max = std::max(delta_max, c.lambda);

  // flowed quadratic form on integer Pluecker coordinates
  MatQ embed = compound_matrix(basis, degree);
  MatQ gram;
  std::vector<long> weights;
  if (flow_t == 0.0) {
    gram = embed.transpose() * embed;
  } else {
    if (!triple_.h0_diagonal())
      throw std::invalid_argument("lattice_height: flowed evaluation needs diagonal H0");
    auto h0w = triple_.h0_weights();
    SubsetBasis sb(d, degree);
    MatQ scaled = embed;
    for (int s = 0; s < sb.dim(); ++s) {
      long w = 0;
      for (int j : sb.subset(s)) w += h0w[j];
      if (std::fabs(2.0 * flow_t * w) > 600.0)
        throw std::overflow_error(
            "lattice_height: flow factor exceeds double range; extended precision required");
      Rat factor(std::exp(flow_t * w)); // dyadic rational of the double
      scaled.row(s) *= factor;
    }
    gram = scaled.transpose() * scaled;
  }

  auto cert_radius_log = [&](double log_f) -> double {
    // any monomial with phi >= f has flowed norm at most
    // eps^{delta_i} * max(1, f^{-delta_max}) / gap
    return di * std::log(cfg_.epsilon) + std::max(0.0, -delta_max * log_f) -
           std::log(projector_gap(degree));
  };

  double bound = cfg_.enum_policy.initial_norm_bound;
  HeightValue best;
  best.log_value = -HUGE_VAL;
  while (true) {
    Rat b2(bound);
    b2 *= Rat(bound);
    std::vector<PrimitiveMonomial> ms;
    try {
      ms = enumerate_primitive_monomials_gram(basis, degree, gram, b2,
                                              cfg_.enum_policy.budget);
    } catch (const BudgetExceeded& e) {
      throw HeightBudgetError(std::string("lattice_height: ") + e.what(), best);
    }
    for (const auto& m : ms) {
      HeightValue hv = phi_impl(degree, m.wedge.coords, flow_t, &m);
      if (hv.log_value > best.log_value) best = hv;
      if (best.is_infinite()) return best;
    }
    double flog = std::max(best.log_value, global_log_max);
    if (flog > -HUGE_VAL && std::log(bound) >= cert_radius_log(flog)) break;
    bound *= cfg_.enum_policy.growth_factor;
  }
  return best;
}

HeightValue HeightEvaluator::lattice_height(const MatQ& basis, double flow_t) const {
  const int d = dim();
  if (basis.rows() != d || basis.cols() != d)
    throw std::invalid_argument("lattice_height: basis must be d x d");
  Rat det = det_exact(basis);
  if (det != 1 && det != -1)
    throw std::invalid_argument("lattice_height: basis is not unimodular");

  HeightValue best;
  best.log_value = -HUGE_VAL;
  for (int degree = 1; degree < d; ++degree) {
    HeightValue hv = degree_height(basis, degree, flow_t, best.log_value);
    if (hv.log_value > best.log_value) best = hv;
    if (best.is_infinite()) return best;
  }
  return best;
}

ComponentReport HeightEvaluator::count_components_above(const MatQ& basis,
                                                        const MatQ& direction,
                                                        double T, double M,
                                                        int grid_pow) const {
  if (T <= 0 || M <= 0) throw std::invalid_argument("count_components_above: T, M > 0");
  const int d = dim();
  // direction must be nilpotent (a point of the expanding cone)
  {
    MatQ p = direction;
    for (int k = 1; k < d; ++k) p = p * direction;
    bool zero = true;
    for (Eigen::Index i = 0; i < p.rows() && zero; ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j)
        if (p(i, j) != 0) { zero = false; break; }
    if (!zero)
      throw std::invalid_argument("count_components_above: direction is not nilpotent");
  }

  auto u_at = [&](const Rat& s) {
    // exp(s * direction) exactly
    MatQ term = MatQ::Identity(d, d);
    MatQ sum = term;
    Rat fact = 1;
    for (int k = 1; k <= d; ++k) {
      term = term * direction;
      bool zero = true;
      for (Eigen::Index i = 0; i < term.rows() && zero; ++i)
        for (Eigen::Index j = 0; j < term.cols(); ++j)
          if (term(i, j) != 0) { zero = false; break; }
      if (zero) break;
      fact *= k;
      Rat sk = 1;
      for (int p = 0; p < k; ++p) sk *= s;
      sum += term * (sk / fact);
    }
    return MatQ(sum * basis);
  };

  const double logM = std::log(M);
  const long n = 1L << grid_pow;
  std::vector<bool> above(static_cast<size_t>(n) + 1);
  std::set<std::pair<int, std::string>> witness_keys;
  std::vector<PrimitiveMonomial> witnesses;
  Rat Tq(T);

  // the plane admits the exact shortest-vector route; higher dimensions go
  // through the certified enumeration
  const bool planar = d == 2 && triple_.h0_diagonal() && triple_.H0(0, 0) == 1 &&
                      triple_.H0(1, 1) == -1;
  MatZ hint = MatZ::Identity(2, 2);
  auto log_f_at = [&](const Rat& s) -> double {
    if (planar) return plane_log_height(u_at(s), Rat(1), cfg_.epsilon, &hint);
    return lattice_height(u_at(s)).log_value;
  };
  auto witness_at = [&](const Rat& s) {
    HeightValue hv = lattice_height(u_at(s));
    if (hv.witness) {
      std::string key;
      for (Eigen::Index i = 0; i < hv.witness->pluecker.size(); ++i)
        key += hv.witness->pluecker(i).get_str() + ",";
      if (witness_keys.insert({hv.witness->degree, key}).second)
        witnesses.push_back(*hv.witness);
    }
  };

  for (long j = 0; j <= n; ++j) {
    Rat s = Tq * make_rat(2 * j - n, n);
    above[static_cast<size_t>(j)] = log_f_at(s) > logM;
    if (above[static_cast<size_t>(j)] && !planar) witness_at(s);
  }

  // refine each boundary crossing by bisection
  auto refine = [&](Rat lo, Rat hi, bool lo_above) {
    double width_target = 1e-9 * T;
    while (to_double(Rat(hi - lo)) > width_target) {
      Rat mid = (lo + hi) / 2;
      bool mid_above = log_f_at(mid) > logM;
      if (mid_above == lo_above)
        lo = mid;
      else
        hi = mid;
    }
    return to_double(Rat((lo + hi) / 2));
  };

  ComponentReport rep;
  long j = 0;
  while (j <= n) {
    if (!above[static_cast<size_t>(j)]) { ++j; continue; }
    long k = j;
    while (k + 1 <= n && above[static_cast<size_t>(k + 1)]) ++k;
    double left = -T + 2.0 * T * j / n;
    double right = -T + 2.0 * T * k / n;
    if (j > 0) left = refine(Tq * make_rat(2 * (j - 1) - n, n), Tq * make_rat(2 * j - n, n), false);
    if (k < n) right = refine(Tq * make_rat(2 * k - n, n), Tq * make_rat(2 * (k + 1) - n, n), true);
    rep.intervals.emplace_back(left, right);
    ++rep.count;
    // one witness probe per component keeps the certificate honest and cheap
    if (planar) witness_at(Tq * make_rat(2 * ((j + k) / 2) - n, n));
    j = k + 1;
  }

  // certified component bound from the witness polynomials: the squared
  // norm of u_s w in the lambda component is a polynomial of degree
  // 2*lambda, so its sublevel set has at most lambda+1 intervals
  for (const auto& w : witnesses) {
    const RepDecomposition& dec = decomposition(w.degree);
    long sum_delta = 0, top = 0;
    for (const auto& c : dec.isotypic) {
      if (c.lambda == 0) continue;
      VecQ p = c.projector * w.wedge.coords;
      bool nonzero = false;
      for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p(i) != 0) { nonzero = true; break; }
      if (nonzero) {
        sum_delta += c.lambda;
        top = std::max(top, c.lambda);
      }
    }
    rep.certified_component_bound += 1 + sum_delta;
    rep.max_witness_poly_degree = std::max(rep.max_witness_poly_degree, 2 * top);
  }
  return rep;
}

HeightValue phi_eps(const RepDecomposition& decomp, const Multivector& v,
                    const HeightConfig& cfg) {
  if (v.degree <= 0 || v.degree >= v.d)
    throw std::domain_error("phi_eps: degree must satisfy 0 < i < d");
  if (decomp.degree != v.degree || decomp.d != v.d)
    throw std::invalid_argument("phi_eps: decomposition does not match the multivector");
  bool zero = v.is_zero();
  if (zero) throw std::invalid_argument("phi_eps: zero multivector");

  const long di = HeightConfig::delta_i(v.degree, v.d);
  Rat eps(cfg.epsilon);
  Rat cutoff2 = 1;
  for (long k = 0; k < 2 * di; ++k) cutoff2 *= eps;

  const IsotypicComponent* triv = decomp.component(0);
  if (triv) {
    VecQ p0 = triv->projector * v.coords;
    if (norm2_exact(p0) >= cutoff2) {
      HeightValue out;
      out.log_value = -HUGE_VAL;
      return out;
    }
  }
  HeightValue out;
  out.log_value = HUGE_VAL;
  const double log_eps = std::log(cfg.epsilon);
  for (const auto& comp : decomp.isotypic) {
    if (comp.lambda == 0) continue;
    VecQ p = comp.projector * v.coords;
    Rat n2 = norm2_exact(p);
    if (n2 == 0) continue;
    double cand = (static_cast<double>(di) / comp.lambda) * log_eps -
                  0.5 * log_abs(n2) / comp.lambda;
    if (cand < out.log_value) {
      out.log_value = cand;
      out.attained_lambda = comp.lambda;
    }
  }
  return out;
}

HeightValue f_eps(const MatQ& basis, const Sl2Triple& triple, const HeightConfig& cfg) {
  HeightEvaluator ev(triple, cfg);
  return ev.lattice_height(basis);
}

double calibrate_epsilon(const Sl2Triple& triple, HeightConfig cfg, const MatQ& basis) {
  for (int halving = 0; halving <= 20; ++halving) {
    HeightEvaluator ev(triple, cfg);
    if (!ev.lattice_height(basis).is_infinite()) return cfg.epsilon;
    cfg.epsilon /= 2;
  }
  throw std::runtime_error("calibrate_epsilon: still infinite after 20 halvings");
}

} // namespace homflow
