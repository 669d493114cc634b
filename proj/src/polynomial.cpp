#include "homflow/polynomial.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace homflow {

int PolyQ::degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (coeffs[i] != 0) return i;
  return -1;
}

void PolyQ::trim() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Rat PolyQ::eval(const Rat& x) const {
  Rat acc = 0;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) acc = acc * x + coeffs[i];
  return acc;
}

double PolyQ::eval(double x) const {
  double acc = 0;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    acc = acc * x + to_double(coeffs[i]);
  return acc;
}

PolyQ PolyQ::derivative() const {
  PolyQ out;
  if (coeffs.size() <= 1) return out;
  out.coeffs.resize(coeffs.size() - 1);
  for (size_t i = 1; i < coeffs.size(); ++i) out.coeffs[i - 1] = Rat(static_cast<long>(i)) * coeffs[i];
  out.trim();
  return out;
}

PolyQ poly_sub(const PolyQ& a, const PolyQ& b) {
  PolyQ out;
  out.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Rat(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i) out.coeffs[i] += a.coeffs[i];
  for (size_t i = 0; i < b.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  out.trim();
  return out;
}

PolyQ poly_scale(const PolyQ& a, const Rat& c) {
  PolyQ out = a;
  for (auto& x : out.coeffs) x *= c;
  out.trim();
  return out;
}

PolyQ poly_rem(const PolyQ& a, const PolyQ& b) {
  if (b.is_zero()) throw std::invalid_argument("poly_rem: division by zero polynomial");
  PolyQ r = a;
  r.trim();
  const int db = b.degree();
  while (r.degree() >= db) {
    const int dr = r.degree();
    Rat f = r.coeffs[dr] / b.coeffs[db];
    for (int i = 0; i <= db; ++i) r.coeffs[dr - db + i] -= f * b.coeffs[i];
    r.coeffs[dr] = 0;
    r.trim();
  }
  return r;
}

namespace {

std::vector<PolyQ> sturm_chain(const PolyQ& p) {
  std::vector<PolyQ> chain;
  PolyQ p0 = p;
  p0.trim();
  chain.push_back(p0);
  PolyQ p1 = p0.derivative();
  if (p1.is_zero()) return chain;
  chain.push_back(p1);
  while (true) {
    PolyQ r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(poly_scale(r, Rat(-1)));
  }
  return chain;
}

int sign_of(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

int sign_changes(const std::vector<PolyQ>& chain, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = sign_of(q.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int count_roots_chain(const std::vector<PolyQ>& chain, const Rat& a, const Rat& b) {
  return sign_changes(chain, a) - sign_changes(chain, b);
}

} // namespace

int count_roots(const PolyQ& p, const Rat& a, const Rat& b) {
  PolyQ q = p;
  q.trim();
  if (q.is_zero()) throw std::invalid_argument("count_roots: zero polynomial");
  return count_roots_chain(sturm_chain(q), a, b);
}

std::vector<std::pair<Rat, Rat>> isolate_roots(const PolyQ& p, const Rat& a, const Rat& b,
                                               const Rat& width) {
  PolyQ q = p;
  q.trim();
  if (q.is_zero()) throw std::invalid_argument("isolate_roots: zero polynomial");
  auto chain = sturm_chain(q);

  std::vector<std::pair<Rat, Rat>> out;
  // nudge endpoints that are themselves roots
  Rat lo = a, hi = b;
  Rat pad = (b - a) / 1000000;
  while (q.eval(lo) == 0) lo -= pad;
  while (q.eval(hi) == 0) hi += pad;

  std::vector<std::pair<Rat, Rat>> stack{{lo, hi}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    int n = count_roots_chain(chain, x, y);
    if (n == 0) continue;
    if (n == 1 && y - x <= width) {
      out.emplace_back(x, y);
      continue;
    }
    Rat mid = (x + y) / 2;
    while (q.eval(mid) == 0) mid += (y - x) / 65536; // keep splits off roots
    stack.push_back({x, mid});
    stack.push_back({mid, y});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& u, const auto& v) { return u.first < v.first; });
  return out;
}

RatInterval sublevel_measure(const PolyQ& p, const Rat& a, const Rat& b, const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("sublevel_measure: eps must be positive");
  PolyQ q = p;
  q.trim();
  if (q.is_zero()) throw std::invalid_argument("sublevel_measure: zero polynomial");

  Rat width = (b - a) / rat_pow_2(62);
  PolyQ minus = q, plus = q;
  if (minus.coeffs.empty()) minus.coeffs.push_back(Rat(0));
  if (plus.coeffs.empty()) plus.coeffs.push_back(Rat(0));
  minus.coeffs[0] -= eps; // p - eps
  plus.coeffs[0] += eps;  // p + eps
  minus.trim();
  plus.trim();

  std::vector<std::pair<Rat, Rat>> cuts;
  if (!minus.is_zero())
    for (auto& r : isolate_roots(minus, a, b, width)) cuts.push_back(r);
  if (!plus.is_zero())
    for (auto& r : isolate_roots(plus, a, b, width)) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end(),
            [](const auto& u, const auto& v) { return u.first < v.first; });

  // walk the gaps between cut midpoints; the sign of |p| - eps is constant there
  std::vector<Rat> mids;
  mids.push_back(a);
  for (auto& c : cuts) mids.push_back((c.first + c.second) / 2);
  mids.push_back(b);

  Rat measure = 0;
  long included_boundaries = 0;
  for (size_t i = 0; i + 1 < mids.size(); ++i) {
    if (mids[i + 1] <= mids[i]) continue;
    Rat probe = (mids[i] + mids[i + 1]) / 2;
    if (rat_abs(q.eval(probe)) < eps) {
      measure += mids[i + 1] - mids[i];
      included_boundaries += 2;
    }
  }
  RatInterval out;
  Rat slack = width * included_boundaries;
  out.lo = measure - slack;
  if (out.lo < 0) out.lo = 0;
  out.hi = measure + slack;
  if (out.hi > b - a) out.hi = b - a;
  return out;
}

RatInterval sup_abs(const PolyQ& p, const Rat& a, const Rat& b) {
  PolyQ q = p;
  q.trim();
  if (q.is_zero()) return {Rat(0), Rat(0)};
  Rat width = (b - a) / rat_pow_2(62);

  std::vector<Rat> candidates{a, b};
  PolyQ dq = q.derivative();
  if (!dq.is_zero())
    for (auto& r : isolate_roots(dq, a, b, width)) {
      candidates.push_back(r.first);
      candidates.push_back(r.second);
    }
  Rat best = 0;
  for (const auto& x : candidates) {
    Rat v = rat_abs(q.eval(x));
    if (v > best) best = v;
  }
  // Lipschitz slack over the isolation width: |p'| is bounded on [a,b] by
  // the coefficient sum at the larger endpoint scale
  Rat scale = rat_abs(a) > rat_abs(b) ? rat_abs(a) : rat_abs(b);
  if (scale < 1) scale = 1;
  Rat lip = 0, pw = 1;
  for (size_t i = 0; i < dq.coeffs.size(); ++i) {
    lip += rat_abs(dq.coeffs[i]) * pw;
    pw *= scale;
  }
  RatInterval out;
  out.lo = best;
  out.hi = best + lip * width;
  return out;
}

double rho_estimate(int k) {
  static std::map<int, double> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;

  // grid minimization of sup_{[-1,1]} |p| over the coefficient sup-sphere
  double worst = HUGE_VAL;
  std::vector<double> c(static_cast<size_t>(k) + 1, 0.0);
  const int grid = (k <= 2) ? 9 : (k == 3 ? 7 : 5);
  std::function<void(int)> rec = [&](int pos) {
    if (pos == k + 1) {
      double mx = 0;
      for (double x : c) mx = std::max(mx, std::fabs(x));
      if (mx < 0.999) return; // stay on the sphere
      double sup = 0;
      for (int i = 0; i <= 256; ++i) {
        double x = -1.0 + 2.0 * i / 256;
        double acc = 0;
        for (int j = k; j >= 0; --j) acc = acc * x + c[static_cast<size_t>(j)];
        sup = std::max(sup, std::fabs(acc));
      }
      worst = std::min(worst, sup);
      return;
    }
    for (int g = 0; g < grid; ++g) {
      c[static_cast<size_t>(pos)] = -1.0 + 2.0 * g / (grid - 1);
      rec(pos + 1);
    }
  };
  rec(0);
  double rho = 0.5 * worst; // sampled minimum, halved as the soundness margin
  cache[k] = rho;
  return rho;
}

CGoodReport cgood_check(const PolyQ& p, const Rat& a, const Rat& b, int k, int levels) {
  PolyQ q = p;
  q.trim();
  if (q.is_zero()) throw std::invalid_argument("cgood_check: zero polynomial");
  if (q.degree() > k) throw std::invalid_argument("cgood_check: degree exceeds k");

  CGoodReport rep;
  rep.k = k;
  rep.C = 2.0 * k * std::pow(k + 1.0, 1.0 / k);
  rep.alpha = 1.0 / k;
  RatInterval sup = sup_abs(q, a, b);
  rep.sup_lo = sup.lo;
  rep.sup_hi = sup.hi;
  rep.all_hold = true;

  // C^k = (2k)^k (k+1) is rational, so the k-th power of the inequality is
  // checked without radicals: measure^k * sup <= C^k * eps * |B|^k
  Rat ck = Rat(k + 1);
  for (int i = 0; i < k; ++i) ck *= Rat(2 * k);
  Rat blen = b - a;
  Rat blen_k = 1;
  for (int i = 0; i < k; ++i) blen_k *= blen;

  for (int j = 1; j <= levels; ++j) {
    CGoodLevel lvl;
    lvl.eps = sup.lo / rat_pow_2(j);
    if (lvl.eps <= 0) {
      lvl.holds = true; // constant-zero sup cannot happen: q nonzero
      rep.levels.push_back(lvl);
      continue;
    }
    RatInterval meas = sublevel_measure(q, a, b, lvl.eps);
    lvl.measure_hi = meas.hi;
    Rat lhs = sup.hi;
    for (int i = 0; i < k; ++i) lhs *= meas.hi;
    Rat rhs = ck * lvl.eps * blen_k;
    lvl.holds = lhs <= rhs;
    if (!lvl.holds) rep.all_hold = false;
    rep.levels.push_back(lvl);
  }

  // lower sup estimate: sup >= rho_k * max |c_i| (sampled rho, halved)
  rep.rho_k = rho_estimate(k);
  Rat maxc = 0;
  for (const auto& c : q.coeffs) maxc = std::max(maxc, rat_abs(c), [](const Rat& u, const Rat& v) { return u < v; });
  rep.lower_sup_holds = to_double(sup.hi) >= rep.rho_k * to_double(maxc);
  return rep;
}

} // namespace homflow
