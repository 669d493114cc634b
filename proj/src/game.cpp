#include "homflow/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace homflow {

namespace {

MatQ exp_nilpotent_q(const MatQ& n) {
  const int d = static_cast<int>(n.rows());
  MatQ term = MatQ::Identity(d, d);
  MatQ sum = term;
  Rat fact = 1;
  for (int k = 1; k <= d; ++k) {
    term = term * n;
    bool zero = true;
    for (Eigen::Index i = 0; i < term.rows() && zero; ++i)
      for (Eigen::Index j = 0; j < term.cols(); ++j)
        if (term(i, j) != 0) { zero = false; break; }
    if (zero) break;
    fact *= k;
    sum += term / fact;
  }
  return sum;
}

// log f_eps(g_{t} u(phi(s)) x0) with e^{2t} = 2^{pow2} exact. The reduction
// hint is carried across a scan so nearby parameters reduce in O(1) steps.
struct HeightAt {
  const FlowSpec& flow;
  const AdmissibleCurve& curve;
  const HeightEvaluator& ev;
  const MatQ& x0;
  bool planar;
  mutable MatZ hint = MatZ::Identity(2, 2);

  void reset_hint() const { hint = MatZ::Identity(2, 2); }

  double operator()(const Rat& s, long pow2) const {
    MatQ basis = exp_nilpotent_q(curve.value(s)) * x0;
    if (planar) return plane_log_height(basis, rat_pow_2(pow2), ev.config().epsilon, &hint);
    double t = 0.5 * pow2 * M_LN2;
    return ev.lattice_height(basis, t).log_value;
  }
};

} // namespace

namespace {

Int rat_floor(const Rat& x) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return f;
}

// numerator/denominator of the smallest-denominator fraction strictly inside
// (a, b) with 0 <= a < b, by the continued-fraction descent
std::pair<Int, Int> simplest_in(const Rat& a, const Rat& b) {
  Int fb = rat_floor(b);
  if (Rat(fb) > a && Rat(fb) < b) return {fb, Int(1)};
  if (Rat(fb) == b && Rat(fb - 1) > a) return {fb - 1, Int(1)};

  // no integer inside; shift into a unit interval
  Int n = rat_floor(a);
  Rat ax = a - Rat(n), bx = b - Rat(n);
  if (ax == 0) {
    // (0, bx): the smallest q with 1/q < bx
    Int q = rat_floor(1 / bx) + 1;
    Int p = 1;
    return {n * q + p, q};
  }
  auto [p, q] = simplest_in(1 / bx, 1 / ax); // invert the interval
  // q/p lies in (ax, bx)
  return {n * p + q, p};
}

} // namespace

Rat stern_brocot_smallest_denominator(const Rat& lo, const Rat& hi) {
  if (!(lo < hi)) throw std::invalid_argument("stern_brocot: empty interval");
  auto [p, q] = simplest_in(lo, hi);
  Rat out = make_rat(p, q);
  if (!(lo < out && out < hi)) throw std::logic_error("stern_brocot: descent failed");
  return out;
}

double fitted_alpha_a_star(double c_tilde, double c1, double c_o, double beta_ch,
                           long n_components) {
  return 20.0 * std::log(2.0 * c_tilde * c1 * c_o * c_o) / beta_ch +
         std::log(10.0 * (static_cast<double>(n_components) + 1.0));
}

double fitted_game_threshold(double b_tilde, double c1, double c_o, double m0, double m1) {
  return 40.0 * b_tilde * c1 * c_o * c_o + m0 + m1;
}

GameTranscript play(const GameConfig& cfg, const FlowSpec& flow,
                    const AdmissibleCurve& curve, const HeightEvaluator& ev,
                    const MatQ& x0, const BobStrategy& bob) {
  const Sl2Triple& tr = flow.triple;
  HeightAt height{flow, curve, ev, x0,
                  tr.dim() == 2 && tr.h0_diagonal() && tr.H0(0, 0) == 1 &&
                      tr.H0(1, 1) == -1};

  GameTranscript out;
  out.config = cfg;
  std::mt19937_64 rng(bob.seed);
  auto random_unit = [&rng]() {
    // dyadic in [0,1) with 40 bits; exact as a rational
    return make_rat(static_cast<long>(rng() >> 24), 1L << 40);
  };

  const int first_free = static_cast<int>(1.0 / curve.holder_gamma) + 1;
  const long grid = 1L << cfg.grid_pow;

  GameInterval B;
  // Bob opens: B1 = Phi_{t0}(I0) + x1 inside I0
  {
    Rat w = cfg.I0.width / rat_pow_2(cfg.t0_pow);
    Rat slack = cfg.I0.width - w;
    Rat offset;
    switch (bob.kind) {
      case BobStrategy::Kind::Scripted:
        offset = bob.script.at(0) - cfg.I0.lo;
        break;
      case BobStrategy::Kind::AdversarialRational:
        offset = slack / 2;
        break;
      default:
        offset = slack * random_unit();
    }
    B = GameInterval{cfg.I0.lo + offset, w};
  }

  for (int k = 1; k <= cfg.rounds; ++k) {
    GameRound round;
    round.k = k;
    round.B = B;
    height.reset_hint();
    const long next_pow = cfg.tk_pow(k + 1); // flow exponent for the certificate
    Rat wA = cfg.I0.width / rat_pow_2(cfg.sk_pow(k));

    // --- Alice ---
    GameInterval A;
    if (k <= first_free) {
      A = GameInterval{B.lo + (B.width - wA) / 2, wA};
    } else {
      // sample the high set of s -> log f(g_{t_{k+1}} u(phi(s)) x)
      Rat step = B.width / grid;
      std::vector<bool> high(static_cast<size_t>(grid) + 1);
      for (long j = 0; j <= grid; ++j) {
        Rat s = B.lo + step * Rat(j);
        high[static_cast<size_t>(j)] = height(s, next_pow) > cfg.log_M;
      }
      // gaps between components of the high set (closed runs of low samples)
      struct Gap {
        Rat lo, hi;
      };
      std::vector<Gap> gaps;
      long j = 0;
      while (j <= grid) {
        if (high[static_cast<size_t>(j)]) { ++j; continue; }
        long start = j;
        while (j + 1 <= grid && !high[static_cast<size_t>(j + 1)]) ++j;
        Rat lo = B.lo + step * Rat(start);
        Rat hi = B.lo + step * Rat(j);
        // refine the outer edges half a step so the gap is certified low
        gaps.push_back(Gap{lo, hi});
        j += 1;
      }
      // leftmost gap of maximal length that fits A
      int pick = -1;
      Rat best_len = -1;
      for (size_t g = 0; g < gaps.size(); ++g) {
        Rat len = gaps[g].hi - gaps[g].lo;
        if (len >= wA && len > best_len) {
          best_len = len;
          pick = static_cast<int>(g);
        }
      }
      if (pick < 0) {
        // Alice is stuck: take the interval minimizing the sampled maximum
        round.alice_stuck = true;
        ++out.stuck_events;
        Rat best_lo = B.lo;
        double best_max = HUGE_VAL;
        const long offsets = 64;
        Rat ostep = (B.width - wA) / offsets;
        for (long o = 0; o <= offsets; ++o) {
          Rat lo = B.lo + ostep * Rat(o);
          double mx = -HUGE_VAL;
          for (long j2 = 0; j2 <= 16; ++j2) {
            Rat s = lo + wA * make_rat(j2, 16);
            mx = std::max(mx, height(s, next_pow));
          }
          if (mx < best_max) {
            best_max = mx;
            best_lo = lo;
          }
        }
        A = GameInterval{best_lo, wA};
      } else {
        A = GameInterval{gaps[static_cast<size_t>(pick)].lo +
                             (gaps[static_cast<size_t>(pick)].hi -
                              gaps[static_cast<size_t>(pick)].lo - wA) /
                                 2,
                         wA};
      }
    }
    if (!B.contains(A)) throw std::logic_error("game: A_k escaped B_k");
    round.A = A;

    // certificate scan over A at t_{k+1}
    {
      double mx = -HUGE_VAL;
      for (long j = 0; j <= grid; ++j) {
        Rat s = A.lo + A.width * make_rat(j, grid);
        mx = std::max(mx, height(s, next_pow));
      }
      round.max_sampled_log_height = mx;
      round.center_log_height = height(A.center(), next_pow);
      out.max_log_height = std::max(out.max_log_height, mx);
    }
    out.rounds.push_back(round);

    // --- Bob ---
    Rat wB = cfg.I0.width / rat_pow_2(cfg.tk_pow(k + 1));
    Rat slack = A.width - wB;
    Rat lo;
    switch (bob.kind) {
      case BobStrategy::Kind::Scripted:
        lo = bob.script.at(static_cast<size_t>(k));
        break;
      case BobStrategy::Kind::AdversarialRational: {
        Rat target = stern_brocot_smallest_denominator(A.lo, A.hi());
        lo = target - wB / 2;
        if (lo < A.lo) lo = A.lo;
        if (lo + wB > A.hi()) lo = A.hi() - wB;
        break;
      }
      default:
        lo = A.lo + slack * random_unit();
    }
    GameInterval Bnext{lo, wB};
    if (!A.contains(Bnext)) throw std::logic_error("game: B_{k+1} escaped A_k");
    B = Bnext;
  }

  out.final_B = B;
  out.limit_point = B.center();
  out.certificate_ok = out.stuck_events == 0 && out.max_log_height <= cfg.log_M + 1e-12;
  return out;
}

} // namespace homflow
