#ifndef HOMFLOW_GAME_HPP
#define HOMFLOW_GAME_HPP

#include "homflow/contraction.hpp"

#include <random>

namespace homflow {

// Exact interval [lo, lo + width], width > 0
struct GameInterval {
  Rat lo, width;
  Rat hi() const { return lo + width; }
  Rat center() const { return lo + width / 2; }
  bool contains(const GameInterval& other) const {
    return other.lo >= lo && other.hi() <= hi();
  }
};

// Contraction data in dyadic form: the game semigroup acts by
// Phi_t(x) = e^{-sigma t} x with sigma = alpha(1) = 2; choosing
// e^{sigma a} = 2^{a_pow} etc. keeps every interval endpoint rational and the
// flow factors e^{2 t_k} exact integers.
struct GameConfig {
  GameInterval I0{Rat(-1), Rat(2)};
  int t0_pow = 2;  // e^{sigma t0} = 2^{t0_pow}
  int a_pow = 8;   // e^{sigma a}  = 2^{a_pow}
  int b_pow = 2;   // e^{sigma b}  = 2^{b_pow}
  int rounds = 15;
  double log_M = 0;     // certificate threshold on log f_eps
  int grid_pow = 8;     // sampling resolution of interval scans
  double sigma = 2.0;   // alpha(1)

  double a() const { return a_pow * M_LN2 / sigma; }
  double b() const { return b_pow * M_LN2 / sigma; }
  double t0() const { return t0_pow * M_LN2 / sigma; }
  // t_k = t0 + (k-1)(a+b), s_k = t_k + a, in units of log2(e^{sigma t})
  long tk_pow(int k) const { return t0_pow + static_cast<long>(k - 1) * (a_pow + b_pow); }
  long sk_pow(int k) const { return tk_pow(k) + a_pow; }
  double t_k(int k) const { return tk_pow(k) * M_LN2 / sigma; }
  double s_k(int k) const { return sk_pow(k) * M_LN2 / sigma; }
};

struct GameRound {
  int k = 0;
  GameInterval B, A;
  double center_log_height = -HUGE_VAL; // log f at t_{k+1}, curve center of A
  double max_sampled_log_height = -HUGE_VAL; // max over the A-grid at t_{k+1}
  bool alice_stuck = false;
};

struct GameTranscript {
  GameConfig config;
  std::vector<GameRound> rounds;
  GameInterval final_B;        // Bob's last interval B_{K+1}
  bool certificate_ok = false; // all sampled heights <= M every round
  int stuck_events = 0;
  double max_log_height = -HUGE_VAL;
  Rat limit_point;             // center of B_{K+1}
};

struct BobStrategy {
  enum class Kind { Random, AdversarialRational, Scripted } kind = Kind::Random;
  uint64_t seed = 0;
  std::vector<Rat> script; // left endpoints for scripted replay
};

// smallest-denominator rational in the open interval (lo, hi)
Rat stern_brocot_smallest_denominator(const Rat& lo, const Rat& hi);

// fitted threshold a* of the winning strategy:
// alpha(a*) = 20 log(2 c~ C1 C_O^2)/beta + log(10 (N+1))
double fitted_alpha_a_star(double c_tilde, double c1, double c_o, double beta_ch, long n_components);

// fitted certificate threshold M = 40 b~ C1 C_O^2 + M0 + M1 (in f^beta units)
double fitted_game_threshold(double b_tilde, double c1, double c_o, double m0, double m1);

GameTranscript play(const GameConfig& cfg, const FlowSpec& flow,
                    const AdmissibleCurve& curve, const HeightEvaluator& ev,
                    const MatQ& x0, const BobStrategy& bob);

} // namespace homflow

#endif
