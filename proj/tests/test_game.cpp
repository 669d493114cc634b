#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "homflow/game.hpp"
#include "homflow/plane.hpp"

using namespace homflow;

namespace {

struct GameLab {
  Sl2Triple triple = build_triple(BlockRepSpec{1, MatQ::Identity(1, 1)});
  FlowSpec flow = make_flow(triple);
  AdmissibleCurve curve = line_curve(triple);
  HeightEvaluator ev{triple, [] {
                       HeightConfig c;
                       c.epsilon = 1.0;
                       return c;
                     }()};
};

GameConfig small_config() {
  GameConfig cfg;
  cfg.t0_pow = 2;
  cfg.a_pow = 8;
  cfg.b_pow = 2;
  cfg.rounds = 10;
  cfg.log_M = std::log(64.0);
  cfg.grid_pow = 7;
  return cfg;
}

} // namespace

TEST_CASE("stern_brocot: textbook smallest denominators") {
  CHECK(stern_brocot_smallest_denominator(make_rat(3, 10), make_rat(34, 100)) ==
        make_rat(1, 3));
  CHECK(stern_brocot_smallest_denominator(make_rat(1, 3), make_rat(1, 2)) ==
        make_rat(2, 5));
  CHECK(stern_brocot_smallest_denominator(make_rat(5, 2), make_rat(7, 2)) == Rat(3));
  CHECK(stern_brocot_smallest_denominator(make_rat(-1, 3), make_rat(1, 7)) == Rat(0));
  Rat r = stern_brocot_smallest_denominator(make_rat(415, 1000), make_rat(417, 1000));
  CHECK(r == make_rat(5, 12));
}

TEST_CASE("game: diameters and nesting laws hold exactly") {
  GameLab lab;
  GameConfig cfg = small_config();
  cfg.rounds = 5;
  BobStrategy bob;
  bob.seed = 42;
  GameTranscript tr = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
  REQUIRE(tr.rounds.size() == 5);
  for (const auto& round : tr.rounds) {
    // diam(B_k) = e^{-sigma t_k} |I0| and diam(A_k) = e^{-sigma s_k} |I0|
    CHECK(round.B.width == Rat(cfg.I0.width / rat_pow_2(cfg.tk_pow(round.k))));
    CHECK(round.A.width == Rat(cfg.I0.width / rat_pow_2(cfg.sk_pow(round.k))));
    CHECK(round.B.contains(round.A));
  }
  for (size_t i = 1; i < tr.rounds.size(); ++i)
    CHECK(tr.rounds[i - 1].A.contains(tr.rounds[i].B));
  // the limit point lies in every interval
  for (const auto& round : tr.rounds) {
    CHECK(tr.limit_point >= round.B.lo);
    CHECK(tr.limit_point <= round.B.hi());
  }
}

TEST_CASE("game: single-round exchange is consistent") {
  GameLab lab;
  GameConfig cfg = small_config();
  cfg.rounds = 1;
  BobStrategy bob;
  bob.seed = 1;
  GameTranscript tr = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
  CHECK(tr.rounds.size() == 1);
  CHECK(cfg.I0.contains(tr.rounds[0].B));
}

TEST_CASE("game: fixed seeds reproduce and scripted replay is bit-exact") {
  GameLab lab;
  GameConfig cfg = small_config();
  BobStrategy bob;
  bob.seed = 7;
  GameTranscript a = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
  GameTranscript b = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
  CHECK(a.limit_point == b.limit_point);
  CHECK(a.max_log_height == b.max_log_height);

  BobStrategy scripted;
  scripted.kind = BobStrategy::Kind::Scripted;
  for (const auto& round : a.rounds) scripted.script.push_back(round.B.lo);
  scripted.script.push_back(a.final_B.lo);
  GameTranscript c = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), scripted);
  REQUIRE(c.rounds.size() == a.rounds.size());
  for (size_t k = 0; k < a.rounds.size(); ++k) {
    CHECK(c.rounds[k].B.lo == a.rounds[k].B.lo);
    CHECK(c.rounds[k].A.lo == a.rounds[k].A.lo);
  }
  CHECK(c.limit_point == a.limit_point);
}

TEST_CASE("game: adversarial Bob tracks the smallest-denominator rational") {
  GameLab lab;
  GameConfig cfg = small_config();
  cfg.rounds = 6;
  BobStrategy bob;
  bob.kind = BobStrategy::Kind::AdversarialRational;
  GameTranscript tr = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
  REQUIRE(tr.rounds.size() == 6);
  for (size_t k = 0; k + 1 < tr.rounds.size(); ++k) {
    const GameInterval& A = tr.rounds[k].A;
    const GameInterval& Bn = tr.rounds[k + 1].B;
    Rat target = stern_brocot_smallest_denominator(A.lo, A.hi());
    // Bob's next interval contains the target unless clamping interfered
    bool contains = Bn.lo <= target && target <= Bn.hi();
    CHECK(contains);
  }
}

TEST_CASE("game: certificate holds with a sane threshold, and the limit orbit is bounded") {
  GameLab lab;
  GameConfig cfg = small_config();
  cfg.rounds = 10;
  for (uint64_t seed : {3ULL, 11ULL, 19ULL}) {
    BobStrategy bob;
    bob.seed = seed;
    GameTranscript tr = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
    CHECK(tr.stuck_events == 0);
    CHECK(tr.certificate_ok);
    // simulate the limit point's orbit out to t_K: log-Lipschitz slack only
    double t_end = cfg.t_k(cfg.rounds + 1);
    MatQ u = MatQ::Identity(2, 2);
    u(0, 1) = tr.limit_point;
    double sup = plane_sup_log_height(u, t_end, 0.05, lab.ev.config().epsilon);
    CHECK(sup <= cfg.log_M + std::log(10.0));
  }
}

TEST_CASE("game: impossible threshold records stuck events instead of aborting") {
  GameLab lab;
  GameConfig cfg = small_config();
  cfg.rounds = 6;
  cfg.log_M = std::log(1.01); // below the height floor: every sample is high
  BobStrategy bob;
  bob.seed = 5;
  GameTranscript tr = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), bob);
  CHECK(tr.stuck_events > 0);
  CHECK(!tr.certificate_ok);
  CHECK(tr.rounds.size() == 6); // the game continued to the horizon
}

TEST_CASE("game: fitted thresholds combine the constants as specified") {
  CHECK(fitted_alpha_a_star(1.0, 1.0, 1.0, 0.5, 0) ==
        doctest::Approx(20.0 * std::log(2.0) / 0.5 + std::log(10.0)));
  CHECK(fitted_game_threshold(1.0, 2.0, 3.0, 4.0, 5.0) ==
        doctest::Approx(40.0 * 1.0 * 2.0 * 9.0 + 4.0 + 5.0));
}
