// homflow: batch experiment driver for diagonal-flow / Diophantine runs.
// Every subcommand accepts --config FILE (flat key=value, unknown keys
// rejected, command-line flags win) and writes CSV plus a JSON summary.

#include "CLI11.hpp"
#include "json.hpp"

#include "homflow/contraction.hpp"
#include "homflow/dioph.hpp"
#include "homflow/game.hpp"
#include "homflow/polynomial.hpp"
#include "homflow/io.hpp"

#include <fstream>
#include <iostream>

using namespace homflow;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "homflow 0.1.0";

Rat parse_rational(const std::string& text) {
  // accepts "p/q", integers, and plain decimals
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Int p(text.substr(0, slash));
    Int q(text.substr(slash + 1));
    if (q == 0) throw CLI::ValidationError("rational", "zero denominator");
    return make_rat(p, q);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    long scale = static_cast<long>(text.size() - dot - 1);
    Int num(digits);
    Int den = int_pow(Int(10), static_cast<unsigned long>(scale));
    return make_rat(num, den);
  }
  return Rat(Int(text));
}

MatQ parse_lattice(const std::string& spec, int d) {
  // identity | cusp:<k> | shear:<p/q> | shear-cusp:<p/q>:<k>
  MatQ out = MatQ::Identity(d, d);
  if (spec == "identity") return out;
  auto starts_with = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (starts_with("cusp:")) {
    if (d != 2) throw CLI::ValidationError("lattice", "cusp spec needs d=2");
    int k = std::stoi(spec.substr(5));
    out(0, 0) = rat_pow_2(k);
    out(1, 1) = rat_pow_2(-k);
    return out;
  }
  if (starts_with("shear:")) {
    if (d != 2) throw CLI::ValidationError("lattice", "shear spec needs d=2");
    out(0, 1) = parse_rational(spec.substr(6));
    return out;
  }
  if (starts_with("shear-cusp:")) {
    if (d != 2) throw CLI::ValidationError("lattice", "shear-cusp spec needs d=2");
    std::string rest = spec.substr(11);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("lattice", "expected shear-cusp:<p/q>:<k>");
    Rat s = parse_rational(rest.substr(0, colon));
    int k = std::stoi(rest.substr(colon + 1));
    MatQ u = MatQ::Identity(2, 2);
    u(0, 1) = s;
    MatQ diag = MatQ::Zero(2, 2);
    diag(0, 0) = rat_pow_2(k);
    diag(1, 1) = rat_pow_2(-k);
    return MatQ(u * diag);
  }
  throw CLI::ValidationError("lattice", "unknown lattice spec: " + spec);
}

struct Outputs {
  std::string out_csv, out_json;
  void attach(CLI::App* cmd, const std::string& stem) {
    out_csv = stem + ".csv";
    out_json = stem + ".json";
    cmd->add_option("--out-csv", out_csv, "CSV output path");
    cmd->add_option("--out-json", out_json, "JSON summary path");
  }
  void write(const CsvWriter& csv, json summary, const json& resolved) const {
    csv.write_file(out_csv);
    summary["config"] = resolved;
    summary["version"] = kVersion;
    std::ofstream f(out_json);
    f << summary.dump(2) << "\n";
  }
};

json resolved_config(const CLI::App* cmd) {
  json out;
  for (const auto* opt : cmd->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "--config") continue;
    if (!opt->get_name().empty() && opt->count() >= 0 && opt->results().size() > 0)
      out[opt->get_name()] = opt->results();
  }
  return out;
}

struct PlaneSetup {
  Sl2Triple triple;
  FlowSpec flow;
  AdmissibleCurve curve;
  HeightEvaluator ev;
  PlaneSetup(int n, double eps, double beta)
      : triple(build_triple(BlockRepSpec{n, MatQ::Identity(n, n)})),
        flow(make_flow(triple)),
        curve(line_curve(triple)),
        ev(triple, [&] {
          HeightConfig c;
          c.epsilon = eps;
          c.beta = beta;
          return c;
        }()) {}
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"computational laboratory for diagonal flows on lattice spaces"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  // key=value config under a [subcommand] section; command-line flags win
  app.set_config("--config", "", "config file with a [subcommand] section; flags win");
  app.allow_config_extras(false);

  auto exit_status = std::make_shared<int>(0);

  // ---------------- heights ----------------
  {
    auto* cmd = app.add_subcommand("heights", "evaluate the lattice height function");
    auto n = std::make_shared<int>(1);
    auto eps = std::make_shared<double>(1.0);
    auto flow_t = std::make_shared<double>(0.0);
    auto lattice = std::make_shared<std::string>("identity");
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--n", *n, "block size (d = 2n)")->check(CLI::Range(1, 4));
    cmd->add_option("--eps", *eps, "height epsilon")->check(CLI::PositiveNumber);
    cmd->add_option("--flow-t", *flow_t, "diagonal flow time applied to norms");
    cmd->add_option("--lattice", *lattice, "identity | cusp:<k> | shear:<p/q> | shear-cusp:<p/q>:<k>");
    outs->attach(cmd, "heights");
    cmd->callback([=]() {
      const int d = 2 * *n;
      HeightConfig cfg;
      cfg.epsilon = *eps;
      Sl2Triple triple = build_triple(BlockRepSpec{*n, MatQ::Identity(*n, *n)});
      HeightEvaluator ev(triple, cfg);
      MatQ basis = parse_lattice(*lattice, d);
      HeightValue h = ev.lattice_height(basis, *flow_t);
      CsvWriter csv({"log_value", "value", "witness_degree", "witness_norm", "attained_lambda"});
      csv.add_row({CsvWriter::format_double(h.log_value),
                   CsvWriter::format_double(h.is_infinite() ? HUGE_VAL : h.value()),
                   h.witness ? std::to_string(h.witness->degree) : "",
                   h.witness ? CsvWriter::format_double(h.witness->norm) : "",
                   h.attained_lambda ? std::to_string(*h.attained_lambda) : ""});
      json summary{{"log_value", h.log_value}, {"infinite", h.is_infinite()}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "height log f = " << h.log_value << "\n";
    });
  }

  // ---------------- orbit ----------------
  {
    auto* cmd = app.add_subcommand("orbit", "orbit height samples, divergence statistics");
    auto s_text = std::make_shared<std::string>("0");
    auto T = std::make_shared<double>(50.0);
    auto dt = std::make_shared<double>(0.05);
    auto M = std::make_shared<double>(1e3);
    auto eps = std::make_shared<double>(1.0);
    auto lattice = std::make_shared<std::string>("identity");
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--s", *s_text, "curve parameter (rational or decimal)");
    cmd->add_option("--T", *T, "time horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--dt", *dt, "sample step")->check(CLI::PositiveNumber);
    cmd->add_option("--M", *M, "height threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", *eps, "height epsilon")->check(CLI::PositiveNumber);
    cmd->add_option("--x0", *lattice, "base lattice spec");
    outs->attach(cmd, "orbit");
    cmd->callback([=]() {
      PlaneSetup lab(1, *eps, 0.4);
      Rat s = parse_rational(*s_text);
      MatQ x0 = parse_lattice(*lattice, 2);
      CsvWriter csv({"t", "log_f"});
      for (double t = 0; t <= *T + 1e-12; t += *dt) {
        double lf = orbit_log_height(lab.flow, lab.curve, lab.ev, s, std::min(t, *T), x0);
        csv.add_row_values({t, lf});
      }
      double doa = doa_statistic(lab.flow, lab.curve, lab.ev, s, x0, *M, *T, *dt);
      double slope = growth_slope(lab.flow, lab.curve, lab.ev, s, x0, *T);
      json summary{{"doa_fraction", doa}, {"growth_slope", slope}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "doa_fraction " << doa << " growth_slope " << slope << "\n";
    });
  }

  // ---------------- ch-verify ----------------
  {
    auto* cmd = app.add_subcommand("ch-verify", "fit the contraction-inequality constants");
    auto beta = std::make_shared<double>(0.4);
    auto t = std::make_shared<double>(3.0);
    auto eps = std::make_shared<double>(1.0);
    auto kmax = std::make_shared<int>(7);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--beta", *beta, "height exponent")->check(CLI::Range(0.01, 0.99));
    cmd->add_option("--t", *t, "flow time")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", *eps, "height epsilon")->check(CLI::PositiveNumber);
    cmd->add_option("--depth", *kmax, "cusp family depth (2^k excursions)")->check(CLI::Range(1, 12));
    outs->attach(cmd, "ch_verify");
    cmd->callback([=]() {
      PlaneSetup lab(1, *eps, *beta);
      std::vector<MatQ> family;
      for (int k = 0; k <= *kmax; ++k) {
        for (const Rat& sh : {Rat(0), make_rat(1, 2), make_rat(1, 3), make_rat(2, 5)}) {
          MatQ u = MatQ::Identity(2, 2);
          u(0, 1) = sh;
          MatQ diag = MatQ::Zero(2, 2);
          diag(0, 0) = rat_pow_2(k);
          diag(1, 1) = rat_pow_2(-k);
          family.push_back(MatQ(u * diag));
        }
      }
      CHFit fit = fit_ch_constants(lab.flow, lab.curve, lab.ev, family, Rat(0), *t, *beta);
      CsvWriter csv({"log_fx", "lhs", "decay_term", "additive_term", "converged"});
      for (const auto& r : fit.reports)
        csv.add_row({CsvWriter::format_double(r.log_fx), CsvWriter::format_double(r.lhs),
                     CsvWriter::format_double(r.decay_term),
                     CsvWriter::format_double(r.additive_term),
                     r.quadrature_converged ? "1" : "0"});
      json summary{{"c_tilde", fit.c_tilde},
                   {"b_tilde", fit.b_tilde},
                   {"max_violation", fit.max_violation},
                   {"m_thresh_log_fbeta", fit.m_thresh_beta}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "c~ " << fit.c_tilde << " b~ " << fit.b_tilde << " max_violation "
                << fit.max_violation << "\n";
      if (fit.max_violation > 1e-9) *exit_status = 2;
    });
  }

  // ---------------- rep-contraction ----------------
  {
    auto* cmd = app.add_subcommand("rep-contraction", "average expansion in exterior powers");
    auto n = std::make_shared<int>(1);
    auto degree = std::make_shared<int>(1);
    auto betas = std::make_shared<std::vector<double>>(std::vector<double>{0.3, 0.6, 0.9});
    auto tmax = std::make_shared<int>(6);
    auto num_w = std::make_shared<int>(50);
    auto seed = std::make_shared<uint64_t>(1234);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--n", *n, "block size (d = 2n)")->check(CLI::Range(1, 4));
    cmd->add_option("--degree", *degree, "exterior power");
    cmd->add_option("--betas", *betas, "height exponents");
    cmd->add_option("--t-max", *tmax, "largest flow time")->check(CLI::Range(2, 12));
    cmd->add_option("--num-w", *num_w, "sample vectors")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", *seed, "sample seed");
    outs->attach(cmd, "rep_contraction");
    cmd->callback([=]() {
      Sl2Triple triple = build_triple(BlockRepSpec{*n, MatQ::Identity(*n, *n)});
      RepDecomposition dec = decompose(triple, *degree);
      const int dim = static_cast<int>(dec.dim_total);
      CsvWriter csv({"beta", "t", "mean_log_lhs"});
      json slopes;
      for (double beta : *betas) {
        std::vector<double> ts, logs;
        for (int tt = 1; tt <= *tmax; ++tt) {
          std::mt19937_64 rng(*seed);
          std::normal_distribution<double> gauss(0, 1);
          double acc = 0;
          int used = 0;
          for (int w = 0; w < *num_w; ++w) {
            VecQ v(dim);
            for (int i = 0; i < dim; ++i)
              v(i) = make_rat(static_cast<long>(std::lround(1024 * gauss(rng))), 1024);
            VecQ top = dec.project_top_weight(v);
            bool zero = true;
            for (Eigen::Index i = 0; i < top.size(); ++i)
              if (top(i) != 0) { zero = false; break; }
            if (zero) continue;
            acc += std::log(verify_rep_contraction(triple, dec, v, tt, beta).lhs);
            ++used;
          }
          ts.push_back(tt);
          logs.push_back(acc / used);
          csv.add_row_values({beta, static_cast<double>(tt), logs.back()});
        }
        slopes[CsvWriter::format_double(beta)] = fit_slope(ts, logs);
      }
      json summary{{"slopes", slopes}, {"delta_lambda", dec.top_lambda()}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << summary["slopes"].dump() << "\n";
    });
  }

  // ---------------- cgood ----------------
  {
    auto* cmd = app.add_subcommand("cgood", "sublevel-measure inequality for polynomials");
    auto kmax = std::make_shared<int>(5);
    auto trials = std::make_shared<int>(1000);
    auto levels = std::make_shared<int>(20);
    auto seed = std::make_shared<uint64_t>(2024);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--k-max", *kmax, "maximum degree")->check(CLI::Range(1, 8));
    cmd->add_option("--trials", *trials, "polynomials per degree")->check(CLI::PositiveNumber);
    cmd->add_option("--levels", *levels, "dyadic epsilon levels")->check(CLI::Range(1, 40));
    cmd->add_option("--seed", *seed, "coefficient seed");
    outs->attach(cmd, "cgood");
    cmd->callback([=]() {
      CsvWriter csv({"k", "trial", "all_hold", "lower_sup_holds"});
      long violations = 0;
      std::mt19937_64 rng(*seed);
      std::uniform_int_distribution<long> num(-1024, 1024);
      for (int k = 1; k <= *kmax; ++k) {
        for (int trial = 0; trial < *trials; ++trial) {
          PolyQ p;
          bool nonzero = false;
          for (int i = 0; i <= k; ++i) {
            long c = num(rng);
            nonzero = nonzero || c != 0;
            p.coeffs.push_back(make_rat(c, 1024));
          }
          if (!nonzero) continue;
          CGoodReport rep = cgood_check(p, Rat(-1), Rat(1), k, *levels);
          if (!rep.all_hold) ++violations;
          csv.add_row({std::to_string(k), std::to_string(trial), rep.all_hold ? "1" : "0",
                       rep.lower_sup_holds ? "1" : "0"});
        }
      }
      json summary{{"violations", violations}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "violations " << violations << "\n";
      if (violations > 0) *exit_status = 2;
    });
  }

  // ---------------- covering / dimension ----------------
  {
    auto* cmd = app.add_subcommand("covering", "covering counts of excursion-heavy cells");
    auto expand = std::make_shared<long>(2);
    auto n_list = std::make_shared<std::vector<int>>(std::vector<int>{8, 11, 14, 17});
    auto M = std::make_shared<double>(2.0);
    auto delta = std::make_shared<double>(0.5);
    auto beta = std::make_shared<double>(0.4);
    auto eps = std::make_shared<double>(1.0);
    auto max_slope = std::make_shared<double>(HUGE_VAL);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--expand", *expand, "integer e^{alpha(t)}")->check(CLI::Range(2L, 16L));
    cmd->add_option("--N", *n_list, "step counts");
    cmd->add_option("--M", *M, "height threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--delta", *delta, "excursion fraction")->check(CLI::Range(0.01, 1.0));
    cmd->add_option("--beta", *beta, "height exponent");
    cmd->add_option("--eps", *eps, "height epsilon");
    cmd->add_option("--max-slope", *max_slope, "fail (exit 2) if the fitted slope exceeds this");
    outs->attach(cmd, "covering");
    cmd->callback([=]() {
      PlaneSetup lab(1, *eps, *beta);
      CsvWriter csv({"N", "alpha_Nt", "count", "interval_width", "fitted_c3"});
      std::vector<CoverReport> reports;
      for (int N : *n_list) {
        CoverReport rep = cover_Zx(lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), *M,
                                   N, *expand, *delta, *beta);
        reports.push_back(rep);
        csv.add_row_values({static_cast<double>(N), rep.alpha_nt,
                            static_cast<double>(rep.count), rep.interval_width,
                            rep.fitted_c3});
      }
      auto slope = dimension_estimate(reports);
      json summary;
      summary["slope"] = slope ? json(*slope) : json();
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "box-count slope " << (slope ? std::to_string(*slope) : "empty") << "\n";
      if (slope && *slope > *max_slope) *exit_status = 2;
    });
  }

  // ---------------- game ----------------
  {
    auto* cmd = app.add_subcommand("game", "modified Schmidt game with certified heights");
    auto rounds = std::make_shared<int>(15);
    auto a_pow = std::make_shared<int>(8);
    auto b_pow = std::make_shared<int>(2);
    auto t0_pow = std::make_shared<int>(2);
    auto log_m = std::make_shared<double>(std::log(64.0));
    auto bob = std::make_shared<std::string>("random");
    auto seed = std::make_shared<uint64_t>(7);
    auto games = std::make_shared<int>(1);
    auto eps = std::make_shared<double>(1.0);
    auto require_cert = std::make_shared<bool>(false);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--rounds", *rounds, "rounds K")->check(CLI::Range(1, 40));
    cmd->add_option("--a-pow", *a_pow, "e^{sigma a} = 2^{a_pow}")->check(CLI::Range(1, 4000));
    cmd->add_option("--b-pow", *b_pow, "e^{sigma b} = 2^{b_pow}")->check(CLI::Range(1, 64));
    cmd->add_option("--t0-pow", *t0_pow, "e^{sigma t0} = 2^{t0_pow}")->check(CLI::Range(1, 64));
    cmd->add_option("--log-M", *log_m, "certificate threshold on log f");
    cmd->add_option("--bob", *bob, "random | adversarial")->check(CLI::IsMember({"random", "adversarial"}));
    cmd->add_option("--seed", *seed, "seed of the first game");
    cmd->add_option("--games", *games, "number of seeded games")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", *eps, "height epsilon");
    cmd->add_flag("--require-certificate", *require_cert, "exit 2 unless every game certifies");
    outs->attach(cmd, "game");
    cmd->callback([=]() {
      PlaneSetup lab(1, *eps, 0.4);
      GameConfig cfg;
      cfg.rounds = *rounds;
      cfg.a_pow = *a_pow;
      cfg.b_pow = *b_pow;
      cfg.t0_pow = *t0_pow;
      cfg.log_M = *log_m;
      CsvWriter csv({"seed", "certificate", "stuck_events", "max_log_height", "limit_point"});
      json first;
      int failures = 0;
      for (int g = 0; g < *games; ++g) {
        BobStrategy strat;
        strat.kind = (*bob == "adversarial") ? BobStrategy::Kind::AdversarialRational
                                             : BobStrategy::Kind::Random;
        strat.seed = *seed + static_cast<uint64_t>(g);
        GameTranscript tr = play(cfg, lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2), strat);
        if (!tr.certificate_ok) ++failures;
        csv.add_row({std::to_string(strat.seed), tr.certificate_ok ? "1" : "0",
                     std::to_string(tr.stuck_events),
                     CsvWriter::format_double(tr.max_log_height),
                     tr.limit_point.get_str()});
        if (g == 0) {
          first["certificate"] = tr.certificate_ok;
          first["stuck_events"] = tr.stuck_events;
          first["max_log_height"] = tr.max_log_height;
          first["limit_point"] = tr.limit_point.get_str();
          json rounds_json = json::array();
          for (const auto& r : tr.rounds) {
            rounds_json.push_back({{"k", r.k},
                                   {"B_lo", r.B.lo.get_str()},
                                   {"B_width", r.B.width.get_str()},
                                   {"A_lo", r.A.lo.get_str()},
                                   {"A_width", r.A.width.get_str()},
                                   {"max_log_height", r.max_sampled_log_height},
                                   {"alice_stuck", r.alice_stuck}});
          }
          first["rounds"] = rounds_json;
        }
      }
      json summary{{"transcript", first}, {"failures", failures}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "games " << *games << " certificate failures " << failures << "\n";
      if (*require_cert && failures > 0) *exit_status = 2;
    });
  }

  // ---------------- shrinking ----------------
  {
    auto* cmd = app.add_subcommand("shrinking", "window averages over shrinking segments");
    auto delta = std::make_shared<double>(0.2);
    auto beta = std::make_shared<double>(0.4);
    auto eps = std::make_shared<double>(1.0);
    auto tmax = std::make_shared<int>(12);
    auto s0 = std::make_shared<std::string>("0");
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--delta", *delta, "window shrink exponent");
    cmd->add_option("--beta", *beta, "height exponent");
    cmd->add_option("--eps", *eps, "height epsilon");
    cmd->add_option("--t-max", *tmax, "largest time")->check(CLI::Range(1, 20));
    cmd->add_option("--s0", *s0, "window center");
    outs->attach(cmd, "shrinking");
    cmd->callback([=]() {
      PlaneSetup lab(1, *eps, *beta);
      std::vector<double> ts;
      for (int t = 0; t <= *tmax; ++t) ts.push_back(t);
      auto averages = shrinking_average(lab.flow, lab.curve, lab.ev, MatQ::Identity(2, 2),
                                        *delta, ts, parse_rational(*s0));
      CsvWriter csv({"t", "window_average"});
      double sup = 0;
      for (size_t i = 0; i < ts.size(); ++i) {
        csv.add_row_values({ts[i], averages[i]});
        sup = std::max(sup, averages[i]);
      }
      json summary{{"sup", sup}, {"base", averages[0]}, {"ratio", sup / averages[0]}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "sup/base ratio " << sup / averages[0] << "\n";
    });
  }

  // ---------------- dioph ----------------
  {
    auto* cmd = app.add_subcommand("dioph", "Diophantine classifiers along the line");
    auto n = std::make_shared<int>(1);
    auto grid = std::make_shared<int>(64);
    auto qmax = std::make_shared<long>(10000);
    auto eps = std::make_shared<double>(0.05);
    auto soa_n = std::make_shared<int>(20);
    auto gamma = std::make_shared<double>(0.5);
    auto horizon = std::make_shared<double>(30.0);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--n", *n, "system size (1 supported exactly)")->check(CLI::Range(1, 2));
    cmd->add_option("--grid", *grid, "grid points")->check(CLI::PositiveNumber);
    cmd->add_option("--qmax", *qmax, "denominator horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", *eps, "singularity tolerance");
    cmd->add_option("--soa-N", *soa_n, "singular-on-average levels");
    cmd->add_option("--vwa-gamma", *gamma, "VWA exponent");
    cmd->add_option("--T", *horizon, "orbit horizon for sup heights");
    outs->attach(cmd, "dioph");
    cmd->callback([=]() {
      if (*n != 1) throw CLI::ValidationError("dioph", "only n=1 wired to the grid sweep");
      CsvWriter csv({"s", "margin", "soa_fraction", "vwa_flag", "sup_height"});
      // golden offset grid: quadratic irrational proxies with varied types
      Int fa = 1, fb = 1;
      for (int i = 0; i < 201; ++i) {
        Int c = fa + fb;
        fa = fb;
        fb = c;
      }
      Rat golden = make_rat(fa, fb);
      std::vector<json> rows;
      for (int j = 0; j < *grid; ++j) {
        Rat s = (Rat(j) + golden) / *grid;
        LinearFormsPoint pt = make_linear_forms(MatQ::Identity(1, 1), MatQ::Zero(1, 1), s);
        Rat margin = bad_approx_margin(pt, *qmax);
        double soa = soa_statistic(pt, *soa_n, *eps);
        bool vwa = vwa_check(pt, *gamma, *qmax).very_well_approximable;
        MatQ u = MatQ::Identity(2, 2);
        u(0, 1) = s;
        double sup = plane_sup_log_height(u, *horizon, 0.05, 1.0);
        csv.add_row({s.get_str(), CsvWriter::format_double(to_double(margin)),
                     CsvWriter::format_double(soa), vwa ? "1" : "0",
                     CsvWriter::format_double(sup)});
      }
      json summary{{"grid", *grid}, {"qmax", *qmax}};
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << "wrote " << *grid << " grid rows\n";
    });
  }

  // ---------------- exponents ----------------
  {
    auto* cmd = app.add_subcommand("exponents", "exponent calculators for sl2 products");
    auto real_places = std::make_shared<int>(2);
    auto complex_places = std::make_shared<int>(0);
    auto active = std::make_shared<std::string>("11");
    auto beta = std::make_shared<double>(0.4);
    auto brute_max = std::make_shared<int>(0);
    auto outs = std::make_shared<Outputs>();
    cmd->add_option("--r", *real_places, "real places")->check(CLI::Range(0, 8));
    cmd->add_option("--s", *complex_places, "complex places")->check(CLI::Range(0, 4));
    cmd->add_option("--active", *active, "activity flags, e.g. 101");
    cmd->add_option("--beta", *beta, "base exponent");
    cmd->add_option("--brute-max", *brute_max, "check all patterns with r+2s <= this");
    outs->attach(cmd, "exponents");
    cmd->callback([=]() {
      CsvWriter csv({"pattern", "char", "delta_x", "zeta_x", "beta_prime", "beta_phi",
                     "bound", "informative"});
      auto emit = [&](const std::vector<FactorPattern>& pat) {
        ExponentReport rep = sl2_products_exponents(pat, *beta);
        std::string name;
        for (const auto& f : pat) name += (f.complex_place ? (f.active ? 'C' : 'c') : (f.active ? 'R' : 'r'));
        csv.add_row({name, rep.characteristic.get_str(), std::to_string(rep.delta_x),
                     std::to_string(rep.zeta_x), CsvWriter::format_double(rep.beta_prime),
                     CsvWriter::format_double(rep.beta_phi),
                     CsvWriter::format_double(to_double(rep.dimension_bound)),
                     rep.no_information ? "0" : "1"});
        return rep;
      };
      json summary;
      if (*brute_max > 0) {
        long checked = 0, informative = 0;
        for (int r = 0; r <= *brute_max; ++r)
          for (int s2 = 0; r + 2 * s2 <= *brute_max; ++s2) {
            int places = r + s2;
            if (places == 0) continue;
            for (long mask = 1; mask < (1L << places); ++mask) {
              std::vector<FactorPattern> pat;
              for (int i = 0; i < places; ++i) pat.push_back({i >= r, ((mask >> i) & 1) != 0});
              ExponentReport rep = emit(pat);
              ++checked;
              if (!rep.no_information) ++informative;
            }
          }
        summary["patterns_checked"] = checked;
        summary["informative"] = informative;
      } else {
        if (static_cast<int>(active->size()) != *real_places + *complex_places)
          throw CLI::ValidationError("exponents", "--active length must equal r + s");
        std::vector<FactorPattern> pat;
        for (int i = 0; i < static_cast<int>(active->size()); ++i)
          pat.push_back({i >= *real_places, (*active)[static_cast<size_t>(i)] == '1'});
        ExponentReport rep = emit(pat);
        summary["beta_phi"] = rep.beta_phi;
        summary["bound"] = to_double(rep.dimension_bound);
        summary["no_information"] = rep.no_information;
      }
      outs->write(csv, summary, resolved_config(cmd));
      std::cout << summary.dump() << "\n";
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64; // usage or config error
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return *exit_status;
}
