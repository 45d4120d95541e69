// Acceptance gate: ten criteria, one line each, nonzero exit on any failure.
//
// Criteria 1-4 and 8 call the library directly; 5-7 and 9-10 go through the
// command layer so the reproducibility contract is exercised where it is
// promised. Tolerances are pinned here, next to the check they gate.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "flatcusp/commands.hpp"
#include "flatcusp/config.hpp"
#include "flatcusp/corner_series.hpp"
#include "flatcusp/dynamics.hpp"
#include "flatcusp/induced.hpp"
#include "flatcusp/rng.hpp"
#include "flatcusp/stats.hpp"

using namespace flatcusp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

void report(int criterion, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] %2d %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool within(double x, double center, double tol) {
  return std::isfinite(x) && std::abs(x - center) <= tol;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

int hardware_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : static_cast<int>(n);
}

Config command_config(const std::string& out, std::uint64_t seed) {
  Config cfg;
  cfg.set("run.out", std::string("acceptance_out/") + out);
  cfg.set("run.seed", static_cast<std::int64_t>(seed));
  return cfg;
}

// ---------------------------------------------------------------------------

void criterion_1(const Table& table) {
  Timer timer;
  const SeriesOptions sopt;
  const SeriesSeed seed = seed_for_target(table.params(), 1000.0, 2.0);
  const SeriesResult res = run_series(table, seed, SeriesEngine::Exact, sopt);
  const double beta = table.params().beta;

  double worst_gamma = 0, worst_tau = 0;
  for (int n = 0; n + 1 < res.N(); ++n) {
    const SeriesRecord& a = res.rec[n];
    const SeriesRecord& b = res.rec[n + 1];
    if (a.v < std::numbers::pi / 2 && b.v < std::numbers::pi / 2)
      worst_gamma = std::max(worst_gamma,
                             std::abs(b.gamma - (a.gamma + a.alpha + b.alpha)));
    const double tau_expect =
        (std::pow(a.s, beta) + std::pow(b.s, beta)) / (beta * std::sin(a.v));
    worst_tau = std::max(worst_tau, std::abs(a.tau - tau_expect) /
                                        std::max(tau_expect, 1e-300));
  }

  const BilliardMap map(table);
  CounterRng rng(4242, 0);
  double worst_det = 0;
  int checked = 0, attempts = 0;
  while (checked < 1000 && attempts < 5000) {
    ++attempts;
    const PhasePoint x = sample_mu(table, rng);
    const auto next = map.step(x);
    if (!next) continue;
    const auto D = map.derivative(x, *next);
    const double det = D[0] * D[3] - D[1] * D[2];
    const double expect = std::cos(x.phi) / std::cos(next->x.phi);
    worst_det = std::max(worst_det, std::abs(det - expect) / std::abs(expect));
    ++checked;
  }

  const bool pass = res.N() >= 500 && worst_gamma < 1e-9 && worst_tau < 1e-9 &&
                    checked == 1000 && worst_det < 1e-10;
  report(1, pass,
         fmt("exact identities: N=%d gamma_rec=%.2e tau_rel=%.2e det_rel=%.2e "
             "states=%d",
             res.N(), worst_gamma, worst_tau, worst_det, checked),
         timer.seconds());
}

CornerAsymptotics shared_digest(const Table& table, double* secs) {
  Timer timer;
  CornerEnsembleOptions opt;
  opt.count = 4000;
  opt.target_min = 100.0;
  opt.target_max = 10000.0;
  opt.seed = 20250815;
  opt.workers = hardware_workers();
  opt.min_length = 30;
  // With the default threshold 0.1 the crossing index N1 is resolved by only
  // a couple of collisions on the shortest series; 0.3 keeps the decade
  // proportions comparable across the whole N range.
  opt.series.gamma_bar = 0.3;
  const CornerAsymptotics a = corner_asymptotics(table, opt);
  *secs = timer.seconds();
  return a;
}

void criterion_2(const CornerAsymptotics& a, double digest_secs) {
  Timer timer;
  double spread = 1e300;
  if (a.N1_over_N_decade_medians.size() >= 2) {
    double lo = 1e300, hi = 0, sum = 0;
    for (double v : a.N1_over_N_decade_medians) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    spread = (hi - lo) / (sum / a.N1_over_N_decade_medians.size());
  }
  const bool pass = within(a.alpha_window_slope, -0.4, 0.04) &&
                    within(a.gamma_window_slope, 0.6, 0.05) &&
                    within(a.tau_window_slope, -1.2, 0.1) &&
                    within(a.alpha1_vs_N.slope, -0.6, 0.06) && spread < 0.15;
  report(2, pass,
         fmt("in-chart exponents: alpha=%.3f gamma=%.3f tau=%.3f alpha1=%.3f "
             "N1/N spread=%.1f%% used=%d",
             a.alpha_window_slope, a.gamma_window_slope, a.tau_window_slope,
             a.alpha1_vs_N.slope, 100 * spread, a.used),
         digest_secs + timer.seconds());
}

void criterion_3(const CornerAsymptotics& a) {
  Timer timer;
  const bool pass = within(a.medianH_vs_N.slope, -1.5, 0.08) &&
                    a.perstep_drift_slope <= -0.8;
  report(3, pass,
         fmt("adiabatic constant: medianH slope=%.3f+-%.3f drift=%.2f "
             "(ensemble maxdrift slope=%.2f)",
             a.medianH_vs_N.slope, a.medianH_vs_N.stderr_slope,
             a.perstep_drift_slope, a.maxdrift_vs_N.slope),
         timer.seconds());
}

void criterion_4(const Table& table, const CornerAsymptotics& a) {
  Timer timer;
  const SeriesOptions sopt;
  double stretch = 0;
  for (int i = 0; i < 40; ++i) {
    const double target = 100.0 * std::pow(50.0, i / 39.0);
    stretch = std::max(stretch, stretch_consistency(
                                    table, seed_for_target(table.params(), target, 2.0),
                                    sopt));
  }
  const bool pass = within(a.logLambda_vs_logN.slope, 1.3, 0.1) &&
                    within(a.lambda_entering, 0.4, 0.06) &&
                    within(a.lambda_exiting, 0.6, 0.09) && stretch < 1e-6;
  report(4, pass,
         fmt("expansion law: logLambda slope=%.3f n*lambda=%.3f "
             "(N-n+1)*lambda=%.3f stretch=%.1e",
             a.logLambda_vs_logN.slope, a.lambda_entering, a.lambda_exiting,
             stretch),
         timer.seconds());
}

void criterion_5() {
  Timer timer;
  Config cfg = command_config("tail_b3", 101);
  cfg.set("tail.returns", std::int64_t{10'000'000});
  const json rep = json::parse(cmd_tail(cfg));
  const double cells = rep.at("fit_cells").at("exponent").get<double>();
  const double tail_m = rep.at("fit_tail_M").at("exponent").get<double>();
  const double tail_full = rep.at("fit_tail_full").at("exponent").get<double>();
  const bool pass = within(cells, -2.5, 0.2) && within(tail_m, -1.5, 0.15) &&
                    within(tail_full, -0.5, 0.1);
  report(5, pass,
         fmt("measure tails b=3: cells=%.3f tail_M=%.3f (hill %.3f) "
             "tail_full=%.3f returns=%lld",
             cells, tail_m, rep.at("hill_tail_M").at("exponent").get<double>(),
             tail_full, rep.at("returns").get<long long>()),
         timer.seconds());
}

void criterion_6() {
  Timer timer;
  // Limiting exponent: the full-space return tail mu(R >= N) ~ N^(-a) with
  // a = 1/(beta-1) -- the targets 0.667 and 0.333 are exactly these values.
  // The M-tail exponents are printed alongside for reference.
  double fitted[2] = {0, 0}, ref_m[2] = {0, 0};
  const double beta_vals[2] = {2.5, 4.0};
  const double a_expect[2] = {1.0 / 1.5, 1.0 / 3.0};
  bool pass = true;
  for (int i = 0; i < 2; ++i) {
    Config cfg = command_config(i == 0 ? "tail_b25" : "tail_b40", 102 + i);
    cfg.set("table.beta", beta_vals[i]);
    // The flatter beta = 2.5 profile needs a wider shoulder to reach the
    // wall circle; the tail exponent does not depend on the join geometry.
    if (beta_vals[i] < 3.0) cfg.set("table.join_radius", 1.2);
    // The beta = 4 tail converges slowly: at a few million returns the fitted
    // exponent still carries visible truncation bias, so harvest deeper.
    cfg.set("tail.returns", std::int64_t{8'000'000});
    const json rep = json::parse(cmd_tail(cfg));
    fitted[i] = -rep.at("fit_tail_full").at("exponent").get<double>();
    ref_m[i] = rep.at("fit_tail_M").at("exponent").get<double>();
    pass = pass && within(fitted[i], a_expect[i], 0.2 * a_expect[i]);
  }
  report(6, pass,
         fmt("beta sweep return tails: b=2.5 a=%.3f (want 0.667+-20%%, M-tail "
             "%.2f) b=4 a=%.3f (want 0.333+-20%%, M-tail %.2f)",
             fitted[0], ref_m[0], fitted[1], ref_m[1]),
         timer.seconds());
}

void criterion_7() {
  Timer timer;
  Config cfg = command_config("transitions_b3", 105);
  cfg.set("transitions.returns", std::int64_t{10'000'000});
  const json rep = json::parse(cmd_transitions(cfg));
  const long long pairs = rep.at("pairs").get<long long>();
  const double c2 = rep.at("support_c2").get<double>();
  const double c2_rest = rep.at("support_c2_rest").get<double>();
  const double cond = rep.at("conditional_m").at("exponent").get<double>();
  // c2 := max over the pilot half makes the support bound hold by
  // construction there; the content is that the remaining half needs no
  // larger constant (stability within a factor-5 band both ways).
  const double ratio = c2 > 0 ? c2_rest / c2 : 0.0;
  const bool pass = pairs >= 200 && c2 > 0 && ratio > 0.2 && ratio < 5.0 &&
                    within(cond, -1.9, 0.2);
  report(7, pass,
         fmt("transition pairs: n=%lld c2=%.3f rest/pilot=%.2f conditional "
             "m-exponent=%.3f+-%.3f",
             pairs, c2, ratio, cond,
             rep.at("conditional_m").at("stderr").get<double>()),
         timer.seconds());
}

void criterion_8(const Table& table) {
  Timer timer;
  const InducedMap induced(table);
  FanCurveOptions fan;  // defaults: t in [2e-5, 1e-2], 4000 samples
  fan.n0 = 200;
  const ExpansionSumResult res = one_step_expansion_sum(table, induced, fan);
  double sums[3] = {res.sum, 0, 0};
  for (const FanPiece& p : res.pieces) {
    if (p.cell >= 400) sums[1] += std::exp(-p.min_log_Lambda);
    if (p.cell >= 800) sums[2] += std::exp(-p.min_log_Lambda);
  }
  const bool pass = sums[0] < 1.0 && sums[1] <= sums[0] && sums[2] <= sums[1] &&
                    res.cells_seen > 50;
  report(8, pass,
         fmt("one-step expansion sum: n0=200 %.3f, 400 %.3f, 800 %.3f "
             "(pieces=%zu cells=%d)",
             sums[0], sums[1], sums[2], res.pieces.size(), res.cells_seen),
         timer.seconds());
}

void criterion_9() {
  Timer timer;
  Config cfg = command_config("correlations_b3", 104);
  cfg.set("correlations.orbit", std::int64_t{10'000'000});
  const json rep = json::parse(cmd_correlations(cfg));
  const double slope = rep.at("envelope").at("exponent").get<double>();
  const int points = rep.at("envelope").at("points").get<int>();
  const bool pass = slope <= -0.35 && points >= 4;
  report(9, pass,
         fmt("correlation envelope on [10,100]: exponent=%.3f+-%.3f points=%d",
             slope, rep.at("envelope").at("stderr").get<double>(), points),
         timer.seconds());
}

void criterion_10() {
  Timer timer;
  Config corner = command_config("repro_corner", 106);
  corner.set("corner.count", std::int64_t{100});
  corner.set("corner.target_max", 1000.0);
  const std::string c1 = cmd_corner(corner);
  const std::string c2 = cmd_corner(corner);

  Config tail = command_config("repro_tail", 107);
  tail.set("tail.returns", std::int64_t{100'000});
  fs::remove_all("acceptance_out/repro_tail");
  const std::string t1 = cmd_tail(tail);          // fresh
  const std::string t2 = cmd_tail(tail);          // checkpoint reload
  fs::remove("acceptance_out/repro_tail/tail_checkpoint.json");
  const std::string t3 = cmd_tail(tail);          // full recompute
  const bool pass = c1 == c2 && t1 == t2 && t1 == t3;
  report(10, pass,
         fmt("reproducibility: corner rerun %s, tail fresh/resume/recompute %s",
             c1 == c2 ? "identical" : "DIFFERS",
             (t1 == t2 && t1 == t3) ? "identical" : "DIFFERS"),
         timer.seconds());
}

}  // namespace

int main() {
  std::printf("acceptance checks: billiard with a cusp at a flat point "
              "(beta=3 defaults, %d workers)\n",
              hardware_workers());
  const Table table{TableParams{}};

  criterion_1(table);
  double digest_secs = 0;
  const CornerAsymptotics digest = shared_digest(table, &digest_secs);
  criterion_2(digest, digest_secs);
  criterion_3(digest);
  criterion_4(table, digest);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8(table);
  criterion_9();
  criterion_10();

  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
