#pragma once

#include <cstdint>
#include <vector>

#include "flatcusp/geometry.hpp"

namespace flatcusp {

// One collision of a corner series, in chart quantities:
//   s      chart coordinate of the collision
//   alpha  wall inclination arctan(s^(beta-1))
//   v      angle of the outgoing velocity to the inward axis direction,
//          in (0, pi); increases by 2*alpha at every reflection
//   gamma  acute angle between the outgoing ray and the wall (= pi/2 - |phi|)
//   tau    free path to the next series collision (0 for the last one)
//   lambda tau * B with B the outgoing wavefront curvature
//   H      adiabatic combination |r - r_f|^beta * cos(phi)
struct SeriesRecord {
  double s, alpha, v, gamma, tau, lambda, H;
};

struct SeriesMarkers {
  int N1 = 0;  // last entering index with gamma < gamma_bar (1-based)
  int N2 = 0;  // turning index: argmin alpha
  int N3 = 0;  // last exiting index with gamma > gamma_bar
};

struct SeriesResult {
  std::vector<SeriesRecord> rec;  // rec[0] is collision n=1
  SeriesMarkers markers;
  double C_N = 0.0;        // median H over [N1, N2]
  double log_Lambda = 0.0; // log of the excursion expansion factor,
                           // including the entry and exit flight factors
  double tau_exit = 0.0;   // pinned exit free path used in log_Lambda
  int N() const { return static_cast<int>(rec.size()); }
};

enum class SeriesEngine {
  Exact,     // ray/wall intersection + vector reflection in the chart
  Reduced,   // scalar recursion: s' solved from s' = s - (s'^b+s^b)/(b tan v),
             // v' = v + 2 arctan(s'^(beta-1))
  Extended,  // the exact route evaluated in 50-digit floating point
};

struct SeriesOptions {
  double gamma_bar = 0.1;   // marker threshold
  double entry_flight = 1.0;  // pinned O(1) free path before/after the series
  double entry_curvature = 0.0;  // 0 = derive from wall radius: 2/Rw + 1/3
  double fixed_point_tol = 1e-14;
  int fixed_point_max_iter = 100;
  int max_collisions = 2'000'000;
};

struct SeriesSeed {
  double s1 = 0.0;  // chart coordinate of the first collision (lower wall)
  double v1 = 0.0;  // outgoing angle after it
};

// Seed whose series length is ~ target: the first wall inclination is set to
// a1 = target^(-beta/(2beta-1)) and the outgoing angle to u*a1 above the wall,
// u in [1, 3] tuning the adiabatic constant.
SeriesSeed seed_for_target(const TableParams& params, double target, double u);

// Run one corner series from the 1st collision until the orbit leaves the
// chart (s > eps0) or turns past v >= pi.
SeriesResult run_series(const Table& table, SeriesSeed seed, SeriesEngine engine,
                        const SeriesOptions& opt);

// Consistency of the two numerical routes: run the exact route and, at every
// collision, take one reduced-recursion step from the exact state; returns the
// largest relative |s_exact - s_reduced| of the predicted next coordinate.
// (Re-seeding each step keeps the comparison meaningful past the Lyapunov
// horizon of the chart dynamics.)
double compare_routes(const Table& table, SeriesSeed seed, const SeriesOptions& opt);

// Dual bookkeeping of the expansion factor along one series: the scalar
// wavefront recursion prod(1 + tau_n B_n) against the p-metric growth of an
// unstable tangent vector pushed through the literal 2x2 collision
// derivatives. Returns |log(product) - log(matrix stretch)|.
double stretch_consistency(const Table& table, SeriesSeed seed, const SeriesOptions& opt);

// --- ensemble asymptotics --------------------------------------------------

struct FitSummary {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0;
  int n = 0;
};

struct CornerEnsembleOptions {
  int count = 2000;
  double target_min = 100.0;
  double target_max = 10000.0;
  double u_min = 1.0;
  double u_max = 3.0;
  std::uint64_t seed = 12345;
  int workers = 0;  // 0 = hardware concurrency
  int min_length = 30;  // series shorter than this are dropped from fits
  SeriesOptions series;
  SeriesEngine engine = SeriesEngine::Exact;
};

// Ensemble digest used by reports and the acceptance checks. All power-law
// fits are log-log least squares; per-series window fits use the index
// window [max(10, N^0.2), min(N^0.8, N2)] and the ensemble reports the
// median of the per-series slopes.
struct CornerAsymptotics {
  FitSummary alpha1_vs_N;        // expected slope -beta/(2beta-1)
  double alpha_window_slope;     // median, expected -2/(2beta-1)
  double gamma_window_slope;     // median, expected +beta/(2beta-1)
  double tau_window_slope;       // median, expected -2beta/(2beta-1)
  FitSummary medianH_vs_N;       // expected slope -beta/(beta-1)
  FitSummary maxdrift_vs_N;      // max_n |H_n - C_N|/C_N over [N1,N2] vs N
  double perstep_drift_slope;    // median per-series log|H_n - C_N| slope
  FitSummary logLambda_vs_logN;  // expected 1 + beta/((2beta-1)(beta-1))
  double lambda_entering;        // median of n*lambda_n over [N^0.3, N^0.7]
  double lambda_exiting;         // median of (N-n+1)*lambda_n, exiting window
  FitSummary sum_tau_first_vs_N;   // sum over n <= N1 (reported, see notes)
  FitSummary sum_tau_middle_vs_N;  // sum over N1 <= n <= N2, expected -1/(beta-1)
  double telescoping_residual;     // max |sum tau cos v - (s1 - s_{N1+1})| / s1
  std::vector<double> N1_over_N_decade_medians;
  std::vector<double> segment_proportion_spread;  // per segment: decade spread / mean
  double min_w_margin;   // min over series/indices of v_n/alpha_n - 2n
  double max_n_u_excess; // max of n*(alpha_n/alpha_{n+1} - 1), entering half
  int used = 0;          // series retained
};

CornerAsymptotics corner_asymptotics(const Table& table, const CornerEnsembleOptions& opt);

}  // namespace flatcusp
