#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace flatcusp {

struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_exponent = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  std::string method;  // "loglog-lsq" | "loglog-wls" | "hill"
  int points = 0;
};

// Ordinary least squares of log y against log x. Points with y <= 0 or
// x <= 0 are skipped. Optional standard errors give weighted least squares
// with weights 1/se^2 (propagated through the log transform).
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>* stderr_y = nullptr);

// Plain least squares y = a + b x (returns b as .exponent).
FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// Hill estimator of the tail index a of P(X >= x) ~ x^-a from samples >= threshold.
FitResult fit_tail_hill(const std::vector<double>& samples, double threshold);

double median(std::vector<double> v);

// --- tail/cell statistics ----------------------------------------------------

struct TailCurve {
  std::vector<double> N;       // bin representative (geometric grid)
  std::vector<double> value;   // estimate at N
  std::vector<double> stderr_; // binomial standard error
  std::vector<long long> count;
};

struct CellStatistics {
  long long returns = 0;          // induced steps observed
  long long raw_collisions = 0;   // base-map collisions observed
  long long cells_total = 0;      // completed series (cell > K0)
  TailCurve cell_measure;   // mu_M(M_N) on a geometric grid
  TailCurve tail_M;         // mu_M(R >= N)
  TailCurve tail_full;      // mu(R >= N) on the full collision space
  FitResult fit_cells, fit_tail_M, fit_tail_full;
  FitResult hill_tail_M;    // advisory cross-check
};

// Build the three tail curves and their fitted exponents from a run-length
// histogram. Exact identities used:
//   mu_M(M_N)    = (#runs of length N) / (#induced steps)
//   mu_M(R >= N) = (#runs of length >= N-1... computed as the cumulative sum
//                  of cell counts from N-1 upward, consistent with R = L+1)
//   mu(R >= N)   = [ sum over runs L of (L-N+1)+ + #(runs >= N-1) +
//                    #(short steps if N <= 1) ] / raw_collisions
// The fit window per curve is the largest contiguous geometric-bin range
// whose bins hold at least `min_bin_count` samples; a Hill estimate of the
// M-tail is attached as an advisory cross-check (binned log-log fits on
// heavy tails are biased when the far tail enters the fit).
CellStatistics cell_statistics(const std::map<int, long long>& run_hist,
                               long long raw_collisions, long long induced_steps,
                               int K0, long long min_bin_count = 50);

// --- transition statistics -----------------------------------------------------

struct TransitionReport {
  long long pairs = 0;
  double support_c2 = 0.0;        // max m / n^(beta/(beta-1)) over a pilot half
  double support_c2_rest = 0.0;   // same over the remaining half (stability)
  double support_c_lower = 0.0;   // min m / n^((beta-1)/beta)
  FitResult conditional_m;        // Hill fit of pooled m for sources n in a band
  std::vector<double> escape_fraction_per_decade;  // fraction with m >= n^((b-1)/b + 1/(2b))
  std::vector<std::pair<int, int>> sample_pairs;   // small deterministic sample for reports
};

TransitionReport transition_statistics(const std::vector<std::pair<int, int>>& pairs,
                                       double beta, int K0);

// --- correlations ---------------------------------------------------------------

struct CorrelationReport {
  std::vector<double> C;        // C[n] for n = 0..max_lag (C[0] = variance)
  std::vector<double> stderr_;  // batch-mean standard errors
  FitResult envelope;           // log-log fit through per-bin maxima of |C_n|
  double mean = 0.0;
  long long samples = 0;
};

// Autocorrelation of a scalar time series with batch-mean errors and a
// one-sided envelope fit of |C_n| over geometric bins of the lag window.
CorrelationReport autocorrelation(const std::vector<double>& series, int max_lag,
                                  int batches, int env_lo, int env_hi);

}  // namespace flatcusp
