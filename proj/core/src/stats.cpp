#include "flatcusp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace flatcusp {

namespace {

struct XY {
  std::vector<double> x, y, w;
};

FitResult lsq(const XY& d, const char* method) {
  FitResult out;
  out.method = method;
  const std::size_t n = d.x.size();
  out.points = static_cast<int>(n);
  if (n < 2) return out;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = d.w.empty() ? 1.0 : d.w[i];
    sw += w;
    sx += w * d.x[i];
    sy += w * d.y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = d.w.empty() ? 1.0 : d.w[i];
    sxx += w * (d.x[i] - mx) * (d.x[i] - mx);
    sxy += w * (d.x[i] - mx) * (d.y[i] - my);
  }
  if (sxx <= 0) return out;
  out.exponent = sxy / sxx;
  out.intercept = my - out.exponent * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = d.w.empty() ? 1.0 : d.w[i];
    const double r = d.y[i] - out.intercept - out.exponent * d.x[i];
    rss += w * r * r;
  }
  if (n > 2) out.stderr_exponent = std::sqrt(rss / (double(n) - 2.0) / sxx);
  return out;
}

}  // namespace

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>* stderr_y) {
  XY d;
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) continue;
    d.x.push_back(std::log(x[i]));
    d.y.push_back(std::log(y[i]));
    if (stderr_y && i < stderr_y->size() && (*stderr_y)[i] > 0) {
      const double se_log = (*stderr_y)[i] / y[i];
      d.w.push_back(1.0 / (se_log * se_log));
    }
    if (lo == 0 || x[i] < lo) lo = x[i];
    if (x[i] > hi) hi = x[i];
  }
  if (!d.w.empty() && d.w.size() != d.x.size()) d.w.clear();
  FitResult out = lsq(d, stderr_y ? "loglog-wls" : "loglog-lsq");
  out.window_lo = lo;
  out.window_hi = hi;
  return out;
}

FitResult fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  XY d;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    d.x.push_back(x[i]);
    d.y.push_back(y[i]);
  }
  return lsq(d, "linear-lsq");
}

FitResult fit_tail_hill(const std::vector<double>& samples, double threshold) {
  FitResult out;
  out.method = "hill";
  out.window_lo = threshold;
  double sum = 0;
  int n = 0;
  double hi = threshold;
  for (double v : samples) {
    if (v >= threshold) {
      sum += std::log(v / threshold);
      ++n;
      hi = std::max(hi, v);
    }
  }
  out.points = n;
  out.window_hi = hi;
  if (n == 0 || sum <= 0) return out;
  const double a = double(n) / sum;  // tail index of P(X >= x) ~ x^-a
  out.exponent = -a;                 // as a CCDF log-log slope
  out.stderr_exponent = a / std::sqrt(double(n));
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

namespace {

// Geometric grid of integer cell sizes starting just above K0.
std::vector<int> geometric_grid(int start, int max_n, double ratio = 1.25) {
  std::vector<int> g;
  double x = start;
  while (x <= max_n) {
    const int n = static_cast<int>(std::lround(x));
    if (g.empty() || n > g.back()) g.push_back(n);
    x *= ratio;
  }
  return g;
}

// Largest contiguous index range whose count column stays >= floor.
std::pair<std::size_t, std::size_t> count_window(const std::vector<long long>& counts,
                                                 long long floor_count) {
  std::size_t best_lo = 0, best_hi = 0, lo = 0;
  bool in = false;
  for (std::size_t i = 0; i <= counts.size(); ++i) {
    const bool ok = i < counts.size() && counts[i] >= floor_count;
    if (ok && !in) {
      lo = i;
      in = true;
    }
    if (!ok && in) {
      if (i - lo > best_hi - best_lo) {
        best_lo = lo;
        best_hi = i;
      }
      in = false;
    }
  }
  return {best_lo, best_hi};
}

FitResult fit_curve_window(const TailCurve& c, long long min_bin_count) {
  auto [lo, hi] = count_window(c.count, min_bin_count);
  std::vector<double> x(c.N.begin() + lo, c.N.begin() + hi);
  std::vector<double> y(c.value.begin() + lo, c.value.begin() + hi);
  std::vector<double> se(c.stderr_.begin() + lo, c.stderr_.begin() + hi);
  return fit_loglog(x, y, &se);
}

}  // namespace

CellStatistics cell_statistics(const std::map<int, long long>& run_hist,
                               long long raw_collisions, long long induced_steps,
                               int K0, long long min_bin_count) {
  CellStatistics cs;
  cs.raw_collisions = raw_collisions;
  cs.returns = induced_steps;
  if (induced_steps <= 0 || raw_collisions <= 0) return cs;

  int max_n = 0;
  for (const auto& [len, cnt] : run_hist) {
    if (len > K0) cs.cells_total += cnt;
    max_n = std::max(max_n, len);
  }
  if (max_n <= K0 + 2) return cs;

  const std::vector<int> grid = geometric_grid(K0 + 1, max_n);

  // Cell measure: bin the run-length histogram on the geometric grid.
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const int lo = grid[i], hi = grid[i + 1];
    long long cnt = 0;
    for (auto it = run_hist.lower_bound(lo); it != run_hist.end() && it->first < hi; ++it)
      cnt += it->second;
    const double width = hi - lo;
    const double p = double(cnt) / double(induced_steps);
    cs.cell_measure.N.push_back(std::sqrt(double(lo) * double(hi)));
    cs.cell_measure.value.push_back(p / width);
    cs.cell_measure.stderr_.push_back(
        std::sqrt(std::max(p * (1.0 - p), 0.0) / double(induced_steps)) / width);
    cs.cell_measure.count.push_back(cnt);
  }

  // Tails. R = L + 1 on a cell of length L, so mu_M(R >= N) counts runs with
  // L >= N - 1. On the full space a run of length L contributes (L - N + 1)+
  // interior points plus its pre-entry point when L >= N - 1.
  for (int N : grid) {
    long long cnt_m = 0;
    double cnt_full = 0, var_full = 0;
    for (const auto& [len, c] : run_hist) {
      if (len <= K0) continue;
      double w = 0;  // points one excursion of this length contributes
      if (len >= N - 1) {
        cnt_m += c;
        w += 1.0;
      }
      if (len - N + 1 > 0) w += double(len - N + 1);
      cnt_full += double(c) * w;
      var_full += double(c) * w * w;
    }
    const double pm = double(cnt_m) / double(induced_steps);
    cs.tail_M.N.push_back(N);
    cs.tail_M.value.push_back(pm);
    cs.tail_M.stderr_.push_back(
        std::sqrt(std::max(pm * (1.0 - pm), 0.0) / double(induced_steps)));
    cs.tail_M.count.push_back(cnt_m);

    const double pf = cnt_full / double(raw_collisions);
    cs.tail_full.N.push_back(N);
    cs.tail_full.value.push_back(pf);
    // One long excursion contributes a block of points, so the independent
    // unit is the excursion: variance sums w^2 per excursion, and the window
    // floor counts supporting excursions, not points. Counting points would
    // let a single giant excursion qualify deep-tail bins, where truncation
    // of the sample bends the curve steep.
    cs.tail_full.stderr_.push_back(std::sqrt(std::max(var_full, 1.0)) /
                                   double(raw_collisions));
    cs.tail_full.count.push_back(cnt_m);
  }

  cs.fit_cells = fit_curve_window(cs.cell_measure, min_bin_count);
  cs.fit_tail_M = fit_curve_window(cs.tail_M, min_bin_count);
  cs.fit_tail_full = fit_curve_window(cs.tail_full, min_bin_count);

  // Hill cross-check of the M-tail from the histogram itself.
  const double thr = K0 + 5;
  double hsum = 0;
  long long hn = 0;
  for (const auto& [len, c] : run_hist) {
    if (len + 1 >= thr && len > K0) {
      hsum += double(c) * std::log(double(len + 1) / thr);
      hn += c;
    }
  }
  cs.hill_tail_M.method = "hill";
  cs.hill_tail_M.window_lo = thr;
  cs.hill_tail_M.points = static_cast<int>(hn);
  if (hn > 0 && hsum > 0) {
    const double a = double(hn) / hsum;
    cs.hill_tail_M.exponent = -a;
    cs.hill_tail_M.stderr_exponent = a / std::sqrt(double(hn));
  }
  return cs;
}

TransitionReport transition_statistics(const std::vector<std::pair<int, int>>& pairs,
                                       double beta, int K0) {
  TransitionReport tr;
  tr.pairs = static_cast<long long>(pairs.size());
  if (pairs.empty()) return tr;
  const double up = beta / (beta - 1.0);
  const double dn = (beta - 1.0) / beta;

  const std::size_t half = pairs.size() / 2;
  double c2_pilot = 0, c2_rest = 0, c_lo = 1e300;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double n = pairs[i].first, m = pairs[i].second;
    const double r_up = m / std::pow(n, up);
    const double r_dn = m / std::pow(n, dn);
    (i < half ? c2_pilot : c2_rest) = std::max(i < half ? c2_pilot : c2_rest, r_up);
    c_lo = std::min(c_lo, r_dn);
  }
  tr.support_c2 = c2_pilot;
  tr.support_c2_rest = c2_rest;
  tr.support_c_lower = c_lo;

  // Conditional m-law: pool destinations for moderate sources.
  std::vector<double> pooled;
  for (const auto& [n, m] : pairs)
    if (n >= K0 + 1 && n <= 100) pooled.push_back(m);
  FitResult hill = fit_tail_hill(pooled, K0 + 2);
  tr.conditional_m = hill;
  if (hill.points > 0) {
    // density exponent = -(tail index + 1)
    tr.conditional_m.exponent = hill.exponent - 1.0;
    tr.conditional_m.method = "hill-density";
  }

  // Escape fractions per source decade: destinations beyond n^((b-1)/b + 1/(2b)).
  const double esc_exp = dn + 1.0 / (2.0 * beta);
  int lo = K0 + 1;
  while (true) {
    const int hi = lo * 10;
    long long tot = 0, esc = 0;
    for (const auto& [n, m] : pairs) {
      if (n >= lo && n < hi) {
        ++tot;
        if (m >= std::pow(double(n), esc_exp)) ++esc;
      }
    }
    if (tot < 50) break;
    tr.escape_fraction_per_decade.push_back(double(esc) / double(tot));
    lo = hi;
  }

  const std::size_t keep = std::min<std::size_t>(pairs.size(), 50);
  tr.sample_pairs.assign(pairs.begin(), pairs.begin() + keep);
  return tr;
}

CorrelationReport autocorrelation(const std::vector<double>& series, int max_lag,
                                  int batches, int env_lo, int env_hi) {
  CorrelationReport rep;
  const long long n = static_cast<long long>(series.size());
  rep.samples = n;
  if (n < 2 * max_lag + 2 || batches < 2) return rep;
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / double(n);
  rep.mean = mean;

  rep.C.assign(max_lag + 1, 0.0);
  rep.stderr_.assign(max_lag + 1, 0.0);
  std::vector<std::vector<double>> batch_c(batches, std::vector<double>(max_lag + 1, 0.0));
  const long long blen = n / batches;
  for (int b = 0; b < batches; ++b) {
    const long long lo = b * blen;
    const long long hi = lo + blen;
    for (int lag = 0; lag <= max_lag; ++lag) {
      double acc = 0;
      const long long m = hi - lo - lag;
      for (long long i = lo; i + lag < hi; ++i)
        acc += (series[i] - mean) * (series[i + lag] - mean);
      batch_c[b][lag] = acc / double(m);
    }
  }
  for (int lag = 0; lag <= max_lag; ++lag) {
    double s = 0;
    for (int b = 0; b < batches; ++b) s += batch_c[b][lag];
    const double avg = s / batches;
    double var = 0;
    for (int b = 0; b < batches; ++b)
      var += (batch_c[b][lag] - avg) * (batch_c[b][lag] - avg);
    rep.C[lag] = avg;
    rep.stderr_[lag] = std::sqrt(var / (batches * std::max(1, batches - 1)));
  }

  // One-sided envelope: per geometric lag bin, the maximum of |C_n|.
  std::vector<double> ex, ey;
  double lo_edge = env_lo;
  while (lo_edge < env_hi) {
    const double hi_edge = std::min<double>(env_hi, lo_edge * 1.8);
    double peak = 0, at = 0;
    for (int lag = int(std::ceil(lo_edge)); lag < hi_edge && lag <= max_lag; ++lag) {
      if (std::abs(rep.C[lag]) > peak) {
        peak = std::abs(rep.C[lag]);
        at = lag;
      }
    }
    if (peak > 0) {
      ex.push_back(std::sqrt(lo_edge * hi_edge));
      ey.push_back(peak);
      (void)at;
    }
    lo_edge = hi_edge;
  }
  rep.envelope = fit_loglog(ex, ey);
  return rep;
}

}  // namespace flatcusp
