#include "flatcusp/corner_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "flatcusp/rng.hpp"
#include "flatcusp/stats.hpp"

namespace flatcusp {

namespace {

using float50 = boost::multiprecision::cpp_bin_float_50;

// ---------------------------------------------------------------------------
// Exact route: straight rays against the chart walls z = +-s^beta/beta,
// evaluated in a caller-chosen floating type. The crossing equation along a
// ray is reduced to the chart abscissa x, where the mismatch
//   G(x) = z_ray(x) - sgn * x^beta / beta
// has a monotone derivative, so it has at most two roots and each lies in a
// monotone piece delimited by the single extremum of G.

template <typename Real>
struct RawTrace {
  std::vector<Real> s, v, phi;  // phi signed as in the global (r, phi) chart
  std::vector<Real> tau;        // tau[k]: flight from collision k+1 to k+2
  bool clean_exit = false;      // left the chart through s > eps0
};

template <typename Real>
int sign_of(const Real& x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

// Root of G on a monotone piece [a, b] with a sign change, by bisection to
// full precision of Real.
template <typename Real, typename F>
Real bisect(const F& G, Real a, Real b, int ga) {
  const int iters = std::numeric_limits<Real>::digits + 8;
  for (int i = 0; i < iters; ++i) {
    const Real m = (a + b) / 2;
    if (m == a || m == b) break;
    if (sign_of(G(m)) == ga)
      a = m;
    else
      b = m;
  }
  return (a + b) / 2;
}

template <typename Real>
RawTrace<Real> trace_chart(double beta_d, double eps0_d, double s1, double v1,
                           int max_collisions) {
  using std::abs;
  using std::atan2;
  using std::cos;
  using std::pow;
  using std::sin;
  using std::sqrt;

  const Real beta = beta_d, eps0 = eps0_d;
  RawTrace<Real> tr;
  Real s = s1;
  Real vx = -cos(Real(v1)), vz = sin(Real(v1));  // outgoing from the lower wall
  int side = -1;                                 // wall of the current collision

  auto record = [&](const Real& v_angle) {
    tr.s.push_back(s);
    tr.v.push_back(v_angle);
    // phi = atan2(d.T, d.n) with the boundary frame of the side we sit on:
    // lower wall T = (-1, zp)/w, n = (zp, 1)/w; upper T = (1, zp)/w,
    // n = (zp, -1)/w (unit factors cancel inside atan2).
    const Real zp = pow(s, beta - 1);
    Real t_comp, n_comp;
    if (side < 0) {
      t_comp = -vx + zp * vz;
      n_comp = zp * vx + vz;
    } else {
      t_comp = vx + zp * vz;
      n_comp = zp * vx - vz;
    }
    tr.phi.push_back(atan2(t_comp, n_comp));
  };
  record(Real(v1));

  while (static_cast<int>(tr.s.size()) < max_collisions) {
    const int tgt = -side;
    const Real px = s;
    const Real pz = Real(side) * pow(s, beta) / beta;

    Real t_hit;  // flight to the next chart collision
    Real x_hit;
    if (vx == 0) {
      x_hit = px;
      t_hit = (Real(tgt) * pow(px, beta) / beta - pz) / vz;
      if (!(t_hit > 0)) return tr;  // degenerate vertical ray
    } else {
      const Real m = vz / vx;
      auto G = [&](const Real& x) {
        return pz + (x - px) * m - Real(tgt) * pow(x, beta) / beta;
      };
      // Monotone split at G'(x) = 0, i.e. x^(beta-1) = tgt*m (when positive).
      std::vector<Real> knots{Real(0), eps0};
      const Real mm = Real(tgt) * m;
      if (mm > 0) {
        const Real xs = pow(mm, 1 / (beta - 1));
        if (xs > 0 && xs < eps0) knots.insert(knots.begin() + 1, xs);
      }
      bool found = false;
      Real best_t{};
      Real best_x{};
      for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const Real a = knots[k], b = knots[k + 1];
        const int ga = sign_of(G(a)), gb = sign_of(G(b));
        Real root;
        if (ga == 0)
          root = a;
        else if (gb == 0)
          root = b;
        else if (ga != gb)
          root = bisect<Real>(G, a, b, ga);
        else
          continue;
        const Real t = (root - px) / vx;
        if (t > 0 && root > 0 && (!found || t < best_t)) {
          found = true;
          best_t = t;
          best_x = root;
        }
      }
      if (!found) {
        tr.clean_exit = true;  // the ray leaves the chart without a collision
        return tr;
      }
      t_hit = best_t;
      x_hit = best_x;
    }
    if (!(x_hit > 0) || x_hit > eps0) {
      tr.clean_exit = true;
      return tr;
    }

    // Specular reflection at (x_hit, tgt * x_hit^beta/beta).
    const Real zp = pow(x_hit, beta - 1);
    const Real w = sqrt(1 + zp * zp);
    const Real nx = zp / w, nz = Real(-tgt) / w;  // inward normal
    const Real d = vx * nx + vz * nz;
    vx -= 2 * d * nx;
    vz -= 2 * d * nz;
    s = x_hit;
    side = tgt;
    tr.tau.push_back(t_hit);
    record(atan2(abs(vz), -vx));
  }
  return tr;  // truncated by the cap; not a clean exit
}

// One reduced step: solve s' = s - (s'^beta + s^beta)/(beta tan v) by fixed
// point, return s' (or a negative value when the iteration leaves the chart).
double reduced_step(double beta, double eps0, double s, double v,
                    const SeriesOptions& opt) {
  const double tv = std::tan(v);
  if (tv == 0.0) return -1.0;
  const double sb = std::pow(s, beta);
  double sp = s;
  for (int i = 0; i < opt.fixed_point_max_iter; ++i) {
    const double next = s - (std::pow(sp, beta) + sb) / (beta * tv);
    if (!(next > 0.0) || next > eps0) return -1.0;
    if (std::abs(next - sp) <= opt.fixed_point_tol * sp) return next;
    sp = next;
  }
  return sp;
}

// ---------------------------------------------------------------------------
// Assembly of per-collision quantities, markers and the expansion factor.

double entry_curvature(const Table& table, const SeriesOptions& opt) {
  if (opt.entry_curvature > 0) return opt.entry_curvature;
  return 2.0 / table.params().wall_radius + 1.0 / 3.0;
}

SeriesResult assemble(const Table& table, const std::vector<double>& s,
                      const std::vector<double>& v, const std::vector<double>& tau,
                      const SeriesOptions& opt) {
  SeriesResult out;
  const double beta = table.params().beta;
  const int N = static_cast<int>(s.size());
  out.rec.resize(N);
  out.tau_exit = opt.entry_flight;

  double B = 0.0;  // outgoing wavefront curvature, filled per collision
  double logL = 0.0;
  const double B0 = entry_curvature(table, opt);
  logL += std::log1p(opt.entry_flight * B0);

  for (int n = 0; n < N; ++n) {
    SeriesRecord& r = out.rec[n];
    r.s = s[n];
    r.v = v[n];
    r.alpha = std::atan(std::pow(s[n], beta - 1.0));
    r.gamma = std::asin(std::min(1.0, std::abs(std::sin(v[n] - r.alpha))));
    const double cphi = std::sin(r.gamma);
    r.H = std::pow(table.chart_arclength(s[n]), beta) * cphi;

    const double K = table.chart_curvature(s[n]);
    const double b_in = n == 0 ? B0 / (1.0 + opt.entry_flight * B0)
                               : B / (1.0 + tau[n - 1] * B);
    B = b_in + 2.0 * K / cphi;

    if (n < N - 1) {
      r.tau = tau[n];
      r.lambda = tau[n] * B;
      logL += std::log1p(r.lambda);
    } else {
      r.tau = 0.0;
      r.lambda = 0.0;
      logL += std::log1p(opt.entry_flight * B);
    }
  }
  out.log_Lambda = logL;

  // Markers from the profile of alpha and gamma along the series.
  int n2 = 1;
  for (int n = 1; n <= N; ++n)
    if (out.rec[n - 1].alpha < out.rec[n2 - 1].alpha) n2 = n;
  out.markers.N2 = n2;
  for (int n = n2; n >= 1; --n)
    if (out.rec[n - 1].gamma < opt.gamma_bar) {
      out.markers.N1 = n;
      break;
    }
  for (int n = N; n >= n2; --n)
    if (out.rec[n - 1].gamma > opt.gamma_bar) {
      out.markers.N3 = n;
      break;
    }

  if (out.markers.N1 >= 1) {
    std::vector<double> h;
    for (int n = out.markers.N1; n <= n2; ++n) h.push_back(out.rec[n - 1].H);
    out.C_N = median(std::move(h));
  }
  return out;
}

template <typename Real>
SeriesResult run_exact(const Table& table, SeriesSeed seed, const SeriesOptions& opt) {
  RawTrace<Real> tr = trace_chart<Real>(table.params().beta, table.params().eps0,
                                        seed.s1, seed.v1, opt.max_collisions);
  std::vector<double> s(tr.s.size()), v(tr.v.size()), tau(tr.tau.size());
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    s[i] = static_cast<double>(tr.s[i]);
    v[i] = static_cast<double>(tr.v[i]);
  }
  for (std::size_t i = 0; i < tr.tau.size(); ++i) tau[i] = static_cast<double>(tr.tau[i]);
  return assemble(table, s, v, tau, opt);
}

SeriesResult run_reduced(const Table& table, SeriesSeed seed, const SeriesOptions& opt) {
  const double beta = table.params().beta;
  const double eps0 = table.params().eps0;
  std::vector<double> s{seed.s1}, v{seed.v1}, tau;
  while (static_cast<int>(s.size()) < opt.max_collisions) {
    const double sp = reduced_step(beta, eps0, s.back(), v.back(), opt);
    if (!(sp > 0.0)) break;
    tau.push_back((std::pow(s.back(), beta) + std::pow(sp, beta)) /
                  (beta * std::sin(v.back())));
    s.push_back(sp);
    const double vn = v.back() + 2.0 * std::atan(std::pow(sp, beta - 1.0));
    if (vn >= M_PI) {
      // The update passed pi: the outgoing ray runs outward along the wall it
      // just hit and leaves the chart. Record the collision with the folded
      // angle (as the ray tracer does) and stop.
      v.push_back(2.0 * M_PI - vn);
      break;
    }
    v.push_back(vn);
  }
  return assemble(table, s, v, tau, opt);
}

}  // namespace

SeriesSeed seed_for_target(const TableParams& params, double target, double u) {
  // First inclination a1 = target^(-beta/(2beta-1)); the outgoing ray makes
  // the angle u*a1 with the wall, u in [1, 3]. Targets below ~50 would push
  // s1 past the chart end.
  const double beta = params.beta;
  const double a1 = std::pow(target, -beta / (2.0 * beta - 1.0));
  SeriesSeed seed;
  seed.s1 = std::pow(std::tan(a1), 1.0 / (beta - 1.0));
  seed.v1 = (1.0 + u) * a1;
  return seed;
}

SeriesResult run_series(const Table& table, SeriesSeed seed, SeriesEngine engine,
                        const SeriesOptions& opt) {
  switch (engine) {
    case SeriesEngine::Reduced:
      return run_reduced(table, seed, opt);
    case SeriesEngine::Extended:
      return run_exact<float50>(table, seed, opt);
    case SeriesEngine::Exact:
    default:
      return run_exact<double>(table, seed, opt);
  }
}

double compare_routes(const Table& table, SeriesSeed seed, const SeriesOptions& opt) {
  const SeriesResult exact = run_series(table, seed, SeriesEngine::Exact, opt);
  const double beta = table.params().beta;
  const double eps0 = table.params().eps0;
  double worst = 0.0;
  for (int n = 0; n + 1 < exact.N(); ++n) {
    const double sp = reduced_step(beta, eps0, exact.rec[n].s, exact.rec[n].v, opt);
    if (!(sp > 0.0)) break;
    const double ref = exact.rec[n + 1].s;
    worst = std::max(worst, std::abs(sp - ref) / ref);
  }
  return worst;
}

double stretch_consistency(const Table& table, SeriesSeed seed, const SeriesOptions& opt) {
  RawTrace<double> tr = trace_chart<double>(table.params().beta, table.params().eps0,
                                            seed.s1, seed.v1, opt.max_collisions);
  const int N = static_cast<int>(tr.s.size());
  if (N < 2) return 0.0;

  // Scalar route: the wavefront recursion, as in assemble().
  const double B0 = entry_curvature(table, opt);
  double B = 0.0;
  double log_prod = 0.0;
  std::vector<double> Bplus(N);
  for (int n = 0; n < N; ++n) {
    const double cphi = std::cos(tr.phi[n]);
    const double K = table.chart_curvature(tr.s[n]);
    const double b_in = n == 0 ? B0 / (1.0 + opt.entry_flight * B0)
                               : B / (1.0 + tr.tau[n - 1] * B);
    B = b_in + 2.0 * K / cphi;
    Bplus[n] = B;
    if (n < N - 1) log_prod += std::log1p(tr.tau[n] * B);
  }

  // Matrix route: push the tangent vector of the same wavefront through the
  // collision derivatives. An outgoing wavefront of curvature B corresponds
  // to dphi/dr = B cos(phi) - K.
  double dr = 1.0;
  double dphi = Bplus[0] * std::cos(tr.phi[0]) - table.chart_curvature(tr.s[0]);
  double log_stretch = 0.0;
  for (int n = 0; n + 1 < N; ++n) {
    const double tau = tr.tau[n];
    const double K = table.chart_curvature(tr.s[n]);
    const double K1 = table.chart_curvature(tr.s[n + 1]);
    const double c = std::cos(tr.phi[n]);
    const double c1 = std::cos(tr.phi[n + 1]);
    const double f = -1.0 / c1;
    const double a11 = f * (tau * K + c);
    const double a12 = f * tau;
    const double a21 = f * (tau * K * K1 + K * c1 + K1 * c);
    const double a22 = f * (tau * K1 + c1);
    const double ndr = a11 * dr + a12 * dphi;
    const double ndphi = a21 * dr + a22 * dphi;
    log_stretch += std::log(std::abs(ndr * c1) / std::abs(dr * c));
    // Renormalize to keep the vector O(1) over long series.
    const double scale = std::abs(ndr);
    dr = ndr / scale;
    dphi = ndphi / scale;
  }
  return std::abs(log_prod - log_stretch);
}

// ---------------------------------------------------------------------------
// Ensemble digest.

namespace {

struct PerSeries {
  bool ok = false;
  int N = 0, N1 = 0, N2 = 0, N3 = 0;
  double alpha1 = 0;
  bool have_window = false;
  double a_slope = 0, g_slope = 0, t_slope = 0;
  double medH = 0, C = 0, maxdrift = 0;
  bool have_drift = false;
  double drift_slope = 0;
  double logL = 0;
  bool have_lam_in = false, have_lam_out = false;
  double lam_in = 0, lam_out = 0;
  double sum1 = 0, sum_mid = 0, telescope = 0;
  double seg[4] = {0, 0, 0, 0};
  double w_margin = std::numeric_limits<double>::max();
  double u_excess = 0;
};

// Log-log slope over n in [lo, hi], sampled log-uniformly so every decade of
// the window carries the same weight (enumerating all integers would let the
// top decade dominate the fit).
double window_slope(const SeriesResult& sr, int lo, int hi, double (*pick)(const SeriesRecord&)) {
  std::vector<double> x, y;
  const double ratio = double(hi) / double(lo);
  const int K = 96;
  int last = 0;
  for (int k = 0; k <= K; ++k) {
    const int n = static_cast<int>(std::lround(lo * std::pow(ratio, double(k) / K)));
    if (n <= last || n > hi) continue;
    last = n;
    const double val = pick(sr.rec[n - 1]);
    if (val > 0) {
      x.push_back(n);
      y.push_back(val);
    }
  }
  return fit_loglog(x, y).exponent;
}

PerSeries digest_series(const SeriesResult& sr, int min_length) {
  PerSeries d;
  d.N = sr.N();
  d.N1 = sr.markers.N1;
  d.N2 = sr.markers.N2;
  d.N3 = sr.markers.N3;
  if (d.N < min_length || d.N1 < 1 || d.N2 <= d.N1 || d.N3 < d.N2) return d;
  d.ok = true;
  d.alpha1 = sr.rec[0].alpha;
  d.logL = sr.log_Lambda;

  const double Nd = d.N;
  const int wlo = std::max(10, static_cast<int>(std::pow(Nd, 0.2)));
  int whi = std::min(static_cast<int>(std::pow(Nd, 0.8)), d.N2);
  // The per-step laws describe the small-angle entering regime (n/N -> 0 in
  // the limit); at finite N the upper end must stop short of the turning
  // region, where every slope bends. v grows monotonically, so cap the
  // window where v passes 0.5 rad.
  while (whi > wlo && sr.rec[whi - 1].v > 0.5) --whi;
  if (whi - wlo >= 8) {
    d.have_window = true;
    d.a_slope = window_slope(sr, wlo, whi, [](const SeriesRecord& r) { return r.alpha; });
    d.g_slope = window_slope(sr, wlo, whi, [](const SeriesRecord& r) { return r.gamma; });
    d.t_slope = window_slope(sr, wlo, whi, [](const SeriesRecord& r) { return r.tau; });
  }

  // Adiabatic level and drift around it on [N1, N2].
  d.C = sr.C_N;
  std::vector<double> h;
  for (int n = d.N1; n <= d.N2; ++n) h.push_back(sr.rec[n - 1].H);
  d.medH = median(h);
  if (d.C > 0) {
    for (int n = d.N1; n <= d.N2; ++n)
      d.maxdrift = std::max(d.maxdrift, std::abs(sr.rec[n - 1].H - d.C) / d.C);
    const int dhi = d.N1 + std::max(6, (d.N2 - d.N1) / 3);
    std::vector<double> x, y;
    for (int n = d.N1; n <= std::min(dhi, d.N2); ++n) {
      const double dev = std::abs(sr.rec[n - 1].H - d.C) / d.C;
      if (dev > 1e-300) {
        x.push_back(n);
        y.push_back(dev);
      }
    }
    if (x.size() >= 6) {
      d.have_drift = true;
      d.drift_slope = fit_loglog(x, y).exponent;
    }
  }

  // n * lambda_n plateaus on the two monotone halves.
  {
    const int llo = std::max(1, static_cast<int>(std::pow(Nd, 0.3)));
    const int lhi = std::min(d.N2, static_cast<int>(std::pow(Nd, 0.7)));
    std::vector<double> vals;
    for (int n = llo; n <= lhi; ++n)
      if (sr.rec[n - 1].lambda > 0) vals.push_back(n * sr.rec[n - 1].lambda);
    if (vals.size() >= 5) {
      d.have_lam_in = true;
      d.lam_in = median(std::move(vals));
    }
  }
  {
    const int llo = std::max(d.N2 + 1, d.N - static_cast<int>(std::pow(Nd, 0.7)));
    const int lhi = std::min(d.N - 1, d.N - static_cast<int>(std::pow(Nd, 0.3)));
    std::vector<double> vals;
    for (int n = llo; n <= lhi; ++n)
      if (sr.rec[n - 1].lambda > 0) vals.push_back((d.N - n + 1) * sr.rec[n - 1].lambda);
    if (vals.size() >= 5) {
      d.have_lam_out = true;
      d.lam_out = median(std::move(vals));
    }
  }

  // Flight-time sums over the entering segment and the middle segment, and
  // the exact telescoping identity sum tau_n cos v_n = s_1 - s_{N1+1}.
  double tsum = 0, tele = 0;
  for (int n = 1; n <= d.N1; ++n) {
    tsum += sr.rec[n - 1].tau;
    tele += sr.rec[n - 1].tau * std::cos(sr.rec[n - 1].v);
  }
  d.sum1 = tsum;
  d.telescope = std::abs(tele - (sr.rec[0].s - sr.rec[d.N1].s)) / sr.rec[0].s;
  double msum = 0;
  for (int n = d.N1; n <= d.N2; ++n) msum += sr.rec[n - 1].tau;
  d.sum_mid = msum;

  d.seg[0] = double(d.N1) / Nd;
  d.seg[1] = double(d.N2 - d.N1) / Nd;
  d.seg[2] = double(d.N3 - d.N2) / Nd;
  d.seg[3] = double(d.N - d.N3) / Nd;

  // Entering-half monotonicity margins: v_n / alpha_n >= 2n and the
  // single-step ratio alpha_n / alpha_{n+1} staying 1 + O(1/n).
  for (int n = 1; n <= d.N2; ++n) {
    d.w_margin = std::min(d.w_margin, sr.rec[n - 1].v / sr.rec[n - 1].alpha - 2.0 * n);
    if (n < d.N2) {
      const double u = sr.rec[n - 1].alpha / sr.rec[n].alpha;
      d.u_excess = std::max(d.u_excess, n * (u - 1.0));
    }
  }
  return d;
}

FitSummary to_summary(const FitResult& f) {
  FitSummary s;
  s.slope = f.exponent;
  s.intercept = f.intercept;
  s.stderr_slope = f.stderr_exponent;
  s.n = f.points;
  return s;
}

double spread_over_mean(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  return mean > 0 ? (hi - lo) / mean : 0.0;
}

}  // namespace

CornerAsymptotics corner_asymptotics(const Table& table, const CornerEnsembleOptions& opt) {
  std::vector<PerSeries> per(opt.count);

  int workers = opt.workers > 0 ? opt.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, std::max(1, opt.count));

  // Each series draws from its own counter stream, so the digest does not
  // depend on the worker partition.
  auto job = [&](int w) {
    for (int i = w; i < opt.count; i += workers) {
      CounterRng rng(opt.seed, static_cast<std::uint64_t>(i));
      const double u = rng.uniform(opt.u_min, opt.u_max);
      const double target = std::exp(
          rng.uniform(std::log(opt.target_min), std::log(opt.target_max)));
      const SeriesSeed seed = seed_for_target(table.params(), target, u);
      per[i] = digest_series(run_series(table, seed, opt.engine, opt.series),
                             opt.min_length);
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& t : pool) t.join();
  }

  CornerAsymptotics out{};
  out.min_w_margin = std::numeric_limits<double>::max();

  std::vector<double> Ns, a1s, medHs, Nd_drift, drifts, logNs, logLs;
  std::vector<double> a_slopes, g_slopes, t_slopes, dslopes, lam_ins, lam_outs;
  std::vector<double> sum1_N, sum1_v, summid_v;
  // Decade buckets over N for stability diagnostics.
  std::vector<std::vector<double>> n1_by_decade, seg_by_decade[4];
  auto decade_of = [&](double N) {
    return std::max(0, static_cast<int>(std::floor(std::log10(N / opt.target_min) + 1e-9)));
  };

  for (const PerSeries& d : per) {
    if (!d.ok) continue;
    ++out.used;
    Ns.push_back(d.N);
    a1s.push_back(d.alpha1);
    medHs.push_back(d.medH);
    if (d.maxdrift > 0) {
      Nd_drift.push_back(d.N);
      drifts.push_back(d.maxdrift);
    }
    logNs.push_back(std::log(double(d.N)));
    logLs.push_back(d.logL);
    if (d.have_window) {
      a_slopes.push_back(d.a_slope);
      g_slopes.push_back(d.g_slope);
      t_slopes.push_back(d.t_slope);
    }
    if (d.have_drift) dslopes.push_back(d.drift_slope);
    if (d.have_lam_in) lam_ins.push_back(d.lam_in);
    if (d.have_lam_out) lam_outs.push_back(d.lam_out);
    if (d.sum1 > 0) {
      sum1_N.push_back(d.N);
      sum1_v.push_back(d.sum1);
    }
    summid_v.push_back(d.sum_mid);
    out.telescoping_residual = std::max(out.telescoping_residual, d.telescope);
    out.min_w_margin = std::min(out.min_w_margin, d.w_margin);
    out.max_n_u_excess = std::max(out.max_n_u_excess, d.u_excess);

    const int dec = decade_of(d.N);
    if (dec >= static_cast<int>(n1_by_decade.size())) {
      n1_by_decade.resize(dec + 1);
      for (auto& s : seg_by_decade) s.resize(dec + 1);
    }
    n1_by_decade[dec].push_back(double(d.N1) / double(d.N));
    for (int k = 0; k < 4; ++k) seg_by_decade[k][dec].push_back(d.seg[k]);
  }

  out.alpha1_vs_N = to_summary(fit_loglog(Ns, a1s));
  out.medianH_vs_N = to_summary(fit_loglog(Ns, medHs));
  out.maxdrift_vs_N = to_summary(fit_loglog(Nd_drift, drifts));
  out.logLambda_vs_logN = to_summary(fit_linear(logNs, logLs));
  out.sum_tau_first_vs_N = to_summary(fit_loglog(sum1_N, sum1_v));
  {
    std::vector<double> mN, mV;
    for (std::size_t i = 0; i < Ns.size(); ++i)
      if (summid_v[i] > 0) {
        mN.push_back(Ns[i]);
        mV.push_back(summid_v[i]);
      }
    out.sum_tau_middle_vs_N = to_summary(fit_loglog(mN, mV));
  }
  out.alpha_window_slope = median(a_slopes);
  out.gamma_window_slope = median(g_slopes);
  out.tau_window_slope = median(t_slopes);
  out.perstep_drift_slope = median(dslopes);
  out.lambda_entering = median(lam_ins);
  out.lambda_exiting = median(lam_outs);

  std::vector<double> seg_spread_src[4];
  for (std::size_t dec = 0; dec < n1_by_decade.size(); ++dec) {
    if (n1_by_decade[dec].size() < 10) continue;
    out.N1_over_N_decade_medians.push_back(median(n1_by_decade[dec]));
    for (int k = 0; k < 4; ++k)
      seg_spread_src[k].push_back(median(seg_by_decade[k][dec]));
  }
  for (int k = 0; k < 4; ++k)
    out.segment_proportion_spread.push_back(spread_over_mean(seg_spread_src[k]));

  if (out.used == 0) out.min_w_margin = 0.0;
  return out;
}

}  // namespace flatcusp
