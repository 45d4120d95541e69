#include "flatcusp/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "flatcusp/corner_series.hpp"
#include "flatcusp/dynamics.hpp"
#include "flatcusp/induced.hpp"
#include "flatcusp/rng.hpp"
#include "flatcusp/stats.hpp"

namespace flatcusp {

namespace {

using nlohmann::json;

TableParams table_params(const Config& cfg) {
  TableParams p;
  p.beta = cfg.get_double("table.beta");
  p.eps0 = cfg.get_double("table.eps0");
  p.join_radius = cfg.get_double("table.join_radius");
  p.wall_radius = cfg.get_double("table.wall_radius");
  p.wall_center_x = cfg.get_double("table.wall_center_x");
  return p;
}

SeriesOptions series_options(const Config& cfg) {
  SeriesOptions o;
  o.gamma_bar = cfg.get_double("series.gamma_bar");
  o.entry_flight = cfg.get_double("series.entry_flight");
  o.entry_curvature = cfg.get_double("series.entry_curvature");
  o.fixed_point_tol = cfg.get_double("series.fixed_point_tol");
  o.fixed_point_max_iter = cfg.get_int("series.fixed_point_max_iter");
  o.max_collisions = cfg.get_int("series.max_collisions");
  return o;
}

SeriesEngine engine_from(const std::string& name) {
  if (name == "reduced") return SeriesEngine::Reduced;
  if (name == "extended") return SeriesEngine::Extended;
  if (name == "exact") return SeriesEngine::Exact;
  throw std::runtime_error("corner.engine must be exact, reduced or extended (got '" +
                           name + "')");
}

int worker_count(const Config& cfg) {
  int w = cfg.get_int("run.workers");
  if (w <= 0) w = static_cast<int>(std::thread::hardware_concurrency());
  return w < 1 ? 1 : w;
}

json fit_json(const FitResult& f) {
  return json{{"exponent", f.exponent},
              {"stderr", f.stderr_exponent},
              {"intercept", f.intercept},
              {"window", {f.window_lo, f.window_hi}},
              {"points", f.points},
              {"method", f.method}};
}

json fit_json(const FitSummary& f) {
  return json{{"slope", f.slope},
              {"stderr", f.stderr_slope},
              {"intercept", f.intercept},
              {"points", f.n}};
}

json curve_json(const TailCurve& c) {
  return json{{"N", c.N}, {"value", c.value}, {"stderr", c.stderr_}, {"count", c.count}};
}

std::string curve_csv(const TailCurve& c, const char* value_name) {
  std::ostringstream os;
  os << "N," << value_name << ",stderr,count\n";
  os.precision(12);
  for (std::size_t i = 0; i < c.N.size(); ++i)
    os << c.N[i] << "," << c.value[i] << "," << c.stderr_[i] << "," << c.count[i] << "\n";
  return os.str();
}

// Write the report and any side artifacts, then append them to MANIFEST.json.
std::string finish(const Config& cfg, const std::string& command, json rep,
                   const std::vector<std::pair<std::string, std::string>>& artifacts) {
  rep["command"] = command;
  rep["config_hash"] = cfg.hash();
  rep["seed"] = cfg.get_u64("run.seed");
  rep["config"] = cfg.entries();

  namespace fs = std::filesystem;
  const fs::path out(cfg.get_string("run.out"));
  fs::create_directories(out);

  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out / name);
    f << text;
    written.push_back(name);  // relative to the manifest's own directory
  };
  const std::string text = rep.dump(2) + "\n";
  put(command + "_report.json", text);
  for (const auto& [name, content] : artifacts) put(name, content);

  const fs::path mpath = out / "MANIFEST.json";
  json manifest = json::array();
  if (fs::exists(mpath)) {
    std::ifstream f(mpath);
    try {
      manifest = json::parse(f);
      if (!manifest.is_array()) manifest = json::array();
    } catch (const json::parse_error&) {
      manifest = json::array();
    }
  }
  for (const std::string& p : written)
    manifest.push_back(json{{"path", p},
                            {"command", command},
                            {"config_hash", cfg.hash()},
                            {"seed", cfg.get_u64("run.seed")}});
  std::ofstream mf(mpath);
  mf << manifest.dump(2) << "\n";
  return text;
}

json tallies_json(const OrbitTallies& t) {
  json hist = json::array();
  for (const auto& [len, cnt] : t.run_hist) hist.push_back({len, cnt});
  json pairs = json::array();
  for (const auto& [n, m] : t.transition_pairs) pairs.push_back({n, m});
  return json{{"raw", t.raw_collisions},
              {"m", t.m_points},
              {"dead", t.dead_flights},
              {"hist", std::move(hist)},
              {"pairs", std::move(pairs)}};
}

OrbitTallies tallies_from(const json& j) {
  OrbitTallies t;
  t.raw_collisions = j.at("raw").get<long long>();
  t.m_points = j.at("m").get<long long>();
  t.dead_flights = j.at("dead").get<long long>();
  for (const auto& e : j.at("hist")) t.run_hist[e.at(0).get<int>()] = e.at(1).get<long long>();
  for (const auto& e : j.at("pairs"))
    t.transition_pairs.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  return t;
}

// Harvest split into per-stream jobs, with completed streams checkpointed to
// disk so an interrupted long run resumes without recomputation. The merged
// result is identical to harvest_orbit with the same worker count.
OrbitTallies harvest_checkpointed(const Config& cfg, const Table& table,
                                  const InducedMap& induced, const HarvestOptions& h,
                                  const std::string& command) {
  namespace fs = std::filesystem;
  const int streams = h.workers;
  const long long quota = h.min_returns / streams + 1;
  const fs::path out(cfg.get_string("run.out"));
  fs::create_directories(out);
  const fs::path cpath = out / (command + "_checkpoint.json");

  std::map<int, OrbitTallies> done;
  if (fs::exists(cpath)) {
    std::ifstream f(cpath);
    try {
      const json cp = json::parse(f);
      if (cp.at("config_hash") == cfg.hash() && cp.at("quota") == quota &&
          cp.at("streams") == streams)
        for (const auto& [key, val] : cp.at("done").items())
          done[std::stoi(key)] = tallies_from(val);
    } catch (const std::exception&) {
      done.clear();  // stale or foreign checkpoint; recompute everything
    }
  }

  std::mutex mu;
  auto save = [&]() {
    json cp{{"config_hash", cfg.hash()}, {"quota", quota}, {"streams", streams}};
    json d = json::object();
    for (const auto& [s, t] : done) d[std::to_string(s)] = tallies_json(t);
    cp["done"] = std::move(d);
    std::ofstream f(cpath);
    f << cp.dump() << "\n";
  };

  auto job = [&](int w) {
    for (int s = w; s < streams; s += h.workers) {
      {
        std::lock_guard<std::mutex> lock(mu);
        if (done.count(s)) continue;
      }
      OrbitTallies t = harvest_stream(table, induced, h, s, quota);
      std::lock_guard<std::mutex> lock(mu);
      done[s] = std::move(t);
      save();
    }
  };
  if (h.workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < h.workers; ++w) pool.emplace_back(job, w);
    for (auto& th : pool) th.join();
  }

  OrbitTallies merged;
  for (int s = 0; s < streams; ++s) merged.merge(done.at(s));
  return merged;
}

}  // namespace

std::string cmd_table(const Config& cfg) {
  const Table table(table_params(cfg));
  json rep;
  rep["params"] = {{"beta", table.params().beta},
                   {"eps0", table.params().eps0},
                   {"join_radius", table.params().join_radius},
                   {"wall_radius", table.params().wall_radius},
                   {"wall_center_x", table.params().wall_center_x}};
  rep["derived"] = {
      {"chart_end_upper", {table.chart_end_upper().x, table.chart_end_upper().y}},
      {"join_center_upper", {table.join_center_upper().x, table.join_center_upper().y}},
      {"junction_upper", {table.junction_upper().x, table.junction_upper().y}},
      {"perp_hit_point", {table.perp_hit_point().x, table.perp_hit_point().y}},
      {"join_start_angle", table.join_start_angle()},
      {"join_sweep", table.join_sweep()},
      {"wall_theta_min", table.wall_theta_min()},
      {"cusp_arm_length", table.cusp_arm_length()},
      {"join_length", table.join_length()},
      {"wall_length", table.wall_length()},
      {"perimeter", table.perimeter()},
      {"r_vertex", table.r_vertex()},
      {"r_perp_hit", table.r_perp_hit()},
      {"diameter_bound", table.diameter_bound()}};

  // Tangency where the cusp arms meet the join arcs (should vanish), corner
  // angle where the joins meet the wall (must not vanish), and the
  // perpendicular-hit property of the cusp axis at D.
  const double h = 1e-12;
  auto tangency = [&](double r) {
    const Vec2 a = table.tangent_at(table.wrap(r - h));
    const Vec2 b = table.tangent_at(table.wrap(r + h));
    return std::abs(a.cross(b));
  };
  const double r_E2 = table.arc_start(ArcId::CuspLower);
  const double r_E1 = table.arc_start(ArcId::JoinUpper);
  const double r_J1 = table.arc_start(ArcId::Wall);
  rep["residuals"] = {
      {"tangency_lower_chart_end", tangency(r_E2)},
      {"tangency_upper_chart_end", tangency(r_E1)},
      {"corner_angle_junction", std::asin(std::min(1.0, tangency(r_J1)))},
      {"perp_hit_tangent_dot_axis", std::abs(table.tangent_at(table.r_perp_hit()).x)},
      {"perp_hit_on_axis", std::abs(table.point_at(table.r_perp_hit()).y)}};

  // Chart arclength round trip.
  double worst = 0;
  for (int i = 1; i <= 64; ++i) {
    const double s = table.params().eps0 * i / 64.0;
    worst = std::max(worst, std::abs(table.chart_s_from_arclength(table.chart_arclength(s)) - s));
  }
  rep["chart_roundtrip_max_err"] = worst;

  double kmin = 1e300, kmax = 0;
  for (int i = 0; i <= 2000; ++i) {
    const double r = table.perimeter() * i / 2000.0;
    const double k = table.curvature_at(table.wrap(r));
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  rep["curvature_range"] = {kmin, kmax};
  return finish(cfg, "table", std::move(rep), {});
}

std::string cmd_corner(const Config& cfg) {
  const Table table(table_params(cfg));
  CornerEnsembleOptions opt;
  opt.count = cfg.get_int("corner.count");
  opt.target_min = cfg.get_double("corner.target_min");
  opt.target_max = cfg.get_double("corner.target_max");
  opt.u_min = cfg.get_double("corner.u_min");
  opt.u_max = cfg.get_double("corner.u_max");
  opt.seed = cfg.get_u64("run.seed");
  opt.workers = worker_count(cfg);
  opt.min_length = cfg.get_int("corner.min_length");
  opt.series = series_options(cfg);
  opt.engine = engine_from(cfg.get_string("corner.engine"));

  const CornerAsymptotics a = corner_asymptotics(table, opt);
  if (a.used < std::max(8, opt.count / 4)) {
    std::ostringstream os;
    os << "corner ensemble: only " << a.used << " of " << opt.count
       << " series were valid (discarded " << opt.count - a.used
       << ": shorter than " << opt.min_length << " collisions or without the "
       << "entering/turning/exiting markers)";
    throw std::runtime_error(os.str());
  }

  // Dual-route and dual-bookkeeping consistency probes on a few fixed seeds.
  json compare_table = json::array();
  double route = 0, stretch = 0;
  for (double target : {100.0, 316.0, 1000.0, 3162.0, 10000.0}) {
    const SeriesSeed seed = seed_for_target(table.params(), target, 2.0);
    const double dev = compare_routes(table, seed, opt.series);
    route = std::max(route, dev);
    stretch = std::max(stretch, stretch_consistency(table, seed, opt.series));
    compare_table.push_back(json{{"target", target}, {"max_rel_dev", dev}});
  }

  json rep;
  rep["used"] = a.used;
  rep["discarded"] = opt.count - a.used;
  if (cfg.get_int("corner.compare") != 0) rep["route_compare"] = compare_table;
  rep["alpha1_vs_N"] = fit_json(a.alpha1_vs_N);
  rep["alpha_window_slope"] = a.alpha_window_slope;
  rep["gamma_window_slope"] = a.gamma_window_slope;
  rep["tau_window_slope"] = a.tau_window_slope;
  rep["medianH_vs_N"] = fit_json(a.medianH_vs_N);
  rep["maxdrift_vs_N"] = fit_json(a.maxdrift_vs_N);
  rep["perstep_drift_slope"] = a.perstep_drift_slope;
  rep["logLambda_vs_logN"] = fit_json(a.logLambda_vs_logN);
  rep["lambda_entering"] = a.lambda_entering;
  rep["lambda_exiting"] = a.lambda_exiting;
  rep["sum_tau_first_vs_N"] = fit_json(a.sum_tau_first_vs_N);
  rep["sum_tau_middle_vs_N"] = fit_json(a.sum_tau_middle_vs_N);
  rep["telescoping_residual"] = a.telescoping_residual;
  rep["N1_over_N_decade_medians"] = a.N1_over_N_decade_medians;
  rep["segment_proportion_spread"] = a.segment_proportion_spread;
  rep["min_w_margin"] = a.min_w_margin;
  rep["max_n_u_excess"] = a.max_n_u_excess;
  rep["route_agreement_max_rel"] = route;
  rep["stretch_agreement_max_abs_log"] = stretch;

  // A sample series profile for plotting.
  const SeriesResult sr = run_series(
      table, seed_for_target(table.params(), 1000.0, 2.0), opt.engine, opt.series);
  std::ostringstream os;
  os << "n,s,alpha,v,gamma,tau,lambda,H\n";
  os.precision(12);
  for (int n = 1; n <= sr.N(); ++n) {
    const SeriesRecord& r = sr.rec[n - 1];
    os << n << "," << r.s << "," << r.alpha << "," << r.v << "," << r.gamma << ","
       << r.tau << "," << r.lambda << "," << r.H << "\n";
  }
  return finish(cfg, "corner", std::move(rep), {{"corner_series.csv", os.str()}});
}

std::string cmd_tail(const Config& cfg) {
  const Table table(table_params(cfg));
  const InducedMap induced(table, cfg.get_int("induced.K0"), cfg.get_int("induced.k0"));
  HarvestOptions h;
  h.min_returns = cfg.get_int64("tail.returns");
  h.burn_in = cfg.get_int64("run.burn_in");
  h.workers = worker_count(cfg);
  h.seed = cfg.get_u64("run.seed");
  const OrbitTallies t = harvest_checkpointed(cfg, table, induced, h, "tail");
  const CellStatistics cs =
      cell_statistics(t.run_hist, t.raw_collisions, t.m_points, induced.K0(),
                      cfg.get_int64("tail.min_bin_count"));

  json rep;
  rep["returns"] = cs.returns;
  rep["raw_collisions"] = cs.raw_collisions;
  rep["cells_total"] = cs.cells_total;
  rep["dead_flights"] = t.dead_flights;
  rep["fit_cells"] = fit_json(cs.fit_cells);
  rep["fit_tail_M"] = fit_json(cs.fit_tail_M);
  rep["fit_tail_full"] = fit_json(cs.fit_tail_full);
  rep["hill_tail_M"] = fit_json(cs.hill_tail_M);
  rep["cell_measure"] = curve_json(cs.cell_measure);
  rep["tail_M"] = curve_json(cs.tail_M);
  rep["tail_full"] = curve_json(cs.tail_full);

  // A bounded stream of literal induced returns for downstream analysis.
  std::ostringstream os;
  os << "R,cell,Lambda,log_Lambda,r_entry,phi_entry\n";
  os.precision(12);
  CounterRng rng(h.seed, 0xfa9u);
  PhasePoint x = sample_mu(table, rng);
  for (int i = 0; i < 5000;) {
    if (!induced.in_M(x)) {
      x = sample_mu(table, rng);
      continue;
    }
    auto rs = induced.step(x);
    if (!rs) {
      x = sample_mu(table, rng);
      continue;
    }
    os << rs->R << "," << rs->cell << "," << std::exp(rs->log_Lambda) << ","
       << rs->log_Lambda << "," << rs->r_entry << "," << rs->phi_entry << "\n";
    x = rs->exit;
    ++i;
  }
  return finish(cfg, "tail", std::move(rep),
                {{"tail_cells.csv", curve_csv(cs.cell_measure, "density")},
                 {"tail_M.csv", curve_csv(cs.tail_M, "ccdf")},
                 {"tail_full.csv", curve_csv(cs.tail_full, "ccdf")},
                 {"returns_sample.csv", os.str()}});
}

std::string cmd_expansion(const Config& cfg) {
  const Table table(table_params(cfg));
  const InducedMap induced(table, cfg.get_int("induced.K0"), cfg.get_int("induced.k0"));
  FanCurveOptions fan;
  fan.cone_slope = cfg.get_double("expansion.cone_slope");
  fan.t_min = cfg.get_double("expansion.fan_t_min");
  fan.t_max = cfg.get_double("expansion.fan_t_max");
  fan.samples = cfg.get_int("expansion.fan_samples");
  fan.n0 = cfg.get_int("expansion.n0");

  const ExpansionSumResult at_n0 = one_step_expansion_sum(table, induced, fan);
  // The doubled-threshold sum is the subset sum of the same scan.
  double sum_2n0 = 0;
  std::set<int> cells_2n0;
  for (const FanPiece& p : at_n0.pieces)
    if (p.cell >= 2 * fan.n0) {
      sum_2n0 += std::exp(-p.min_log_Lambda);
      cells_2n0.insert(p.cell);
    }

  // Dual bookkeeping of the expansion factor on a batch of corner series.
  const SeriesOptions sopt = series_options(cfg);
  const int count = cfg.get_int("expansion.series_count");
  const double target = cfg.get_double("expansion.series_target");
  CounterRng rng(cfg.get_u64("run.seed"), 0xe1u);
  double stretch = 0;
  for (int i = 0; i < count; ++i) {
    const SeriesSeed seed =
        seed_for_target(table.params(), target * rng.uniform(0.5, 2.0), rng.uniform(1.0, 3.0));
    stretch = std::max(stretch, stretch_consistency(table, seed, sopt));
  }

  // The expansion-law exponent must not depend on the curvature used to seed
  // the wavefront before the series: fit it for two seeds an order apart.
  CornerEnsembleOptions eopt;
  eopt.count = std::min(cfg.get_int("corner.count"), 400);
  eopt.target_min = cfg.get_double("corner.target_min");
  eopt.target_max = cfg.get_double("corner.target_max");
  eopt.seed = cfg.get_u64("run.seed");
  eopt.workers = worker_count(cfg);
  eopt.series = sopt;
  const CornerAsymptotics law_a = corner_asymptotics(table, eopt);
  eopt.series.entry_curvature = 10.0 * (2.0 / table.params().wall_radius + 1.0 / 3.0);
  const CornerAsymptotics law_b = corner_asymptotics(table, eopt);
  const double slope_gap =
      std::abs(law_a.logLambda_vs_logN.slope - law_b.logLambda_vs_logN.slope);
  const double slope_err = std::hypot(law_a.logLambda_vs_logN.stderr_slope,
                                      law_b.logLambda_vs_logN.stderr_slope);

  json rep;
  rep["n0"] = fan.n0;
  rep["sum_n0"] = at_n0.sum;
  rep["sum_2n0"] = sum_2n0;
  rep["pieces_n0"] = at_n0.pieces.size();
  rep["cells_seen_n0"] = at_n0.cells_seen;
  rep["cells_seen_2n0"] = cells_2n0.size();
  rep["stretch_agreement_max_abs_log"] = stretch;
  rep["law_seed_a"] = fit_json(law_a.logLambda_vs_logN);
  rep["law_seed_b"] = fit_json(law_b.logLambda_vs_logN);
  rep["law_seed_gap"] = slope_gap;
  rep["law_seed_gap_stderr"] = slope_err;

  std::ostringstream os;
  os << "cell,strip_first,strip_last,min_log_Lambda,points\n";
  os.precision(12);
  for (const FanPiece& p : at_n0.pieces)
    os << p.cell << "," << p.strip_first << "," << p.strip_last << ","
       << p.min_log_Lambda << "," << p.points << "\n";
  return finish(cfg, "expansion", std::move(rep), {{"expansion_pieces.csv", os.str()}});
}

std::string cmd_transitions(const Config& cfg) {
  const Table table(table_params(cfg));
  const InducedMap induced(table, cfg.get_int("induced.K0"), cfg.get_int("induced.k0"));
  HarvestOptions h;
  h.min_returns = cfg.get_int64("transitions.returns");
  h.burn_in = cfg.get_int64("run.burn_in");
  h.workers = worker_count(cfg);
  h.seed = cfg.get_u64("run.seed");
  h.keep_pairs = true;
  const OrbitTallies t = harvest_checkpointed(cfg, table, induced, h, "transitions");
  const TransitionReport tr =
      transition_statistics(t.transition_pairs, table.params().beta, induced.K0());

  json rep;
  rep["pairs"] = tr.pairs;
  rep["support_c2"] = tr.support_c2;
  rep["support_c2_rest"] = tr.support_c2_rest;
  rep["support_c_lower"] = tr.support_c_lower;
  rep["conditional_m"] = fit_json(tr.conditional_m);
  rep["escape_fraction_per_decade"] = tr.escape_fraction_per_decade;
  rep["raw_collisions"] = t.raw_collisions;

  std::ostringstream os;
  os << "n,m\n";
  const std::size_t keep = std::min<std::size_t>(t.transition_pairs.size(), 10000);
  for (std::size_t i = 0; i < keep; ++i)
    os << t.transition_pairs[i].first << "," << t.transition_pairs[i].second << "\n";
  return finish(cfg, "transitions", std::move(rep), {{"transitions_pairs.csv", os.str()}});
}

std::string cmd_correlations(const Config& cfg) {
  const Table table(table_params(cfg));
  const BilliardMap map(table);
  const long long orbit = cfg.get_int64("correlations.orbit");
  const int max_lag = cfg.get_int("correlations.max_lag");
  const int batches = cfg.get_int("correlations.batches");
  const long long blen = orbit / batches;
  const std::uint64_t seed = cfg.get_u64("run.seed");
  const long long burn = cfg.get_int64("run.burn_in");
  const double freq = 2.0 * M_PI / table.perimeter();

  std::vector<double> series(static_cast<std::size_t>(blen) * batches);
  int workers = std::min(worker_count(cfg), batches);
  auto job = [&](int w) {
    for (int b = w; b < batches; b += workers) {
      CounterRng rng(seed, 0xc000u + static_cast<std::uint64_t>(b));
      PhasePoint x = sample_mu(table, rng);
      for (long long i = 0; i < burn; ++i) {
        auto st = map.step(x);
        if (!st) {
          x = sample_mu(table, rng);
          continue;
        }
        x = st->x;
      }
      for (long long i = 0; i < blen;) {
        auto st = map.step(x);
        if (!st) {
          x = sample_mu(table, rng);
          continue;
        }
        x = st->x;
        series[static_cast<std::size_t>(b) * blen + i] = std::sin(freq * x.r);
        ++i;
      }
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& th : pool) th.join();
  }

  const CorrelationReport cr = autocorrelation(series, max_lag, batches,
                                               cfg.get_int("correlations.env_lo"),
                                               cfg.get_int("correlations.env_hi"));
  json rep;
  rep["samples"] = cr.samples;
  rep["mean"] = cr.mean;
  rep["envelope"] = fit_json(cr.envelope);
  rep["C_head"] = std::vector<double>(cr.C.begin(),
                                      cr.C.begin() + std::min<std::size_t>(cr.C.size(), 16));

  std::ostringstream os;
  os << "lag,C,stderr\n";
  os.precision(12);
  for (std::size_t lag = 0; lag < cr.C.size(); ++lag)
    os << lag << "," << cr.C[lag] << "," << cr.stderr_[lag] << "\n";
  return finish(cfg, "correlations", std::move(rep), {{"correlations.csv", os.str()}});
}

std::string cmd_all(const Config& cfg) {
  json rep;
  rep["table"] = json::parse(cmd_table(cfg));
  rep["corner"] = json::parse(cmd_corner(cfg));
  rep["tail"] = json::parse(cmd_tail(cfg));
  rep["expansion"] = json::parse(cmd_expansion(cfg));
  rep["transitions"] = json::parse(cmd_transitions(cfg));
  rep["correlations"] = json::parse(cmd_correlations(cfg));
  return finish(cfg, "all", std::move(rep), {});
}

}  // namespace flatcusp
