#include "flatcusp/induced.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "flatcusp/rng.hpp"

namespace flatcusp {

namespace {

constexpr long long kMaxRun = 10'000'000;  // hard cap on one cusp series

// One full excursion of the base map starting from x in M, with the expansion
// bookkeeping and the first/last series collision recorded for strip lookups.
struct Excursion {
  PhasePoint exit;
  int R = 1;
  int cell = 1;
  double log_Lambda = 0.0;
  bool has_series = false;
  PhasePoint entry{};      // first series collision
  double phi_last = 0.0;   // last series collision
};

std::optional<Excursion> run_excursion(const BilliardMap& map, const PhasePoint& x,
                                       int K0) {
  const Table& table = map.table();
  double B = 2.0 * table.curvature_at(x.r) / std::cos(x.phi) + 1.0 / table.diameter_bound();

  auto st = map.step(x);
  if (!st) return std::nullopt;
  const double logL1 = std::log1p(st->tau * B);
  B = map.reflect_curvature(BilliardMap::transport_flight(B, st->tau), st->x);

  Excursion ex;
  if (!Table::is_cusp(st->arc)) {
    ex.exit = st->x;
    ex.log_Lambda = logL1;
    return ex;
  }

  // A cusp run begins; walk it to its end to resolve the block membership of
  // its first point.
  ex.entry = st->x;
  ex.phi_last = st->x.phi;
  double logL = logL1;
  long long L = 1;
  PhasePoint cur = st->x;
  while (true) {
    auto nx = map.step(cur);
    if (!nx) return std::nullopt;
    logL += std::log1p(nx->tau * B);
    B = map.reflect_curvature(BilliardMap::transport_flight(B, nx->tau), nx->x);
    if (Table::is_cusp(nx->arc)) {
      cur = nx->x;
      ex.phi_last = nx->x.phi;
      if (++L > kMaxRun) return std::nullopt;
      continue;
    }
    if (L <= K0) {
      // Short run: its first point is still in M, so the return happened at
      // the very first collision.
      ex.exit = ex.entry;
      ex.log_Lambda = logL1;
      return ex;
    }
    ex.exit = nx->x;
    ex.R = static_cast<int>(L) + 1;
    ex.cell = static_cast<int>(L);
    ex.log_Lambda = logL;
    ex.has_series = true;
    return ex;
  }
}

}  // namespace

bool InducedMap::in_M(const PhasePoint& x) const {
  const Table& table = map_.table();
  if (!Table::is_cusp(table.arc_at(x.r))) return true;

  int run = 1;
  PhasePoint cur = x;
  for (int i = 0; i < K0_ + 1 && run <= K0_; ++i) {
    auto nx = map_.step(cur);
    if (!nx || !Table::is_cusp(nx->arc)) break;
    ++run;
    cur = nx->x;
  }
  cur = BilliardMap::involution(x);
  for (int i = 0; i < K0_ + 1 && run <= K0_; ++i) {
    auto nx = map_.step(cur);
    if (!nx || !Table::is_cusp(nx->arc)) break;
    ++run;
    cur = nx->x;
  }
  return run <= K0_;
}

std::optional<ReturnSample> InducedMap::step(const PhasePoint& x) const {
  auto ex = run_excursion(map_, x, K0_);
  if (!ex) return std::nullopt;
  ReturnSample out;
  out.x = x;
  out.exit = ex->exit;
  out.R = ex->R;
  out.cell = ex->cell;
  out.log_Lambda = ex->log_Lambda;
  if (ex->has_series) {
    out.r_entry = ex->entry.r;
    out.phi_entry = ex->entry.phi;
  }
  return out;
}

PhasePoint sample_mu(const Table& table, CounterRng& rng) {
  PhasePoint x;
  x.r = rng.uniform(0.0, table.perimeter());
  x.phi = std::asin(2.0 * rng.uniform() - 1.0);
  return x;
}

void OrbitTallies::merge(const OrbitTallies& other) {
  for (const auto& [len, cnt] : other.run_hist) run_hist[len] += cnt;
  raw_collisions += other.raw_collisions;
  m_points += other.m_points;
  dead_flights += other.dead_flights;
  transition_pairs.insert(transition_pairs.end(), other.transition_pairs.begin(),
                          other.transition_pairs.end());
}

namespace {

PhasePoint fresh_start(const Table& table, CounterRng& rng) {
  for (int tries = 0; tries < 1000; ++tries) {
    PhasePoint x = sample_mu(table, rng);
    if (!Table::is_cusp(table.arc_at(x.r))) return x;
  }
  return {table.r_perp_hit(), 0.1};  // unreachable for sane tables
}

}  // namespace

OrbitTallies harvest_stream(const Table& table, const InducedMap& induced,
                            const HarvestOptions& opt, std::uint64_t stream,
                            long long quota) {
  const BilliardMap& map = induced.base();
  const int K0 = induced.K0();
  CounterRng rng(opt.seed, stream);
  OrbitTallies t;

  PhasePoint cur = fresh_start(table, rng);
  // Discard the burn-in and then flush to a run boundary, so tallying starts
  // at a non-cusp collision.
  for (long long i = 0; i < opt.burn_in; ++i) {
    auto st = map.step(cur);
    if (!st) {
      cur = fresh_start(table, rng);
      continue;
    }
    cur = st->x;
  }
  for (long long guard = 0; guard < kMaxRun; ++guard) {
    if (!Table::is_cusp(table.arc_at(cur.r))) break;
    auto st = map.step(cur);
    if (!st) {
      cur = fresh_start(table, rng);
      break;
    }
    cur = st->x;
  }

  long long cur_run = 0;
  long long m_between = 0;
  int prev_cell = 0;
  const long long raw_cap = 2000 * std::max<long long>(quota, 1);

  while (t.m_points < quota && t.raw_collisions < raw_cap) {
    auto st = map.step(cur);
    if (!st) {
      ++t.dead_flights;
      cur = fresh_start(table, rng);
      cur_run = 0;
      m_between = 0;
      prev_cell = 0;
      continue;
    }
    cur = st->x;
    ++t.raw_collisions;
    if (Table::is_cusp(st->arc)) {
      ++cur_run;
      if (cur_run > kMaxRun) {
        cur = fresh_start(table, rng);
        cur_run = 0;
        m_between = 0;
        prev_cell = 0;
      }
      continue;
    }
    if (cur_run > 0) {
      ++t.run_hist[static_cast<int>(cur_run)];
      if (cur_run > K0) {
        if (opt.keep_pairs && prev_cell > 0 && m_between == 1)
          t.transition_pairs.emplace_back(prev_cell, static_cast<int>(cur_run));
        prev_cell = static_cast<int>(cur_run);
        m_between = 0;
      } else {
        t.m_points += cur_run;
        m_between += cur_run;
      }
      cur_run = 0;
    }
    ++t.m_points;
    ++m_between;
  }
  return t;
}

OrbitTallies harvest_orbit(const Table& table, const InducedMap& induced,
                           const HarvestOptions& opt) {
  int workers = opt.workers > 0 ? opt.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  const long long quota = opt.min_returns / workers + 1;

  std::vector<OrbitTallies> parts(workers);
  if (workers == 1) {
    parts[0] = harvest_stream(table, induced, opt, 0, quota);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(
          [&, w] { parts[w] = harvest_stream(table, induced, opt, w, quota); });
    for (auto& th : pool) th.join();
  }
  OrbitTallies out;
  for (const OrbitTallies& p : parts) out.merge(p);
  return out;
}

ExpansionSumResult one_step_expansion_sum(const Table& table, const InducedMap& induced,
                                          const FanCurveOptions& opt) {
  const BilliardMap& map = induced.base();
  const double r_D = table.r_perp_hit();
  const double ratio = std::pow(opt.t_max / opt.t_min,
                                1.0 / std::max(1, opt.samples - 1));

  ExpansionSumResult res;
  std::set<int> cells;
  FanPiece piece;
  bool open = false;
  auto close_piece = [&]() {
    if (!open) return;
    res.pieces.push_back(piece);
    if (piece.cell >= opt.n0) {
      res.sum += std::exp(-piece.min_log_Lambda);
      cells.insert(piece.cell);
    }
    open = false;
  };

  double t = opt.t_min;
  for (int i = 0; i < opt.samples; ++i, t *= ratio) {
    PhasePoint x{table.wrap(r_D + t), opt.cone_slope * t};
    auto ex = run_excursion(map, x, induced.K0());
    if (!ex || !ex->has_series) {
      close_piece();
      continue;
    }
    const int kf = induced.homogeneity_strip(ex->entry.phi);
    const int kl = induced.homogeneity_strip(ex->phi_last);
    if (open && (piece.cell != ex->cell || piece.strip_first != kf ||
                 piece.strip_last != kl))
      close_piece();
    if (!open) {
      piece = FanPiece{ex->cell, kf, kl, ex->log_Lambda, 1};
      open = true;
    } else {
      piece.min_log_Lambda = std::min(piece.min_log_Lambda, ex->log_Lambda);
      ++piece.points;
    }
  }
  close_piece();
  res.cells_seen = static_cast<int>(cells.size());
  return res;
}

}  // namespace flatcusp
