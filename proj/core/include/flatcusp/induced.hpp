#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "flatcusp/dynamics.hpp"

namespace flatcusp {
class CounterRng;

// One return of the induced map F = first-return map to M.
struct ReturnSample {
  PhasePoint x;       // start, in M
  PhasePoint exit;    // F(x)
  int R = 0;          // return time in collisions of the base map
  int cell = 1;       // series length N if the excursion contains one, else 1
  double log_Lambda = 0.0;  // log expansion factor accumulated over the excursion
  double r_entry = 0.0, phi_entry = 0.0;  // first series collision (cell > 1 only)
};

// The induced system (F, M). Membership uses the block rule: x is in M iff
// the maximal run of consecutive cusp-arm collisions containing x -- scanned
// forward and backward through the orbit, each direction capped at K0+1 steps
// -- has length at most K0. Consequently an excursion either returns in one
// step (R = 1) or jumps over one long series of length L > K0 (R = L + 1,
// cell = L).
class InducedMap {
 public:
  InducedMap(const Table& table, int K0 = 10, int k0 = 5)
      : map_(table), K0_(K0), k0_(k0) {}

  const BilliardMap& base() const { return map_; }
  int K0() const { return K0_; }
  int k0() const { return k0_; }

  bool in_M(const PhasePoint& x) const;

  // One induced return. The expansion factor is seeded with the wavefront
  // curvature right after x (reflection term plus 1/diameter for the unknown
  // incoming wavefront) and accumulates (1 + tau*B) over every flight of the
  // excursion. std::nullopt on a numerical escape.
  std::optional<ReturnSample> step(const PhasePoint& x) const;

  int homogeneity_strip(double phi) const { return BilliardMap::homogeneity_strip(phi, k0_); }

 private:
  BilliardMap map_;
  int K0_;
  int k0_;
};

// --- ergodic harvesting ------------------------------------------------------

struct OrbitTallies {
  std::map<int, long long> run_hist;  // completed cusp-run lengths
  long long raw_collisions = 0;
  long long m_points = 0;    // collisions belonging to M (= induced steps)
  long long dead_flights = 0;
  // immediate successor pairs (n, m): cell-n excursion whose exit point is
  // itself the pre-entry point of a cell-m excursion (both > K0)
  std::vector<std::pair<int, int>> transition_pairs;

  void merge(const OrbitTallies& other);
};

struct HarvestOptions {
  long long min_returns = 1'000'000;  // stop once this many induced steps were seen
  long long burn_in = 10'000;         // raw collisions discarded up front
  int workers = 0;
  std::uint64_t seed = 12345;
  bool keep_pairs = false;
};

// Long-orbit ergodic tallies: run-length histogram, collision counts and
// (optionally) immediate transition pairs, merged deterministically across
// workers. Each worker runs an independent orbit from a mu-random start on
// its own RNG stream.
OrbitTallies harvest_orbit(const Table& table, const InducedMap& induced,
                           const HarvestOptions& opt);

// One stream of the harvest: an independent orbit on RNG stream `stream`,
// tallied until `quota` induced steps. harvest_orbit is the ordered merge of
// streams 0..workers-1 with quota = min_returns/workers + 1; commands use the
// per-stream form to checkpoint completed streams of long runs.
OrbitTallies harvest_stream(const Table& table, const InducedMap& induced,
                            const HarvestOptions& opt, std::uint64_t stream,
                            long long quota);

// Sample a mu-distributed phase point (uniform arclength, cos-weighted angle).
PhasePoint sample_mu(const Table& table, CounterRng& rng);

// --- one-step expansion sum --------------------------------------------------

struct FanCurveOptions {
  double cone_slope = 0.8;  // dphi/dr of the seed curve (inside the unstable cone)
  // Parameter range of the seed curve x(t) = (r_D + t, slope * t). The cell
  // index grows like t^(-(2beta-1)/... ) ~ t^(-10/9) at beta = 3, so t_min
  // sets the truncation cell (~5e4 here); everything dropped beyond it only
  // lowers the reported sum.
  double t_min = 2e-5;
  double t_max = 1e-2;
  int samples = 4000;  // log-spaced parameter samples
  int n0 = 200;        // cells below n0 are excluded from the sum
};

struct FanPiece {
  int cell = 0;
  int strip_first = 0, strip_last = 0;
  double min_log_Lambda = 0.0;
  int points = 0;
};

struct ExpansionSumResult {
  double sum = 0.0;  // sum over pieces of 1/Lambda_min
  std::vector<FanPiece> pieces;
  int cells_seen = 0;
};

// Partition a short unstable curve through the fan of cells accumulating at
// x_D by (cell index, homogeneity strips of the first/last series collision),
// take the minimal expansion factor of each piece (endpoints + midpoint) and
// return  sum_i 1/Lambda_i  over pieces with cell >= n0.
ExpansionSumResult one_step_expansion_sum(const Table& table, const InducedMap& induced,
                                          const FanCurveOptions& opt);

}  // namespace flatcusp
