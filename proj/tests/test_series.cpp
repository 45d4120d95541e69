#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "flatcusp/corner_series.hpp"
#include "flatcusp/geometry.hpp"

using namespace flatcusp;

namespace {

const Table& table3() {
  static const Table t{TableParams{}};
  return t;
}

SeriesOptions default_opt() { return SeriesOptions{}; }

}  // namespace

// The single-step oracle was computed independently with 50-digit arithmetic:
// from s=0.1 on the lower wall with outgoing angle v=0.3, intersect the ray
// with z = -s^3/3, reflect, and freeze the next coordinate and flight.

TEST_CASE("one chart step against the frozen oracle") {
  const SeriesSeed seed{0.1, 0.3};
  for (const SeriesEngine engine :
       {SeriesEngine::Exact, SeriesEngine::Reduced, SeriesEngine::Extended}) {
    CAPTURE(static_cast<int>(engine));
    const SeriesResult res = run_series(table3(), seed, engine, default_opt());
    REQUIRE(res.N() >= 2);
    CHECK(res.rec[0].s == 0.1);
    CHECK(res.rec[0].v == 0.3);
    CHECK(res.rec[1].s ==
          doctest::Approx(0.097910979322305368318156627574842).epsilon(1e-13));
    CHECK(res.rec[1].v ==
          doctest::Approx(0.31917253242590873999588653807401).epsilon(1e-13));
  }
  const SeriesResult exact =
      run_series(table3(), seed, SeriesEngine::Exact, default_opt());
  CHECK(exact.rec[0].tau ==
        doctest::Approx(0.0021866857400230326487932145869738).epsilon(1e-12));
}

TEST_CASE("in-chart identities hold to near machine precision") {
  const Table& t = table3();
  const double beta = t.params().beta;
  const SeriesSeed seed = seed_for_target(t.params(), 1000.0, 2.0);
  const SeriesResult res = run_series(t, seed, SeriesEngine::Exact, default_opt());
  REQUIRE(res.N() > 500);

  double worst_v = 0, worst_g = 0, worst_tau = 0, worst_s = 0;
  int folds = 0;
  for (int n = 0; n + 1 < res.N(); ++n) {
    const SeriesRecord& a = res.rec[n];
    const SeriesRecord& b = res.rec[n + 1];
    // angle recursion: v increases by 2*alpha at every reflection. Once the
    // update passes pi the outgoing ray runs outward along the wall it just
    // hit; the recorded angle is the fold 2*pi - v and the series ends there.
    const double unfolded = a.v + 2.0 * b.alpha;
    if (unfolded > std::numbers::pi) {
      ++folds;
      CHECK(n + 2 == res.N());
      worst_v = std::max(worst_v, std::abs(b.v - (2.0 * std::numbers::pi - unfolded)));
    } else {
      worst_v = std::max(worst_v, std::abs(b.v - unfolded));
    }
    // wall-angle recursion, valid while the series is still entering
    if (a.v < std::numbers::pi / 2 && b.v < std::numbers::pi / 2)
      worst_g = std::max(worst_g, std::abs(b.gamma - (a.gamma + a.alpha + b.alpha)));
    // exact free path between consecutive wall collisions
    const double tau_expect =
        (std::pow(a.s, beta) + std::pow(b.s, beta)) / (beta * std::sin(a.v));
    worst_tau = std::max(worst_tau, std::abs(a.tau - tau_expect) / tau_expect);
    // exact coordinate recursion
    worst_s = std::max(worst_s, std::abs(b.s - (a.s - a.tau * std::cos(a.v))));
  }
  CHECK(worst_v < 1e-9);
  CHECK(worst_g < 1e-9);
  CHECK(worst_tau < 1e-9);
  CHECK(worst_s < 1e-12);
  CHECK(folds <= 1);

  // alpha and gamma are consistent with s and v
  for (int n = 0; n < res.N(); n += 37) {
    const SeriesRecord& r = res.rec[n];
    CHECK(r.alpha ==
          doctest::Approx(std::atan(std::pow(r.s, beta - 1.0))).epsilon(1e-14));
    CHECK(r.gamma ==
          doctest::Approx(std::asin(std::abs(std::sin(r.v - r.alpha))))
              .epsilon(1e-12));
  }
}

TEST_CASE("markers and shape of a long series") {
  const Table& t = table3();
  const SeriesSeed seed = seed_for_target(t.params(), 2000.0, 1.5);
  const SeriesResult res = run_series(t, seed, SeriesEngine::Exact, default_opt());
  const int N = res.N();
  REQUIRE(N > 1000);
  const SeriesMarkers m = res.markers;
  CHECK(1 <= m.N1);
  CHECK(m.N1 < m.N2);
  CHECK(m.N2 < m.N3);
  CHECK(m.N3 <= N);
  // N2 is the argmin of alpha (ties broken first)
  int argmin = 0;
  for (int n = 1; n < N; ++n)
    if (res.rec[n].alpha < res.rec[argmin].alpha) argmin = n;
  CHECK(m.N2 == argmin + 1);
  // v is strictly increasing and crosses pi/2 near N2
  for (int n = 0; n + 1 < N; ++n) CHECK(res.rec[n].v < res.rec[n + 1].v);
  CHECK(res.rec[m.N2 - 1].v == doctest::Approx(std::numbers::pi / 2).epsilon(0.05));
  // C_N is the median H of the adiabatic plateau
  std::vector<double> plateau;
  for (int n = m.N1 - 1; n < m.N2; ++n) plateau.push_back(res.rec[n].H);
  std::sort(plateau.begin(), plateau.end());
  const double med = plateau.size() % 2
                         ? plateau[plateau.size() / 2]
                         : 0.5 * (plateau[plateau.size() / 2 - 1] +
                                  plateau[plateau.size() / 2]);
  CHECK(res.C_N == doctest::Approx(med).epsilon(1e-12));
  CHECK(res.log_Lambda > 0.0);
  CHECK(res.tau_exit > 0.0);
  // the last record carries no onward flight
  CHECK(res.rec[N - 1].tau == 0.0);
  CHECK(res.rec[N - 1].lambda == 0.0);

  // a higher marker threshold can only move N1 forward
  SeriesOptions wide = default_opt();
  wide.gamma_bar = 0.3;
  const SeriesResult res2 = run_series(t, seed, SeriesEngine::Exact, wide);
  CHECK(res2.markers.N1 >= m.N1);
  CHECK(res2.markers.N3 <= m.N3);
}

TEST_CASE("telescoping of the horizontal advance") {
  const Table& t = table3();
  const SeriesSeed seed = seed_for_target(t.params(), 500.0, 2.5);
  const SeriesResult res = run_series(t, seed, SeriesEngine::Exact, default_opt());
  const int N = res.N();
  REQUIRE(N > 100);
  double sum = 0.0;
  for (int n = 0; n + 1 < N; ++n) {
    sum += res.rec[n].tau * std::cos(res.rec[n].v);
    CHECK(std::abs((res.rec[0].s - sum) - res.rec[n + 1].s) < 1e-11);
  }
}

TEST_CASE("the reduced recursion tracks the exact route step by step") {
  const Table& t = table3();
  for (const double target : {100.0, 1000.0, 5000.0}) {
    const SeriesSeed seed = seed_for_target(t.params(), target, 2.0);
    CHECK(compare_routes(t, seed, default_opt()) < 1e-9);
  }
}

TEST_CASE("extended precision agrees with double where doubles are reliable") {
  const Table& t = table3();
  const SeriesSeed seed = seed_for_target(t.params(), 300.0, 2.0);
  const SeriesResult d = run_series(t, seed, SeriesEngine::Exact, default_opt());
  const SeriesResult e = run_series(t, seed, SeriesEngine::Extended, default_opt());
  REQUIRE(d.N() >= 12);
  REQUIRE(e.N() >= 12);
  for (int n = 0; n < 10; ++n) {
    CHECK(d.rec[n].s == doctest::Approx(e.rec[n].s).epsilon(1e-11));
    CHECK(d.rec[n].v == doctest::Approx(e.rec[n].v).epsilon(1e-11));
  }
  // chaos keeps the two series from agreeing forever, but the aggregate
  // exponent inputs must match closely
  CHECK(d.N() == e.N());
  CHECK(std::abs(d.log_Lambda - e.log_Lambda) / e.log_Lambda < 1e-3);
}

TEST_CASE("scalar wavefront product equals the matrix stretch") {
  const Table& t = table3();
  for (const double target : {200.0, 1500.0}) {
    const SeriesSeed seed = seed_for_target(t.params(), target, 2.0);
    CHECK(stretch_consistency(t, seed, default_opt()) < 1e-6);
  }
}

TEST_CASE("seed_for_target hits the requested length scale") {
  const Table& t = table3();
  for (const double target : {100.0, 1000.0, 10000.0}) {
    for (const double u : {1.0, 2.0, 3.0}) {
      const SeriesSeed seed = seed_for_target(t.params(), target, u);
      const double a1 = std::atan(std::pow(seed.s1, t.params().beta - 1.0));
      CHECK(seed.v1 == doctest::Approx((1.0 + u) * a1).epsilon(1e-12));
      const SeriesResult res =
          run_series(t, seed, SeriesEngine::Reduced, default_opt());
      // length scales like target; the adiabatic constant varies with u
      CHECK(res.N() > 0.2 * target);
      CHECK(res.N() < 5.0 * target);
    }
  }
}

TEST_CASE("entry flight length shifts log_Lambda monotonically") {
  const Table& t = table3();
  const SeriesSeed seed = seed_for_target(t.params(), 400.0, 2.0);
  SeriesOptions a = default_opt(), b = default_opt();
  a.entry_flight = 0.5;
  b.entry_flight = 2.0;
  const double la = run_series(t, seed, SeriesEngine::Exact, a).log_Lambda;
  const double lb = run_series(t, seed, SeriesEngine::Exact, b).log_Lambda;
  CHECK(la < lb);
}
