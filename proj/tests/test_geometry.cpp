#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "flatcusp/geometry.hpp"

using namespace flatcusp;

// Expected values below were computed independently with 50-digit arithmetic
// (arclength by high-order quadrature of sqrt(1 + t^(2b-2)), circle centers
// and junctions from the closed-form tangency/intersection equations) and
// frozen here to more digits than a double carries.

namespace {
const Table& table3() {
  static const Table t{TableParams{}};
  return t;
}
}  // namespace

TEST_CASE("chart arclength against quadrature oracles") {
  CHECK(table3().chart_arclength(0.5) ==
        doctest::Approx(0.503098443207038720807109203861).epsilon(1e-13));
  CHECK(table3().chart_arclength(0.1) ==
        doctest::Approx(0.100000999986111591857365241167).epsilon(1e-13));

  // A flatter profile (beta = 2.5) needs a wider shoulder for the join arc
  // to reach the wall circle; the chart arclength itself is unaffected.
  TableParams p;
  p.beta = 2.5;
  p.join_radius = 1.2;
  const Table t25(p);
  CHECK(t25.chart_arclength(0.5) ==
        doctest::Approx(0.507678751967899349677767180529).epsilon(1e-13));
}

TEST_CASE("join radius window closes the table across profiles") {
  TableParams p;
  p.beta = 2.5;
  CHECK_THROWS_AS(Table{p}, std::invalid_argument);  // default radius too small
  p.join_radius = 1.2;
  const Table t(p);
  CHECK(t.junction_upper().y > 0.0);
  CHECK(t.perimeter() > 0.0);
  p.beta = 4.0;
  p.join_radius = 1.0;
  const Table t4(p);
  CHECK(t4.junction_upper().y > 0.0);
}

TEST_CASE("chart arclength inverts") {
  for (int i = 1; i <= 40; ++i) {
    const double s = 0.5 * i / 40.0;
    CHECK(table3().chart_s_from_arclength(table3().chart_arclength(s)) ==
          doctest::Approx(s).epsilon(1e-11));
  }
}

TEST_CASE("derived constants of the default table") {
  const Table& t = table3();
  CHECK(t.join_center_upper().x ==
        doctest::Approx(0.257464374963667026481093537884).epsilon(1e-13));
  CHECK(t.join_center_upper().y ==
        doctest::Approx(1.01180916681199856074229251513).epsilon(1e-13));
  const Vec2 d = t.join_center_upper() - t.wall_center();
  CHECK(d.norm() == doctest::Approx(2.92322757318656603821264289387).epsilon(1e-13));
  CHECK(t.junction_upper().x ==
        doctest::Approx(1.03765511815136267116142449601).epsilon(1e-13));
  CHECK(t.junction_upper().y ==
        doctest::Approx(0.386267478157892037329505847599).epsilon(1e-13));
  CHECK(t.join_start_angle() ==
        doctest::Approx(-1.32581766366803246505923921043).epsilon(1e-13));
  CHECK(t.join_sweep() ==
        doctest::Approx(0.649992020972618775522592596653).epsilon(1e-13));
  CHECK(t.wall_theta_min() ==
        doctest::Approx(2.947237633078242406689600078).epsilon(1e-13));
  CHECK(std::numbers::pi - t.wall_theta_min() ==
        doctest::Approx(0.194355020511550831773043305281).epsilon(1e-12));
  CHECK(t.perimeter() ==
        doctest::Approx(3.08360101040551831975157682215).epsilon(1e-13));
  CHECK(t.r_vertex() ==
        doctest::Approx(1.15309046417965749632970180051).epsilon(1e-13));
  CHECK(t.r_perp_hit() ==
        doctest::Approx(2.69489096938241665620549021159).epsilon(1e-13));
}

TEST_CASE("perpendicular hit point of the cusp axis") {
  const Table& t = table3();
  const Vec2 D = t.perp_hit_point();
  CHECK(D.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(D.y == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  const Vec2 P = t.point_at(t.r_perp_hit());
  CHECK((P - D).norm() < 1e-10);
  // The wall is orthogonal to the axis there, so its tangent has no x part.
  CHECK(std::abs(t.tangent_at(t.r_perp_hit()).x) < 1e-10);
  CHECK((t.inward_normal_at(t.r_perp_hit()) - Vec2{-1.0, 0.0}).norm() < 1e-10);
}

TEST_CASE("arc layout: lengths, starts, wrap") {
  const Table& t = table3();
  const double sum = 2.0 * (t.join_length() + t.cusp_arm_length()) + t.wall_length();
  CHECK(sum == doctest::Approx(t.perimeter()).epsilon(1e-14));
  CHECK(t.arc_start(ArcId::JoinLower) == 0.0);
  CHECK(t.arc_start(ArcId::CuspLower) == doctest::Approx(t.join_length()));
  CHECK(t.arc_start(ArcId::CuspUpper) == doctest::Approx(t.r_vertex()));
  CHECK(t.arc_start(ArcId::Wall) ==
        doctest::Approx(2.0 * (t.join_length() + t.cusp_arm_length())));
  CHECK(t.arc_at(0.5 * t.join_length()) == ArcId::JoinLower);
  CHECK(t.arc_at(t.r_vertex() - 1e-6) == ArcId::CuspLower);
  CHECK(t.arc_at(t.r_vertex() + 1e-6) == ArcId::CuspUpper);
  CHECK(t.wrap(t.perimeter() + 0.25) == doctest::Approx(0.25));
  CHECK(t.wrap(-0.25) == doctest::Approx(t.perimeter() - 0.25));
}

TEST_CASE("boundary frame is unit, left-handed and continuous") {
  const Table& t = table3();
  const int M = 4000;
  for (int i = 0; i < M; ++i) {
    const double r = t.perimeter() * (i + 0.5) / M;
    const Vec2 T = t.tangent_at(r);
    const Vec2 n = t.inward_normal_at(r);
    CHECK(T.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(T.cross(n) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(t.curvature_at(r) >= 0.0);
  }
  // point_at parametrizes by arclength: |dP/dr| = 1.
  for (int i = 1; i < 200; ++i) {
    const double r = t.perimeter() * i / 200.0;
    const double h = 1e-7;
    const Vec2 d = t.point_at(t.wrap(r + h)) - t.point_at(t.wrap(r - h));
    CHECK(d.norm() == doctest::Approx(2 * h).epsilon(1e-5));
    CHECK((d * (1.0 / d.norm()) - t.tangent_at(r)).norm() < 1e-5);
  }
}

TEST_CASE("cusp arms join the circles tangentially; junctions are corners") {
  const Table& t = table3();
  const double h = 1e-9;
  auto kink = [&](double r) {
    return std::abs(t.tangent_at(t.wrap(r - h)).cross(t.tangent_at(t.wrap(r + h))));
  };
  CHECK(kink(t.arc_start(ArcId::CuspLower)) < 1e-8);
  CHECK(kink(t.arc_start(ArcId::JoinUpper)) < 1e-8);
  // Join-wall junction: a genuine corner (the closed dispersing curve cannot
  // be C^1 there).
  CHECK(kink(t.arc_start(ArcId::Wall)) > 0.1);
}

TEST_CASE("chart profile and curvature") {
  const Table& t = table3();
  CHECK(t.profile(0.3) == doctest::Approx(std::pow(0.3, 3.0) / 3.0).epsilon(1e-15));
  CHECK(t.profile_slope(0.3) == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(t.chart_curvature(0.0) == 0.0);
  const double s = 0.4;
  const double expect = 2.0 * s / std::pow(1.0 + std::pow(s, 4.0), 1.5);
  CHECK(t.chart_curvature(s) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(t.curvature_at(t.r_vertex()) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(t.curvature_at(t.r_perp_hit()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t.curvature_at(0.5 * t.join_length()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  TableParams p;
  p.beta = 2.0;
  CHECK_THROWS_AS(Table{p}, std::invalid_argument);
  p.beta = 1.2;
  CHECK_THROWS_AS(Table{p}, std::invalid_argument);
  p = TableParams{};
  p.eps0 = -0.1;
  CHECK_THROWS_AS(Table{p}, std::invalid_argument);
  p = TableParams{};
  p.wall_center_x = 100.0;  // join and wall circles no longer intersect
  CHECK_THROWS_AS(Table{p}, std::invalid_argument);
}

TEST_CASE("adaptive quadrature") {
  auto f = [](double x, const void*) { return std::sin(x); };
  CHECK(adaptive_simpson(f, nullptr, 0.0, std::numbers::pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
}
