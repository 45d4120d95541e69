#include "flatcusp/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace flatcusp {

namespace {

constexpr double kMinFlight = 1e-12;  // rejects zero-length self hits at junctions
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  ArcId arc{};
  double s = 0.0;      // chart coordinate for cusp hits
  double theta = 0.0;  // circle angle for circular hits
  bool found = false;
};

void consider(Hit& best, double t, ArcId arc, double s, double theta) {
  if (t > kMinFlight && t < best.t) best = {t, arc, s, theta, true};
}

// Roots of the chart line-curve equation
//   G(s) = vx * (sigma * s^beta/beta - py) - vy * (s - px) = 0
// on [0, eps0]. G' = vx*sigma*s^(beta-1) - vy is monotone, so G has at most
// two roots, one per monotone piece; each is located by bisection and
// polished by Newton.
template <typename Fn>
void cusp_roots(const Table& tab, double px, double py, double vx, double vy,
                double sigma, Fn&& on_root) {
  const double b = tab.params().beta;
  const double e0 = tab.params().eps0;
  auto G = [&](double s) {
    return vx * (sigma * std::pow(s, b) / b - py) - vy * (s - px);
  };
  auto dG = [&](double s) { return vx * sigma * std::pow(s, b - 1.0) - vy; };

  double splits[3] = {0.0, e0, e0};
  int nsplit = 2;
  if (vx * sigma != 0.0) {
    const double ratio = vy / (vx * sigma);
    if (ratio > 0.0) {
      const double s_star = std::pow(ratio, 1.0 / (b - 1.0));
      if (s_star > 0.0 && s_star < e0) {
        splits[1] = s_star;
        splits[2] = e0;
        nsplit = 3;
      }
    }
  }
  for (int i = 0; i + 1 < nsplit; ++i) {
    double lo = splits[i], hi = splits[i + 1];
    double glo = G(lo), ghi = G(hi);
    double root;
    if (glo == 0.0) {
      root = lo;
    } else if (ghi == 0.0) {
      root = hi;
    } else if (glo * ghi < 0.0) {
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = G(mid);
        if (glo * gm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          glo = gm;
        }
      }
      root = 0.5 * (lo + hi);
      for (int it = 0; it < 6; ++it) {
        const double d = dG(root);
        if (d == 0.0) break;
        const double next = root - G(root) / d;
        if (next < splits[i] || next > splits[i + 1]) break;
        root = next;
      }
    } else {
      continue;
    }
    on_root(root);
  }
}

}  // namespace

Vec2 BilliardMap::position(const PhasePoint& x) const { return table_->point_at(x.r); }

Vec2 BilliardMap::direction(const PhasePoint& x) const {
  const Vec2 n = table_->inward_normal_at(x.r);
  const Vec2 t = table_->tangent_at(x.r);
  const double c = std::cos(x.phi), s = std::sin(x.phi);
  return {c * n.x + s * t.x, c * n.y + s * t.y};
}

std::optional<StepResult> BilliardMap::step(const PhasePoint& x) const {
  const Table& tab = *table_;
  const TableParams& par = tab.params();
  const Vec2 p = position(x);
  const Vec2 v = direction(x);
  const ArcId self = tab.arc_at(x.r);

  Hit best;

  // A ray leaving any of these dispersing arcs cannot hit the same arc again
  // before hitting another one (the outgoing ray moves strictly away from the
  // osculating circle / the concave-toward-the-domain graph), so the origin
  // arc is skipped entirely.

  // Cusp arms, solved in the chart.
  for (int side = 0; side < 2; ++side) {
    const ArcId arc = side == 0 ? ArcId::CuspUpper : ArcId::CuspLower;
    if (arc == self) continue;
    const double sigma = side == 0 ? 1.0 : -1.0;
    cusp_roots(tab, p.x, p.y, v.x, v.y, sigma, [&](double s_root) {
      const Vec2 q{s_root, sigma * tab.profile(s_root)};
      const double t = (q - p).dot(v);
      consider(best, t, arc, s_root, 0.0);
    });
  }

  // Circular arcs: both quadratic roots are candidates, each subject to the
  // arc's angular range.
  struct Circle {
    ArcId arc;
    Vec2 center;
    double radius;
  };
  const Circle circles[3] = {
      {ArcId::JoinUpper, tab.join_center_upper(), par.join_radius},
      {ArcId::JoinLower, tab.join_center_lower(), par.join_radius},
      {ArcId::Wall, tab.wall_center(), par.wall_radius},
  };
  const double range_tol = 1e-12;
  for (const Circle& c : circles) {
    if (c.arc == self) continue;
    const Vec2 w = p - c.center;
    const double bq = w.dot(v);
    const double cq = w.dot(w) - c.radius * c.radius;
    const double disc = bq * bq - cq;
    if (disc <= 0.0) continue;
    const double sq = std::sqrt(disc);
    const double q = -(bq + std::copysign(sq, bq));
    double roots[2] = {q, cq / q};  // stable quadratic roots
    if (roots[0] > roots[1]) std::swap(roots[0], roots[1]);
    for (double t : roots) {
      if (!(t > kMinFlight) || t >= best.t) continue;
      Vec2 hit = p + v * t;
      double theta;
      bool in_range;
      if (c.arc == ArcId::Wall) {
        theta = wrap_angle(std::atan2(hit.y - c.center.y, hit.x - c.center.x));
        in_range = theta >= tab.wall_theta_min() - range_tol &&
                   theta <= kTwoPi - tab.wall_theta_min() + range_tol;
      } else {
        const double y = c.arc == ArcId::JoinLower ? -hit.y : hit.y;
        const double cy = std::abs(c.center.y);
        theta = std::atan2(y - cy, hit.x - c.center.x);
        in_range = wrap_angle(theta - tab.join_start_angle()) <= tab.join_sweep() + range_tol;
      }
      if (in_range) consider(best, t, c.arc, 0.0, theta);
    }
  }

  if (!best.found) return std::nullopt;

  // Arclength coordinate of the hit.
  double r1;
  if (best.arc == ArcId::CuspUpper || best.arc == ArcId::CuspLower) {
    r1 = tab.r_on_cusp(best.arc == ArcId::CuspUpper, best.s);
  } else if (best.arc == ArcId::Wall) {
    r1 = tab.r_on_wall_angle(best.theta);
  } else if (best.arc == ArcId::JoinUpper) {
    r1 = tab.arc_start(ArcId::JoinUpper) +
         par.join_radius * wrap_angle(best.theta - tab.join_start_angle());
  } else {
    r1 = tab.arc_start(ArcId::JoinLower) +
         par.join_radius *
             (tab.join_sweep() - wrap_angle(best.theta - tab.join_start_angle()));
  }
  r1 = tab.wrap(r1);

  const Vec2 n1 = tab.inward_normal_at(r1);
  const Vec2 t1 = tab.tangent_at(r1);
  const double vn = v.dot(n1);
  const Vec2 refl{v.x - 2.0 * vn * n1.x, v.y - 2.0 * vn * n1.y};
  const double phi1 = std::atan2(refl.dot(t1), refl.dot(n1));

  StepResult out;
  out.x = {r1, phi1};
  out.tau = best.t;
  out.arc = best.arc;
  out.local = r1 - tab.arc_start(best.arc);
  out.s = Table::is_cusp(best.arc) ? best.s : 0.0;
  return out;
}

std::optional<PhasePoint> BilliardMap::inverse(const PhasePoint& x) const {
  const auto fwd = step(involution(x));
  if (!fwd) return std::nullopt;
  return involution(fwd->x);
}

std::array<double, 4> BilliardMap::derivative(const PhasePoint& x,
                                              const StepResult& next) const {
  const double k = table_->curvature_at(x.r);
  const double k1 = table_->curvature_at(next.x.r);
  const double c = std::cos(x.phi), c1 = std::cos(next.x.phi);
  const double tau = next.tau;
  const double f = -1.0 / c1;
  return {f * (tau * k + c), f * tau, f * (tau * k * k1 + k * c1 + k1 * c),
          f * (tau * k1 + c1)};
}

double BilliardMap::reflect_curvature(double b_in, const PhasePoint& at) const {
  return b_in + 2.0 * table_->curvature_at(at.r) / std::cos(at.phi);
}

int BilliardMap::homogeneity_strip(double phi, int k0) {
  const double d = std::numbers::pi / 2.0 - std::abs(phi);
  if (d * double(k0) * double(k0) > 1.0) return 0;
  if (d <= 1e-18) return 1'000'000'000;
  const double k = std::floor(1.0 / std::sqrt(d));
  return k > 1e9 ? 1'000'000'000 : static_cast<int>(k);
}

std::optional<std::pair<double, double>> cusp_ray_hit(const Table& table, Vec2 p,
                                                      Vec2 dir) {
  bool found = false;
  double best_t = 0.0, best_s = 0.0;
  for (double sigma : {1.0, -1.0}) {
    cusp_roots(table, p.x, p.y, dir.x, dir.y, sigma, [&](double s_root) {
      const Vec2 q{s_root, sigma * table.profile(s_root)};
      const double t = (q - p).dot(dir);
      if (t > 1e-12 && (!found || t < best_t)) {
        found = true;
        best_t = t;
        best_s = s_root;
      }
    });
  }
  if (!found) return std::nullopt;
  return std::make_pair(best_s, best_t);
}

}  // namespace flatcusp
