#include "flatcusp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flatcusp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}
}  // namespace

double Vec2::norm() const { return std::hypot(x, y); }

Vec2 Vec2::normalized() const {
  const double n = norm();
  return {x / n, y / n};
}

double adaptive_simpson(double (*f)(double, const void*), const void* ctx, double a,
                        double b, double abs_tol) {
  struct Frame {
    double a, b, fa, fm, fb, whole;
  };
  auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  const double m0 = 0.5 * (a + b);
  const double fa = f(a, ctx), fm = f(m0, ctx), fb = f(b, ctx);
  // Explicit stack; 60 levels is far beyond what the smooth integrands
  // here ever need but keeps pathological inputs from recursing forever.
  std::vector<Frame> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}};
  std::vector<double> tol{abs_tol};
  double total = 0.0;
  int depth_guard = 0;
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    double t = tol.back();
    tol.pop_back();
    const double m = 0.5 * (fr.a + fr.b);
    const double lm = 0.5 * (fr.a + m), rm = 0.5 * (m + fr.b);
    const double flm = f(lm, ctx), frm = f(rm, ctx);
    const double left = simpson(fr.a, m, fr.fa, flm, fr.fm);
    const double right = simpson(m, fr.b, fr.fm, frm, fr.fb);
    if (std::abs(left + right - fr.whole) <= 15.0 * t || ++depth_guard > 200000) {
      total += left + right + (left + right - fr.whole) / 15.0;
    } else {
      stack.push_back({fr.a, m, fr.fa, flm, fr.fm, left});
      tol.push_back(0.5 * t);
      stack.push_back({m, fr.b, fr.fm, frm, fr.fb, right});
      tol.push_back(0.5 * t);
    }
  }
  return total;
}

namespace {
struct ArcCtx {
  double exponent;  // 2*(beta-1)
};

double arc_integrand(double t, const void* ctx) {
  const auto* c = static_cast<const ArcCtx*>(ctx);
  return std::sqrt(1.0 + std::pow(t, c->exponent));
}
}  // namespace

Table::Table(const TableParams& params) : params_(params) {
  const double b = params_.beta, e0 = params_.eps0;
  if (!(b > 2.0)) throw std::invalid_argument("beta must exceed 2");
  if (!(e0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
  if (!(params_.join_radius > 0.0) || !(params_.wall_radius > 0.0))
    throw std::invalid_argument("radii must be positive");

  // Upper chart end and the tangent join circle: center on the outward
  // normal of the profile at E1, so the cusp arm and the join arc share a
  // tangent line there.
  e1_ = {e0, profile(e0)};
  const double zp = profile_slope(e0);
  const double w = std::sqrt(1.0 + zp * zp);
  const double rj = params_.join_radius;
  c1_ = {e1_.x - rj * zp / w, e1_.y + rj / w};

  const Vec2 cw{params_.wall_center_x, 0.0};
  const double rw = params_.wall_radius;
  const Vec2 cc = cw - c1_;
  const double d = cc.norm();
  if (!(d > std::abs(rw - rj) + 1e-12) || !(d < rw + rj - 1e-12))
    throw std::invalid_argument(
        "join and wall circles do not intersect transversally; a flatter "
        "profile pushes the join center away from the wall, so increase "
        "join_radius or move wall_center_x closer");

  // Junction: first intersection of the two circles reached when sweeping
  // counterclockwise from E1 around the join center.
  const double a = (d * d + rj * rj - rw * rw) / (2.0 * d);
  const double h = std::sqrt(rj * rj - a * a);
  const Vec2 u = cc * (1.0 / d);
  const Vec2 base = c1_ + u * a;
  const Vec2 perp{-u.y, u.x};
  const Vec2 ja = base + perp * h, jb = base - perp * h;
  psi1_ = std::atan2(e1_.y - c1_.y, e1_.x - c1_.x);
  const double sa = wrap_angle(std::atan2(ja.y - c1_.y, ja.x - c1_.x) - psi1_);
  const double sb = wrap_angle(std::atan2(jb.y - c1_.y, jb.x - c1_.x) - psi1_);
  if (sa < sb) {
    j1_ = ja;
    sweep_ = sa;
  } else {
    j1_ = jb;
    sweep_ = sb;
  }
  if (!(j1_.y > 0.0))
    throw std::invalid_argument("junction lies below the axis; shrink the join radius");

  theta_u_ = std::atan2(j1_.y, j1_.x - cw.x);

  len_cusp_ = chart_arclength(e0);
  len_join_ = rj * sweep_;
  len_wall_ = 2.0 * (std::numbers::pi - theta_u_) * rw;
  perimeter_ = 2.0 * (len_cusp_ + len_join_) + len_wall_;
  cum_ = {0.0,
          len_join_,
          len_join_ + len_cusp_,
          len_join_ + 2.0 * len_cusp_,
          2.0 * (len_join_ + len_cusp_),
          perimeter_};
}

double Table::profile(double s) const { return std::pow(s, params_.beta) / params_.beta; }

double Table::profile_slope(double s) const { return std::pow(s, params_.beta - 1.0); }

double Table::chart_curvature(double s) const {
  const double b = params_.beta;
  const double zp = profile_slope(s);
  const double zpp = (b - 1.0) * std::pow(s, b - 2.0);
  return zpp / std::pow(1.0 + zp * zp, 1.5);
}

double Table::chart_arclength(double s) const {
  if (s <= 0.0) return 0.0;
  const ArcCtx ctx{2.0 * (params_.beta - 1.0)};
  return adaptive_simpson(&arc_integrand, &ctx, 0.0, s, 1e-12);
}

double Table::chart_s_from_arclength(double len) const {
  if (len <= 0.0) return 0.0;
  // arclength(s) >= s, and the excess is tiny for s < 1: Newton from s = len.
  double s = std::min(len, params_.eps0);
  for (int i = 0; i < 60; ++i) {
    const double g = chart_arclength(s) - len;
    const double dg = std::sqrt(1.0 + std::pow(s, 2.0 * (params_.beta - 1.0)));
    const double step = g / dg;
    s -= step;
    if (s < 0.0) s = 0.0;
    if (std::abs(step) < 1e-16 * std::max(1.0, s)) break;
  }
  return s;
}

Vec2 Table::perp_hit_point() const {
  return {params_.wall_center_x - params_.wall_radius, 0.0};
}

double Table::r_perp_hit() const { return cum_[4] + 0.5 * len_wall_; }

double Table::diameter_bound() const {
  // The table fits in the bounding box [0, j1.x] x [-j1.y, j1.y] extended to
  // the deepest wall point; double the box diagonal is a safe free-path bound.
  const double xmax = std::max(j1_.x, params_.wall_center_x - params_.wall_radius *
                                          std::cos(std::numbers::pi - theta_u_));
  return 2.0 * std::hypot(xmax, 2.0 * j1_.y);
}

double Table::wrap(double r) const {
  r = std::fmod(r, perimeter_);
  return r < 0 ? r + perimeter_ : r;
}

ArcId Table::arc_at(double r, double* local) const {
  r = wrap(r);
  int k = int(std::upper_bound(cum_.begin(), cum_.end(), r) - cum_.begin()) - 1;
  if (k > 4) k = 4;
  if (local) *local = r - cum_[k];
  return static_cast<ArcId>(k);
}

double Table::arc_start(ArcId a) const { return cum_[static_cast<int>(a)]; }

double Table::arc_length(ArcId a) const {
  const int k = static_cast<int>(a);
  return cum_[k + 1] - cum_[k];
}

double Table::r_on_cusp(bool upper, double s) const {
  const double from_vertex = chart_arclength(s);
  return upper ? r_vertex() + from_vertex : r_vertex() - from_vertex;
}

double Table::r_on_wall_angle(double theta) const {
  // Wall runs from the upper junction (theta_u) through pi to 2*pi - theta_u.
  return cum_[4] + (wrap_angle(theta) - theta_u_) * params_.wall_radius;
}

namespace {
// Angle of a point on a join arc, measured as local arclength offset.
// JoinUpper runs from E1 (psi1) toward the junction; JoinLower is its mirror
// traversed junction -> E2.
}  // namespace

Vec2 Table::point_at(double r) const {
  double local = 0.0;
  const ArcId a = arc_at(r, &local);
  const double rj = params_.join_radius;
  switch (a) {
    case ArcId::JoinLower: {
      // mirror of JoinUpper: from the lower junction to E2
      const double theta = psi1_ + (sweep_ - local / rj);
      const Vec2 p = c1_ + Vec2{std::cos(theta), std::sin(theta)} * rj;
      return {p.x, -p.y};
    }
    case ArcId::CuspLower: {
      const double s = chart_s_from_arclength(len_cusp_ - local);
      return {s, -profile(s)};
    }
    case ArcId::CuspUpper: {
      const double s = chart_s_from_arclength(local);
      return {s, profile(s)};
    }
    case ArcId::JoinUpper: {
      const double theta = psi1_ + local / rj;
      return c1_ + Vec2{std::cos(theta), std::sin(theta)} * rj;
    }
    case ArcId::Wall: {
      const double theta = theta_u_ + local / params_.wall_radius;
      return Vec2{params_.wall_center_x, 0.0} +
             Vec2{std::cos(theta), std::sin(theta)} * params_.wall_radius;
    }
  }
  return {};
}

Vec2 Table::tangent_at(double r) const {
  double local = 0.0;
  const ArcId a = arc_at(r, &local);
  const double rj = params_.join_radius;
  switch (a) {
    case ArcId::JoinLower: {
      const double theta = psi1_ + (sweep_ - local / rj);
      // mirrored circle traversed with decreasing angle
      return {std::sin(theta), std::cos(theta)};
    }
    case ArcId::CuspLower: {
      const double s = chart_s_from_arclength(len_cusp_ - local);
      const double zp = profile_slope(s);
      const double w = std::sqrt(1.0 + zp * zp);
      return {-1.0 / w, zp / w};  // s decreasing toward the vertex
    }
    case ArcId::CuspUpper: {
      const double s = chart_s_from_arclength(local);
      const double zp = profile_slope(s);
      const double w = std::sqrt(1.0 + zp * zp);
      return {1.0 / w, zp / w};
    }
    case ArcId::JoinUpper: {
      const double theta = psi1_ + local / rj;
      return {-std::sin(theta), std::cos(theta)};
    }
    case ArcId::Wall: {
      const double theta = theta_u_ + local / params_.wall_radius;
      return {-std::sin(theta), std::cos(theta)};
    }
  }
  return {};
}

Vec2 Table::inward_normal_at(double r) const {
  double local = 0.0;
  const ArcId a = arc_at(r, &local);
  const double rj = params_.join_radius;
  switch (a) {
    // Every circular arc here is dispersing: its center lies outside the
    // domain, so the inward normal points away from the center.
    case ArcId::JoinLower: {
      const double theta = psi1_ + (sweep_ - local / rj);
      return {std::cos(theta), -std::sin(theta)};
    }
    case ArcId::CuspLower: {
      const double s = chart_s_from_arclength(len_cusp_ - local);
      const double zp = profile_slope(s);
      const double w = std::sqrt(1.0 + zp * zp);
      return {zp / w, 1.0 / w};  // up, into the domain
    }
    case ArcId::CuspUpper: {
      const double s = chart_s_from_arclength(local);
      const double zp = profile_slope(s);
      const double w = std::sqrt(1.0 + zp * zp);
      return {zp / w, -1.0 / w};  // down, into the domain
    }
    case ArcId::JoinUpper: {
      const double theta = psi1_ + local / rj;
      return {std::cos(theta), std::sin(theta)};
    }
    case ArcId::Wall: {
      const double theta = theta_u_ + local / params_.wall_radius;
      return {std::cos(theta), std::sin(theta)};
    }
  }
  return {};
}

double Table::curvature_at(double r) const {
  double local = 0.0;
  const ArcId a = arc_at(r, &local);
  switch (a) {
    case ArcId::JoinLower:
    case ArcId::JoinUpper:
      return 1.0 / params_.join_radius;
    case ArcId::CuspLower:
      return chart_curvature(chart_s_from_arclength(len_cusp_ - local));
    case ArcId::CuspUpper:
      return chart_curvature(chart_s_from_arclength(local));
    case ArcId::Wall:
      return 1.0 / params_.wall_radius;
  }
  return 0.0;
}

}  // namespace flatcusp
