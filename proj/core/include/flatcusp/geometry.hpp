#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace flatcusp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {c * x, c * y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const;
  Vec2 normalized() const;
};

// Boundary arcs in order of increasing arclength coordinate r. The
// parametrization starts at the lower join/wall junction, runs through the
// cusp vertex, and closes along the outer wall:
//
//   [0, Lj)                 JoinLower   circular arc from the lower junction to
//                                       the lower chart end E2
//   [Lj, Lj+Lc)             CuspLower   profile z = -s^beta/beta, s: eps0 -> 0
//   r_f = Lj+Lc                         cusp vertex
//   [Lj+Lc, Lj+2Lc)         CuspUpper   profile z = +s^beta/beta, s: 0 -> eps0
//   [Lj+2Lc, 2(Lj+Lc))      JoinUpper   circular arc from E1 to the upper junction
//   [2(Lj+Lc), perimeter)   Wall        outer wall circle through D = (cx-Rw, 0)
//
// Every arc is dispersing (curvature >= 0, vanishing only at the vertex).
// The cusp arms meet the join arcs tangentially; the join arcs meet the wall
// at two genuine corner points (a closed curve that is everywhere dispersing
// with a single cusp cannot be C^1 at every junction). The wall circle is
// centered on the cusp axis, so the tangent line of the cusp hits the wall
// perpendicularly at D.
enum class ArcId : int {
  JoinLower = 0,
  CuspLower = 1,
  CuspUpper = 2,
  JoinUpper = 3,
  Wall = 4,
};

struct TableParams {
  double beta = 3.0;           // flatness order of the cusp (> 2)
  double eps0 = 0.5;           // chart half-width: cusp walls live on s in [0, eps0]
  double join_radius = 1.0;    // radius of the two join arcs
  double wall_radius = 2.0;    // radius of the outer wall
  double wall_center_x = 3.0;  // wall circle center (on the cusp axis)
};

// A billiard table with a cusp at a flat point of order beta at the origin.
// All derived constants are computed on construction; the constructor throws
// std::invalid_argument if the parameters do not produce a valid closed table
// (join and wall circles must intersect, beta must exceed 2, ...).
class Table {
 public:
  explicit Table(const TableParams& params);

  const TableParams& params() const { return params_; }

  // --- local chart of the cusp -------------------------------------------
  // Walls z = +- s^beta / beta for s in [0, eps0].
  double profile(double s) const;            // s^beta / beta
  double profile_slope(double s) const;      // s^(beta-1)
  double chart_curvature(double s) const;    // (beta-1) s^(beta-2) / (1+s^(2beta-2))^(3/2)
  double chart_arclength(double s) const;    // arclength from the vertex to s
  double chart_s_from_arclength(double len) const;  // inverse of chart_arclength

  // --- derived constants --------------------------------------------------
  Vec2 chart_end_upper() const { return e1_; }         // E1 = (eps0, eps0^beta/beta)
  Vec2 join_center_upper() const { return c1_; }
  Vec2 join_center_lower() const { return {c1_.x, -c1_.y}; }
  Vec2 junction_upper() const { return j1_; }
  Vec2 wall_center() const { return {params_.wall_center_x, 0.0}; }
  Vec2 perp_hit_point() const;                         // D = (cx - Rw, 0)
  double join_start_angle() const { return psi1_; }    // angle of E1 - C1
  double join_sweep() const { return sweep_; }
  double wall_theta_min() const { return theta_u_; }   // wall spans |theta| >= theta_u

  double cusp_arm_length() const { return len_cusp_; }
  double join_length() const { return len_join_; }
  double wall_length() const { return len_wall_; }
  double perimeter() const { return perimeter_; }
  double r_vertex() const { return len_join_ + len_cusp_; }        // r_f
  double r_perp_hit() const;                                       // r at D
  double diameter_bound() const;       // upper bound on any free path

  // --- boundary parametrization -------------------------------------------
  // `local` is the arclength offset from the arc's start.
  ArcId arc_at(double r, double* local = nullptr) const;
  double arc_start(ArcId a) const;
  double arc_length(ArcId a) const;

  Vec2 point_at(double r) const;
  Vec2 tangent_at(double r) const;        // unit, in the direction of increasing r
  Vec2 inward_normal_at(double r) const;  // unit, into the domain
  double curvature_at(double r) const;    // >= 0 everywhere (0 only at the vertex)

  // Arclength coordinate of a point on a given arc.
  double r_on_cusp(bool upper, double s) const;
  double r_on_wall_angle(double theta) const;

  // True for the two cusp arms.
  static bool is_cusp(ArcId a) { return a == ArcId::CuspLower || a == ArcId::CuspUpper; }

  // Wrap r into [0, perimeter).
  double wrap(double r) const;

 private:
  TableParams params_;
  Vec2 e1_;        // upper chart end
  Vec2 c1_;        // upper join center
  Vec2 j1_;        // upper junction (join meets wall)
  double psi1_ = 0.0;
  double sweep_ = 0.0;
  double theta_u_ = 0.0;
  double len_cusp_ = 0.0, len_join_ = 0.0, len_wall_ = 0.0, perimeter_ = 0.0;
  std::array<double, 6> cum_{};  // cumulative arclength at arc starts + perimeter
};

// Adaptive Simpson quadrature, used for the chart arclength integral.
double adaptive_simpson(double (*f)(double, const void*), const void* ctx, double a,
                        double b, double abs_tol);

}  // namespace flatcusp
