#pragma once

#include <array>
#include <optional>
#include <utility>

#include "flatcusp/geometry.hpp"

namespace flatcusp {

// A collision state: boundary point r (arclength) and reflection angle phi,
// measured from the inward normal to the *outgoing* velocity, positive
// toward the tangent of increasing r. phi lies in (-pi/2, pi/2).
struct PhasePoint {
  double r = 0.0;
  double phi = 0.0;
};

struct StepResult {
  PhasePoint x;     // next collision, post-reflection
  double tau = 0;   // free path between the two collisions
  ArcId arc{};      // arc of the next collision
  double local = 0; // arclength offset within that arc
  double s = 0;     // chart coordinate if the next collision is on a cusp arm, else 0
};

// The exact collision-to-collision billiard map.
//
// Free flights are straight; reflections are specular. Intersections with
// the circular arcs are solved by the quadratic formula (with the known
// t = 0 root removed exactly when leaving the same circle is geometrically
// impossible, which is the case for every dispersing arc here); intersections
// with the cusp walls are solved in the local (s, z) chart where the wall is
// the graph z = +-s^beta/beta, avoiding cancellation near the vertex.
class BilliardMap {
 public:
  explicit BilliardMap(const Table& table) : table_(&table) {}

  const Table& table() const { return *table_; }

  // Position and outgoing direction of a phase point.
  Vec2 position(const PhasePoint& x) const;
  Vec2 direction(const PhasePoint& x) const;

  // One step of the map. Returns std::nullopt only if no forward
  // intersection is found (a numerical corner-wedge escape; callers count
  // these and resample -- they do not occur in measure).
  std::optional<StepResult> step(const PhasePoint& x) const;

  // Time reversal: iota(r, phi) = (r, -phi) conjugates the map and its inverse.
  static PhasePoint involution(PhasePoint x) { return {x.r, -x.phi}; }
  std::optional<PhasePoint> inverse(const PhasePoint& x) const;

  // Derivative of the map at x in (dr, dphi) coordinates, given the already
  // computed step to the next collision. Entries follow the standard
  // dispersing-billiard form
  //   -1/cos(phi1) * [ tau*K + cos(phi)              tau        ]
  //                  [ tau*K*K1 + K*cos(phi1) + K1*cos(phi)   tau*K1 + cos(phi1) ]
  // whose determinant is cos(phi)/cos(phi1).
  std::array<double, 4> derivative(const PhasePoint& x, const StepResult& next) const;

  // Wavefront curvature transport: a dispersing wavefront with curvature b>0
  // right after a collision arrives at the next collision with curvature
  // b/(1 + tau*b) and leaves it with an extra 2*K/cos(phi).
  static double transport_flight(double b, double tau) { return b / (1.0 + tau * b); }
  double reflect_curvature(double b_in, const PhasePoint& at) const;

  // Homogeneity strip index of an angle: 0 away from grazing, otherwise
  // floor(1/sqrt(pi/2 - |phi|)); strips start at k0.
  static int homogeneity_strip(double phi, int k0);

 private:
  const Table* table_;
};

// First intersection of the ray p + t*dir (dir unit) with either cusp wall,
// as (chart coordinate s, flight t). The same chart solver the map uses,
// exposed so it can be validated in isolation.
std::optional<std::pair<double, double>> cusp_ray_hit(const Table& table, Vec2 p,
                                                      Vec2 dir);

}  // namespace flatcusp
