#pragma once
/**
 * @file wedge.hpp
 * @brief Two-wall cones: angle, the sharp ceil(pi/theta) bound, unfolding and the velocity-arc check.
 */

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "conebill/cone.hpp"
#include "conebill/simulator.hpp"

namespace conebill {

struct WedgeSpec {
  double theta = 0;  ///< radians, in (0, pi)
  ConeSpec cone;
};

/// theta = arccos(-(a_1, a_2)). Throws WrongWallCount unless the cone has two walls.
double wedge_angle(const ConeSpec& cone);
WedgeSpec make_wedge(const ConeSpec& cone);
/// Planar wedge between the rays at angle 0 and theta.
WedgeSpec planar_wedge(double theta);

/// ceil(pi / theta), with a 1e-9 slack so that theta = pi/k evaluates to k.
std::int64_t sharp_bound(double theta);

struct Unfolding {
  std::vector<Eigen::Vector2d> points;
  double collinearity_residual = 0;  ///< max distance of points to their least-squares line
};

/// Reflects successive segments into copies of the wedge; the image is a straight line.
Unfolding unfold(const TrajectoryRecord& record, const WedgeSpec& wedge);

/// Max distance from the points to their total-least-squares line.
double collinearity_residual(const std::vector<Eigen::Vector2d>& points);

struct VelocityArcReport {
  std::vector<double> interior_angles;  ///< angle at v_k between v_{k-1} and v_{k+1}
  double max_angle_error = 0;           ///< max |angle - theta|
  double total_turning = 0;             ///< 2 theta (N - 1)
  bool angles_match = false;            ///< max_angle_error <= 1e-9
  bool turning_below_2pi = false;       ///< total_turning < 2 pi + 1e-9
};

/// Requires N >= 2 collisions on alternating walls (TooFewEvents / AlternationError otherwise).
VelocityArcReport velocity_arc_check(const TrajectoryRecord& record, const WedgeSpec& wedge);

}  // namespace conebill
