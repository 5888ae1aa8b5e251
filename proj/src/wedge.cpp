#include "conebill/wedge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conebill {

double wedge_angle(const ConeSpec& cone) {
  if (cone.walls() != 2)
    throw Error(ErrorCode::WrongWallCount, "a wedge has 2 walls, got " + std::to_string(cone.walls()));
  return std::acos(std::clamp(-cone.normal(0).dot(cone.normal(1)), -1.0, 1.0));
}

WedgeSpec make_wedge(const ConeSpec& cone) { return {wedge_angle(cone), cone}; }

WedgeSpec planar_wedge(double theta) {
  if (!(theta > 0 && theta < std::numbers::pi))
    throw Error(ErrorCode::DegenerateArrangement, "wedge angle must lie in (0, pi)");
  MatrixXd normals(2, 2);
  normals << 0.0, std::sin(theta), 1.0, -std::cos(theta);
  ConeSpec cone = make_cone(normals);
  return {wedge_angle(cone), std::move(cone)};
}

std::int64_t sharp_bound(double theta) {
  if (!(theta > 0 && theta < std::numbers::pi))
    throw Error(ErrorCode::DegenerateArrangement, "wedge angle must lie in (0, pi)");
  return static_cast<std::int64_t>(std::ceil(std::numbers::pi / theta - 1e-9));
}

double collinearity_residual(const std::vector<Eigen::Vector2d>& points) {
  if (points.size() < 3) return 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (const auto& p : points) scatter += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(scatter);
  const Eigen::Vector2d normal = solver.eigenvectors().col(0);
  double worst = 0;
  for (const auto& p : points) worst = std::max(worst, std::abs((p - centroid).dot(normal)));
  return worst;
}

namespace {

void check_record_matches(const TrajectoryRecord& record, const WedgeSpec& wedge) {
  if (record.initial.q.size() != wedge.cone.dim())
    throw Error(ErrorCode::ConeMismatch, "trajectory dimension differs from the wedge");
  for (const auto& e : record.events)
    if (e.wall < 0 || e.wall > 1) throw Error(ErrorCode::ConeMismatch, "trajectory references a third wall");
}

}  // namespace

Unfolding unfold(const TrajectoryRecord& record, const WedgeSpec& wedge) {
  check_record_matches(record, wedge);
  // Work in the plane spanned by the two normals; the orthogonal part of the motion is uniform.
  MatrixXd basis = MatrixXd::Identity(2, 2);
  ConeSpec plane = wedge.cone;
  if (wedge.cone.dim() > 2) {
    ReducedCone reduced = reduce_to_span(wedge.cone);
    basis = std::move(reduced.basis);
    plane = std::move(reduced.cone);
  }
  auto to_plane = [&](const VectorXd& x) -> Eigen::Vector2d {
    if (wedge.cone.dim() > 2) return basis.transpose() * x;
    return x;
  };
  auto mirror = [&](int wall) -> Eigen::Matrix2d {
    const Eigen::Vector2d a = plane.normal(wall);
    return Eigen::Matrix2d::Identity() - 2.0 * a * a.transpose();
  };

  Unfolding out;
  Eigen::Matrix2d composite = Eigen::Matrix2d::Identity();
  out.points.push_back(to_plane(record.initial.q));
  VectorXd last_q = record.initial.q;
  VectorXd last_v = record.initial.v;
  for (const auto& event : record.events) {
    out.points.push_back(composite * to_plane(event.q_at));
    composite = composite * mirror(event.wall);
    // keep the accumulated map orthogonal
    composite.col(0).normalize();
    composite.col(1) -= composite.col(0).dot(composite.col(1)) * composite.col(0);
    composite.col(1).normalize();
    last_q = event.q_at;
    last_v = event.v_after;
  }
  out.points.push_back(composite * to_plane(last_q + last_v));
  out.collinearity_residual = collinearity_residual(out.points);
  return out;
}

VelocityArcReport velocity_arc_check(const TrajectoryRecord& record, const WedgeSpec& wedge) {
  check_record_matches(record, wedge);
  const std::size_t n_events = record.events.size();
  if (n_events < 2)
    throw Error(ErrorCode::TooFewEvents, "velocity-arc check needs at least 2 collisions, got " +
                                             std::to_string(n_events));
  for (std::size_t k = 1; k < n_events; ++k)
    if (record.events[k].wall == record.events[k - 1].wall)
      throw Error(ErrorCode::AlternationError, "consecutive collisions on the same wall");

  VelocityArcReport report;
  const auto& v = record.velocities;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    const VectorXd back = v[k - 1] - v[k];
    const VectorXd ahead = v[k + 1] - v[k];
    const VectorXd a = back.normalized();
    const VectorXd b = ahead.normalized();
    const double angle = 2.0 * std::atan2((a - b).norm(), (a + b).norm());
    report.interior_angles.push_back(angle);
    report.max_angle_error = std::max(report.max_angle_error, std::abs(angle - wedge.theta));
  }
  report.total_turning = 2.0 * wedge.theta * static_cast<double>(n_events - 1);
  report.angles_match = report.max_angle_error <= 1e-9;
  report.turning_below_2pi = report.total_turning < 2.0 * std::numbers::pi + 1e-9;
  return report;
}

}  // namespace conebill
