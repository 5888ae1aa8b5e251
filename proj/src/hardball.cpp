#include "conebill/hardball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace conebill {

VectorXd BallCone::to_cone(const std::vector<double>& x) const {
  VectorXd y(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) y(static_cast<Eigen::Index>(i)) = scale[i] * x[i];
  return y;
}

std::vector<double> BallCone::from_cone(const VectorXd& y) const {
  std::vector<double> x(static_cast<std::size_t>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = y(static_cast<Eigen::Index>(i)) / scale[i];
  return x;
}

BallCone balls_to_cone(const std::vector<double>& masses) {
  const std::size_t count = masses.size();
  if (count < 2) throw Error(ErrorCode::TooFewBalls, "need at least 2 balls, got " + std::to_string(count));
  BallCone out;
  for (double m : masses) {
    if (!(m > 0) || !std::isfinite(m)) throw Error(ErrorCode::NonpositiveMass, "masses must be positive");
    out.scale.push_back(std::sqrt(m));
  }
  const auto dim = static_cast<Eigen::Index>(count);
  MatrixXd normals = MatrixXd::Zero(dim, dim - 1);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) {
    normals(i, i) = -1.0 / out.scale[static_cast<std::size_t>(i)];
    normals(i + 1, i) = 1.0 / out.scale[static_cast<std::size_t>(i + 1)];
  }
  out.cone = make_cone(normals);
  return out;
}

void validate(const HardBallSystem& system) {
  const std::size_t count = system.masses.size();
  if (count < 2) throw Error(ErrorCode::TooFewBalls, "need at least 2 balls");
  if (system.positions.size() != count || system.velocities.size() != count)
    throw Error(ErrorCode::DimensionMismatch, "masses, positions and velocities differ in length");
  for (double m : system.masses)
    if (!(m > 0) || !std::isfinite(m)) throw Error(ErrorCode::NonpositiveMass, "masses must be positive");
  for (std::size_t i = 0; i < count; ++i)
    if (!std::isfinite(system.positions[i]) || !std::isfinite(system.velocities[i]))
      throw Error(ErrorCode::InvalidState, "non-finite position or velocity");
  for (std::size_t i = 1; i < count; ++i)
    if (!(system.positions[i] > system.positions[i - 1]))
      throw Error(ErrorCode::InvalidState, "positions must be strictly increasing");
}

std::pair<double, double> elastic_collision(double m1, double v1, double m2, double v2) {
  const double total = m1 + m2;
  return {((m1 - m2) * v1 + 2 * m2 * v2) / total, ((m2 - m1) * v2 + 2 * m1 * v1) / total};
}

BallRun simulate_balls(const HardBallSystem& system, std::int64_t max_events) {
  validate(system);
  std::vector<double> x = system.positions;
  std::vector<double> u = system.velocities;
  const std::vector<double>& m = system.masses;
  const std::size_t count = m.size();

  BallRun run;
  double now = 0;
  while (true) {
    double first = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    std::size_t pair = count;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      const double closing = u[i] - u[i + 1];
      if (closing <= 0) continue;
      const double t = std::max(0.0, (x[i + 1] - x[i]) / closing);
      if (t < first) {
        second = first;
        first = t;
        pair = i;
      } else if (t < second) {
        second = t;
      }
    }
    if (pair == count) {
      run.terminal = Terminal::Escaped;
      break;
    }
    if (second - first < kCornerTolerance * (1.0 + first)) {
      run.terminal = Terminal::CornerHit;
      break;
    }
    if (static_cast<std::int64_t>(run.events.size()) >= max_events) {
      run.terminal = Terminal::StepLimit;
      break;
    }
    for (std::size_t i = 0; i < count; ++i) x[i] += first * u[i];
    const double contact = 0.5 * (x[pair] + x[pair + 1]);
    x[pair] = x[pair + 1] = contact;
    now += first;
    const auto [left, right] = elastic_collision(m[pair], u[pair], m[pair + 1], u[pair + 1]);
    u[pair] = left;
    u[pair + 1] = right;
    run.events.push_back({now, static_cast<int>(pair), left, right});
  }
  return run;
}

TrajectoryRecord cone_trajectory(const HardBallSystem& system, std::int64_t horizon) {
  validate(system);
  const BallCone image = balls_to_cone(system.masses);
  const VectorXd q = image.to_cone(system.positions);
  const VectorXd w = image.to_cone(system.velocities);
  const double speed = w.norm();
  if (!(speed > 0)) {
    TrajectoryRecord still;
    still.initial = {q, VectorXd::Zero(q.size()), 0};
    still.velocities.push_back(still.initial.v);
    return still;
  }
  TrajectoryRecord record = run(make_state(image.cone, q, w / speed), image.cone, horizon);
  // back to ball time: the unit-speed particle covers |w| t in time t
  for (auto& event : record.events) event.t /= speed;
  return record;
}

ConjugacyReport conjugacy_check(const HardBallSystem& system, std::int64_t horizon) {
  const BallRun balls = simulate_balls(system, horizon);
  const TrajectoryRecord cone = cone_trajectory(system, horizon);

  ConjugacyReport report;
  report.ball_events = balls.events.size();
  report.cone_events = cone.events.size();
  report.ball_terminal = balls.terminal;
  report.cone_terminal = cone.terminal;
  report.sequences_match = report.ball_events == report.cone_events;
  const std::size_t common = std::min(report.ball_events, report.cone_events);
  for (std::size_t k = 0; k < common; ++k) {
    if (balls.events[k].left != cone.events[k].wall) report.sequences_match = false;
    const double a = balls.events[k].t;
    const double b = cone.events[k].t;
    const double scale = std::max(std::abs(a), std::abs(b));
    const double rel = scale > 0 ? std::abs(a - b) / scale : 0.0;
    report.max_time_rel_error = std::max(report.max_time_rel_error, rel);
  }
  report.times_match = report.max_time_rel_error <= 1e-8;
  return report;
}

}  // namespace conebill
