#pragma once
// Independent reference computations for m <= 3: elementary face geometry
// (rays and planar sectors) and dense sphere grids with local zoom refinement.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double ray_distance(const VectorXd& y, const VectorXd& u) {
  const double s = std::max(0.0, y.dot(u));
  return (y - s * u).norm();
}

/// Unit direction of face i of a two-wall cone in the plane.
inline Vector2d face_ray(const MatrixXd& a, int i) {
  Vector2d u(-a(1, i), a(0, i));
  if (u.dot(a.col(1 - i)) < 0) u = -u;
  return u;
}

/// Edge of a three-wall cone in R^3 where walls i and j meet.
inline Vector3d edge(const MatrixXd& a, int i, int j) {
  const int k = 3 - i - j;
  Vector3d e = Vector3d(a.col(i)).cross(Vector3d(a.col(j))).normalized();
  if (e.dot(a.col(k)) < 0) e = -e;
  return e;
}

/// Distance to face i of a three-wall cone: the planar sector between two edges.
inline double sector_distance(const MatrixXd& a, int i, const Vector3d& y) {
  const Vector3d ai = a.col(i);
  const Vector3d foot = y - y.dot(ai) * ai;
  bool inside = true;
  for (int j = 0; j < 3; ++j)
    if (j != i && foot.dot(a.col(j)) < 0) inside = false;
  if (inside) return std::abs(y.dot(ai));
  double best = kInf;
  for (int j = 0; j < 3; ++j)
    if (j != i) best = std::min(best, ray_distance(y, edge(a, i, j)));
  return best;
}

/// Face distance for square cones with two or three walls.
inline double face_distance(const MatrixXd& a, int i, const VectorXd& y) {
  if (a.cols() == 2) return ray_distance(y, face_ray(a, i));
  return sector_distance(a, i, Vector3d(y));
}

/// Pattern zoom on a two-parameter chart: a 9 x 9 stencil, halving the radius when the centre wins.
inline double zoom(const std::function<double(double, double)>& f, double s, double t, double radius) {
  double best = f(s, t);
  for (int round = 0; round < 4000 && radius > 1e-12; ++round) {
    double bs = s, bt = t, bv = best;
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        const double ss = s + i * radius / 4, tt = t + j * radius / 4;
        const double v = f(ss, tt);
        if (v < bv) bv = v, bs = ss, bt = tt;
      }
    }
    if (bv < best) {
      best = bv, s = bs, t = bt;
    } else {
      radius *= 0.5;
    }
  }
  return best;
}

/// min of f over the unit circle: uniform angle grid, then a shrinking local step.
inline double circle_min(const std::function<double(const VectorXd&)>& f, int points = 200000) {
  auto at = [&](double angle) {
    VectorXd y(2);
    y << std::cos(angle), std::sin(angle);
    return f(y);
  };
  const double h = 2 * std::numbers::pi / points;
  double best = kInf, best_angle = 0;
  for (int k = 0; k < points; ++k) {
    const double v = at(k * h);
    if (v < best) best = v, best_angle = k * h;
  }
  double radius = h;
  while (radius > 1e-13) {
    const double lo = at(best_angle - radius), hi = at(best_angle + radius);
    if (lo < best) best = lo, best_angle -= radius;
    else if (hi < best) best = hi, best_angle += radius;
    else radius *= 0.5;
  }
  return best;
}

/// min of f over the arc from u to w (shorter way round).
inline double arc_min(const std::function<double(const VectorXd&)>& f, const Vector2d& u, const Vector2d& w,
                      int points = 200000) {
  const double start = std::atan2(u.y(), u.x());
  const double span = std::atan2(u.x() * w.y() - u.y() * w.x(), u.dot(w));
  auto at = [&](double s) {
    if (s < 0 || s > 1) return kInf;
    VectorXd y(2);
    y << std::cos(start + s * span), std::sin(start + s * span);
    return f(y);
  };
  double best = kInf, best_s = 0;
  for (int k = 0; k <= points; ++k) {
    const double v = at(static_cast<double>(k) / points);
    if (v < best) best = v, best_s = static_cast<double>(k) / points;
  }
  double radius = 1.0 / points;
  while (radius > 1e-14) {
    const double lo = at(best_s - radius), hi = at(best_s + radius);
    if (lo < best) best = lo, best_s -= radius;
    else if (hi < best) best = hi, best_s += radius;
    else radius *= 0.5;
  }
  return best;
}

namespace detail {

struct Candidate {
  double value;
  double s, t;
  int chart;
};

inline void keep_best(std::vector<Candidate>& top, Candidate c, std::size_t count) {
  if (top.size() < count) {
    top.push_back(c);
  } else {
    auto worst = std::max_element(top.begin(), top.end(),
                                  [](const Candidate& x, const Candidate& y) { return x.value < y.value; });
    if (c.value < worst->value) *worst = c;
  }
}

inline Vector3d cube_point(int face, double s, double t) {
  const int axis = face / 2;
  const double sign = face % 2 == 0 ? 1.0 : -1.0;
  Vector3d p;
  p(axis) = sign;
  p((axis + 1) % 3) = s;
  p((axis + 2) % 3) = t;
  return p.normalized();
}

}  // namespace detail

/// min of f over S^2: cube-map grid with `per_side`^2 points per face, then zoom from the best grid points.
inline double sphere_min(const std::function<double(const VectorXd&)>& f, int per_side = 400) {
  std::vector<detail::Candidate> top;
  const double h = 2.0 / per_side;
  for (int face = 0; face < 6; ++face)
    for (int i = 0; i <= per_side; ++i)
      for (int j = 0; j <= per_side; ++j) {
        const double s = -1 + i * h, t = -1 + j * h;
        detail::keep_best(top, {f(detail::cube_point(face, s, t)), s, t, face}, 12);
      }
  double best = kInf;
  for (const auto& c : top) {
    auto chart = [&](double s, double t) { return f(detail::cube_point(c.chart, s, t)); };
    best = std::min(best, zoom(chart, c.s, c.t, h));
  }
  return best;
}

/// min of f over the spherical triangle spanned by v0, v1, v2 (all in the closed positive hull).
inline double triangle_min(const std::function<double(const VectorXd&)>& f, const Vector3d& v0, const Vector3d& v1,
                           const Vector3d& v2, int per_side = 500) {
  auto at = [&](double s, double t) {
    const double r = 1 - s - t;
    if (s < 0 || t < 0 || r < 0) return kInf;
    return f(VectorXd((r * v0 + s * v1 + t * v2).normalized()));
  };
  std::vector<detail::Candidate> top;
  const double h = 1.0 / per_side;
  for (int i = 0; i <= per_side; ++i)
    for (int j = 0; i + j <= per_side; ++j) detail::keep_best(top, {at(i * h, j * h), i * h, j * h, 0}, 12);
  double best = kInf;
  for (const auto& c : top) best = std::min(best, zoom(at, c.s, c.t, h));
  return best;
}

/// delta = min over the unit sphere of max_i |(y, a_i)| for m = 2 or 3.
inline double grid_delta(const MatrixXd& a) {
  auto f = [&](const VectorXd& y) { return (a.transpose() * y).cwiseAbs().maxCoeff(); };
  return a.rows() == 2 ? circle_min(f) : sphere_min(f);
}

/// max over the unit sphere of min_i (y, a_i) for m = 2 or 3.
inline double grid_max_min_margin(const MatrixXd& a) {
  auto f = [&](const VectorXd& y) { return -(a.transpose() * y).minCoeff(); };
  return -(a.rows() == 2 ? circle_min(f) : sphere_min(f));
}

/// Closest point to the origin on the segment [a, b].
inline VectorXd closest_on_segment(const VectorXd& a, const VectorXd& b) {
  const VectorXd ab = b - a;
  const double t = std::clamp(-a.dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return a + t * ab;
}

/// Closest point to the origin on the triangle abc, by Voronoi regions of vertices, edges and interior.
inline Vector3d closest_on_triangle(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  const Vector3d ab = b - a, ac = c - a, ap = -a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vector3d bp = -b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + d1 / (d1 - d3) * ab;
  const Vector3d cp = -c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && d4 - d3 >= 0 && d5 - d6 >= 0) return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  const double denom = 1 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

/// max over the unit ball of min_i (y, a_i) for two or three normals, as the distance from the
/// origin to their convex hull (valid when the value is positive).
inline double hull_max_min_margin(const MatrixXd& a) {
  if (a.cols() == 2) return closest_on_segment(a.col(0), a.col(1)).norm();
  return closest_on_triangle(a.col(0), a.col(1), a.col(2)).norm();
}

/// C = min over Q and the unit sphere of max_i dist(y, B_i) for square cones with m = 2 or 3.
inline double grid_bfk(const MatrixXd& a) {
  const int n = static_cast<int>(a.cols());
  auto f = [&](const VectorXd& y) {
    double worst = 0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, face_distance(a, i, y));
    return worst;
  };
  if (n == 2) return arc_min(f, face_ray(a, 0), face_ray(a, 1));
  return triangle_min(f, edge(a, 1, 2), edge(a, 0, 2), edge(a, 0, 1));
}

/// Inscribed ball of a square cone: (e, a_i) equal for all i.
inline std::pair<double, VectorXd> inscribed_square(const MatrixXd& a) {
  const VectorXd w = a.transpose().fullPivLu().solve(VectorXd::Ones(a.cols()));
  return {1.0 / w.norm(), w.normalized()};
}

/// Collisions of the straight-line image of a trajectory in the wedge {0 <= arg <= theta}:
/// the number of lines at angles k theta swept by the polar angle between q and v.
inline int wedge_collisions(double theta, const Vector2d& q, const Vector2d& v) {
  const double start = std::atan2(q.y(), q.x());
  const double sweep = std::atan2(q.x() * v.y() - q.y() * v.x(), q.dot(v));
  const double end = start + sweep;
  const double lo = std::min(start, end), hi = std::max(start, end);
  int count = 0;
  for (int k = -20; k <= 40; ++k) {
    const double line = k * theta;
    if (line > lo && line < hi) ++count;
  }
  return count;
}

}  // namespace oracle
