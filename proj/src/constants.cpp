#include "conebill/constants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include "conebill/wedge.hpp"
#include "sphere_search.hpp"

namespace conebill {

namespace {

constexpr int kMaxWallsForVertexEnumeration = 24;
constexpr int kMaxWallsForSubsetEnumeration = 16;
constexpr int kMaxWallsForFaceDistance = 12;
constexpr double kFeasibilityTolerance = 1e-12;
// Rounding slack so a certified lower bound never exceeds the value it bounds.
constexpr double kCertifiedShrink = 1.0 - 1e-12;

ConeSpec square_cone(const ConeSpec& cone) {
  return cone.walls() < cone.dim() ? reduce_to_span(cone).cone : cone;
}

void require_walls_at_most(const ConeSpec& cone, int limit, const char* what) {
  if (cone.walls() > limit)
    throw Error(ErrorCode::TooManyWalls, std::string(what) + " supports at most " + std::to_string(limit) +
                                             " walls, got " + std::to_string(cone.walls()));
}

// Exact distances to the faces B_i by enumerating which of the other walls are active at
// the foot point. For every (wall, subset) pair we keep an orthonormal basis of
// span{a_i, a_j : j in subset}; the candidate foot is y minus its projection on that span.
class FaceDistanceTable {
 public:
  explicit FaceDistanceTable(const ConeSpec& cone) : normals_(cone.normals()), gram_(gram(cone)) {
    const Eigen::Index n = normals_.cols();
    pieces_.resize(static_cast<std::size_t>(n));
    const std::uint32_t all = (std::uint32_t{1} << n) - 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::uint32_t self = std::uint32_t{1} << i;
      for (std::uint32_t mask = 1; mask <= all; ++mask) {
        if ((mask & self) == 0 || mask == self) continue;
        MatrixXd span(normals_.rows(), std::popcount(mask));
        Eigen::Index c = 0;
        for (Eigen::Index j = 0; j < n; ++j)
          if (mask & (std::uint32_t{1} << j)) span.col(c++) = normals_.col(j);
        Eigen::HouseholderQR<MatrixXd> qr(span);
        MatrixXd basis = qr.householderQ() * MatrixXd::Identity(span.rows(), span.cols());
        MatrixXd basis_dot_normals = basis.transpose() * normals_;
        pieces_[static_cast<std::size_t>(i)].push_back({mask, std::move(basis), std::move(basis_dot_normals)});
      }
    }
  }

  /// `z` must hold the margins A^T y.
  double distance(Eigen::Index wall, const VectorXd& y, const VectorXd& z, VectorXd* gradient) const {
    const Eigen::Index n = normals_.cols();
    // Foot on the hyperplane itself.
    bool feasible = true;
    for (Eigen::Index j = 0; j < n && feasible; ++j)
      if (j != wall && z(j) - z(wall) * gram_(wall, j) < -kFeasibilityTolerance) feasible = false;
    if (feasible) {
      if (gradient) *gradient = (z(wall) >= 0 ? 1.0 : -1.0) * normals_.col(wall);
      return std::abs(z(wall));
    }
    double best = std::numeric_limits<double>::infinity();
    const Piece* best_piece = nullptr;
    VectorXd best_w;
    for (const Piece& piece : pieces_[static_cast<std::size_t>(wall)]) {
      const VectorXd w = piece.basis.transpose() * y;
      const double dist = w.norm();
      if (dist >= best) continue;
      bool ok = true;
      for (Eigen::Index j = 0; j < n && ok; ++j) {
        if (piece.mask & (std::uint32_t{1} << j)) continue;
        if (z(j) - piece.basis_dot_normals.col(j).dot(w) < -kFeasibilityTolerance) ok = false;
      }
      if (ok) {
        best = dist;
        best_piece = &piece;
        best_w = w;
      }
    }
    if (gradient) {
      if (best_piece && best > 0)
        *gradient = best_piece->basis * best_w / best;
      else
        *gradient = VectorXd::Zero(y.size());
    }
    return best;
  }

 private:
  struct Piece {
    std::uint32_t mask;
    MatrixXd basis;
    MatrixXd basis_dot_normals;
  };
  MatrixXd normals_;
  GramMatrix gram_;
  std::vector<std::vector<Piece>> pieces_;
};

class CapacityObjective final : public detail::MaxObjective {
 public:
  explicit CapacityObjective(const MatrixXd& normals) : normals_(normals) {}

  double value(const VectorXd& y) const override { return (normals_.transpose() * y).lpNorm<Eigen::Infinity>(); }

  void pieces(const VectorXd& y, VectorXd& values, MatrixXd& grads) const override {
    const VectorXd z = normals_.transpose() * y;
    values = z.cwiseAbs();
    grads = normals_;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      if (z(i) < 0) grads.col(i) = -grads.col(i);
  }

 private:
  MatrixXd normals_;
};

class NondegeneracyObjective final : public detail::MaxObjective {
 public:
  NondegeneracyObjective(const ConeSpec& cone, const VectorXd& center)
      : normals_(cone.normals()), table_(cone), center_(center) {
    inverse_transpose_ = normals_.transpose().fullPivLu().solve(MatrixXd::Identity(cone.walls(), cone.walls()));
  }

  double value(const VectorXd& y) const override {
    const VectorXd z = normals_.transpose() * y;
    double top = 0;
    for (Eigen::Index i = 0; i < normals_.cols(); ++i) top = std::max(top, table_.distance(i, y, z, nullptr));
    return top;
  }

  void pieces(const VectorXd& y, VectorXd& values, MatrixXd& grads) const override {
    const VectorXd z = normals_.transpose() * y;
    const Eigen::Index n = normals_.cols();
    values.resize(n);
    grads.resize(y.size(), n);
    VectorXd g;
    for (Eigen::Index i = 0; i < n; ++i) {
      values(i) = table_.distance(i, y, z, &g);
      grads.col(i) = g;
    }
  }

  // Clamp the margins at zero and map back: lands in Q and fixes points already in Q.
  VectorXd retract(const VectorXd& y) const override {
    const VectorXd z = (normals_.transpose() * y).cwiseMax(0.0);
    if (z.maxCoeff() <= 0) return center_;
    return (inverse_transpose_ * z).normalized();
  }

  bool admissible(const VectorXd& y) const override { return ((normals_.transpose() * y).array() >= 0).all(); }

  /// Interior start from a point of the positive orthant of margins.
  VectorXd from_margins(const VectorXd& z) const { return (inverse_transpose_ * z).normalized(); }

 private:
  MatrixXd normals_;
  FaceDistanceTable table_;
  VectorXd center_;
  MatrixXd inverse_transpose_;
};

}  // namespace

InscribedBall inscribed_ball(const ConeSpec& cone) {
  const Eigen::Index n = cone.walls();
  // Minimum-norm w with A^T w = 1 lies in span(A); then d = 1/|w|, e = d w.
  const VectorXd w = cone.normals().transpose().completeOrthogonalDecomposition().solve(VectorXd::Ones(n));
  const double norm = w.norm();
  if (!(norm > 0) || !std::isfinite(norm)) throw Error(ErrorCode::DegenerateArrangement, "singular normal matrix");
  InscribedBall ball;
  ball.d = 1.0 / norm;
  ball.e = w / norm;
  return ball;
}

CapacityEstimate capacity_delta(const ConeSpec& input) {
  const ConeSpec cone = square_cone(input);
  require_walls_at_most(cone, kMaxWallsForVertexEnumeration, "capacity_delta");
  const Eigen::Index n = cone.walls();

  // A = QR; for y = A^{-T} s we get |y| = |R^{-T} s|.
  Eigen::HouseholderQR<MatrixXd> qr(cone.normals());
  const MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  const MatrixXd r_inv_t = r.transpose().triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));

  // Gray-code walk over sign vectors with s_0 = +1 (s and -s give the same norm).
  VectorXd v = r_inv_t.rowwise().sum();
  double best = v.squaredNorm();
  std::vector<double> sign(static_cast<std::size_t>(n), 1.0);
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < count; ++k) {
    const auto bit = static_cast<Eigen::Index>(std::countr_zero(k)) + 1;
    auto& s = sign[static_cast<std::size_t>(bit)];
    v -= 2 * s * r_inv_t.col(bit);
    s = -s;
    best = std::max(best, v.squaredNorm());
  }

  CapacityEstimate out;
  out.delta.value = 1.0 / std::sqrt(best);
  out.delta.certified_lower = kCertifiedShrink * std::sqrt(std::max(lambda_min(cone), 0.0) / static_cast<double>(n));
  out.delta.method = EstimateMethod::subset_enumeration;
  out.psi = n == 1 ? std::numbers::pi / 2 : std::asin(std::min(out.delta.value, 1.0));
  return out;
}

CapacityEstimate capacity_delta_multistart(const ConeSpec& input, const SearchOptions& options) {
  const ConeSpec cone = square_cone(input);
  const Eigen::Index n = cone.walls();
  CapacityObjective objective(cone.normals());
  auto starts = detail::low_discrepancy_directions(n, options.starts);
  const auto search = detail::multistart_minimize(objective, starts, options.iterations,
                                                  options.grid_refine && n <= 3, options.grid_points);
  CapacityEstimate out;
  out.delta.value = search.best.value;
  out.delta.certified_lower = kCertifiedShrink * std::sqrt(std::max(lambda_min(cone), 0.0) / static_cast<double>(n));
  out.delta.method = search.grid_used ? EstimateMethod::grid_oracle : EstimateMethod::multistart;
  out.delta.starts_used = search.starts_used;
  out.psi = n == 1 ? std::numbers::pi / 2 : std::asin(std::min(out.delta.value, 1.0));
  return out;
}

double max_min_margin(const GramMatrix& g) {
  const Eigen::Index n = g.rows();
  if (n > kMaxWallsForSubsetEnumeration)
    throw Error(ErrorCode::TooManyWalls, "subset enumeration supports at most " +
                                             std::to_string(kMaxWallsForSubsetEnumeration) + " walls");
  double best = -std::numeric_limits<double>::infinity();
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  std::vector<Eigen::Index> idx;
  for (std::uint32_t mask = 1; mask <= all; ++mask) {
    idx.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (mask & (std::uint32_t{1} << j)) idx.push_back(j);
    const auto k = static_cast<Eigen::Index>(idx.size());
    MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = g(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    // u = A_S c / |A_S c| with G_S c = 1 equalizes the margins on S at mu = 1/sqrt(sum c).
    Eigen::LDLT<MatrixXd> ldlt(sub);
    if (ldlt.info() != Eigen::Success) continue;
    const VectorXd c = ldlt.solve(VectorXd::Ones(k));
    const double total = c.sum();
    if (!(total > 0)) continue;
    const double mu = 1.0 / std::sqrt(total);
    if (mu <= best) continue;
    bool ok = true;
    for (Eigen::Index j = 0; j < n && ok; ++j) {
      if (mask & (std::uint32_t{1} << j)) continue;
      double margin = 0;
      for (Eigen::Index a = 0; a < k; ++a) margin += g(j, idx[static_cast<std::size_t>(a)]) * c(a);
      if (margin * mu < mu - 1e-12) ok = false;
    }
    if (ok) best = mu;
  }
  return best;
}

ConstantEstimate charge_SQ(const ConeSpec& input) {
  const ConeSpec cone = square_cone(input);
  ConstantEstimate out;
  out.value = std::asin(std::clamp(max_min_margin(gram(cone)), 0.0, 1.0));
  out.method = EstimateMethod::subset_enumeration;
  return out;
}

ConstantEstimate charge_phi(const ConeSpec& input) {
  const ConeSpec cone = square_cone(input);
  const Eigen::Index n = cone.walls();
  const GramMatrix g = gram(cone);
  double best = std::numeric_limits<double>::infinity();
  // Q_{-s} = -Q_s, so fixing the first sign covers every cone up to congruence.
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 0; k < count; ++k) {
    VectorXd sign = VectorXd::Ones(n);
    for (Eigen::Index j = 1; j < n; ++j)
      if (k & (std::uint64_t{1} << (j - 1))) sign(j) = -1;
    const GramMatrix flipped = sign.asDiagonal() * g * sign.asDiagonal();
    const double mu = max_min_margin(flipped);
    if (!(mu > 1e-9)) continue;  // empty interior
    best = std::min(best, mu);
  }
  ConstantEstimate out;
  out.value = std::asin(std::clamp(best, 0.0, 1.0));
  out.method = EstimateMethod::subset_enumeration;
  return out;
}

double face_distance(const ConeSpec& cone, Eigen::Index wall, const VectorXd& y) {
  require_walls_at_most(cone, kMaxWallsForFaceDistance, "face_distance");
  if (wall < 0 || wall >= cone.walls()) throw Error(ErrorCode::ConeMismatch, "wall index out of range");
  FaceDistanceTable table(cone);
  return table.distance(wall, y, margins(cone, y), nullptr);
}

ConstantEstimate bfk_constant(const ConeSpec& input, const SearchOptions& options) {
  const ConeSpec cone = square_cone(input);
  require_walls_at_most(cone, kMaxWallsForFaceDistance, "bfk_constant");
  const Eigen::Index n = cone.walls();

  ConstantEstimate out;
  out.certified_lower = kCertifiedShrink * capacity_delta(cone).delta.value;
  if (n == 1) {
    out.value = 1.0;
    out.method = EstimateMethod::closed_form;
    return out;
  }

  const InscribedBall ball = inscribed_ball(cone);
  NondegeneracyObjective objective(cone, ball.e);
  std::vector<VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(options.starts));
  starts.push_back(ball.e);
  for (const VectorXd& dir : detail::low_discrepancy_directions(n, std::max(options.starts - 1, 0)))
    starts.push_back(objective.from_margins(dir.cwiseAbs()));
  starts.resize(static_cast<std::size_t>(std::max(options.starts, 1)));

  const auto search = detail::multistart_minimize(objective, starts, options.iterations,
                                                  options.grid_refine && n <= 3, options.grid_points);
  out.value = std::min(search.best.value, 1.0);
  out.method = search.grid_used ? EstimateMethod::grid_oracle : EstimateMethod::multistart;
  out.starts_used = search.starts_used;
  return out;
}

TridiagonalCase tridiagonal_case(const GramMatrix& g) {
  const Eigen::Index n = g.rows();
  TridiagonalCase out;
  out.applicable = true;
  for (Eigen::Index i = 0; i < n && out.applicable; ++i) {
    for (Eigen::Index j = i + 2; j < n; ++j)
      if (std::abs(g(i, j)) > 1e-12) out.applicable = false;
    if (i + 1 < n && g(i, i + 1) < -0.5 - 1e-12) out.applicable = false;
  }
  if (out.applicable) out.bound = static_cast<std::int64_t>(n) * (n + 1) / 2;
  return out;
}

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double main_bound(int n, double lambda_min) { return factorial(n) * std::pow(4.0 / lambda_min, n - 1); }

double dd_bound(int n, double d, double delta) { return std::pow(4.0 / (d * delta), n - 1); }

double sevryuk_bound(int n, double phi) {
  const double s2 = std::sin(phi) * std::sin(phi);
  return s2 / 2 * std::pow(4.0 / s2, std::ldexp(1.0, n - 1)) - 1;
}

double bfk_bound(int n, double c) { return 8.0 * std::pow(1.0 / c + 2.0, 2 * (n - 1)); }

BoundsReport bounds_report(const ConeSpec& input, const SearchOptions& options) {
  const ConeSpec cone = square_cone(input);
  const int n = static_cast<int>(cone.walls());
  const GramMatrix g = gram(cone);

  BoundsReport r;
  r.n = n;
  r.m = static_cast<int>(input.dim());
  r.lambda_min = min_eigenvalue(g);
  r.d = inscribed_ball(cone).d;
  const CapacityEstimate capacity = capacity_delta(cone);
  r.delta = capacity.delta.value;
  r.delta_certified_lower = capacity.delta.certified_lower.value_or(0.0);
  r.psi = capacity.psi;
  r.charge_SQ = charge_SQ(cone).value;
  r.charge_phi = charge_phi(cone).value;
  const ConstantEstimate c = bfk_constant(cone, options);
  r.bfk_C = c.value;
  r.bfk_C_certified_lower = c.certified_lower.value_or(0.0);

  r.bound_main = main_bound(n, r.lambda_min);
  r.bound_dd = dd_bound(n, r.d, r.delta);
  r.bound_sevryuk = sevryuk_bound(n, r.charge_phi);
  r.bound_bfk = bfk_bound(n, r.bfk_C);
  if (n == 2) r.bound_wedge = sharp_bound(wedge_angle(cone));
  const TridiagonalCase tri = tridiagonal_case(g);
  r.tridiagonal_applicable = tri.applicable;
  r.bound_tridiagonal = tri.bound;
  return r;
}

}  // namespace conebill
