#pragma once
/**
 * @file cone.hpp
 * @brief Polyhedral cones Q = {y : (y, a_i) >= 0 for all i} given by unit wall normals.
 */

#include <Eigen/Dense>

#include <vector>

#include "conebill/error.hpp"
#include "conebill/linalg.hpp"

namespace conebill {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Gram matrix of the wall normals, entries (a_i, a_j).
using GramMatrix = MatrixXd;

/// Inputs whose norm deviates from 1 by more than this set the renormalized flag.
inline constexpr double kNormWarningTolerance = 1e-6;
/// Normals are independent iff sqrt(lambda_min(A^T A)) exceeds this.
inline constexpr double kIndependenceThreshold = 1e-9;

/**
 * Validated cone: n linearly independent unit normals in R^m, 1 <= n <= m.
 *
 * Immutable once built; construct through make_cone().
 */
class ConeSpec {
 public:
  ConeSpec() = default;

  Eigen::Index dim() const { return normals_.rows(); }
  Eigen::Index walls() const { return normals_.cols(); }

  /// m x n matrix A whose columns are the unit normals.
  const MatrixXd& normals() const { return normals_; }
  auto normal(Eigen::Index i) const { return normals_.col(i); }

  /// True when at least one input normal was far from unit length.
  bool renormalized() const { return renormalized_; }

  /// Smallest singular value of A.
  double smallest_singular_value() const { return sigma_min_; }

 private:
  friend ConeSpec make_cone(const MatrixXd& columns);
  MatrixXd normals_;
  bool renormalized_ = false;
  double sigma_min_ = 0;
};

/// Builds a cone from direction vectors stored as the columns of `columns`.
ConeSpec make_cone(const MatrixXd& columns);
/// Builds a cone in R^dim from a list of direction vectors.
ConeSpec make_cone(Eigen::Index dim, const std::vector<VectorXd>& normals);

GramMatrix gram(const ConeSpec& cone);

/// Min eigenvalue of the cone's Gram matrix.
double lambda_min(const ConeSpec& cone);

/// The cone expressed in an orthonormal basis of span(a_1, ..., a_n).
struct ReducedCone {
  ConeSpec cone;   ///< n x n normals
  MatrixXd basis;  ///< m x n, orthonormal columns; full = basis * reduced
};

/// Projects onto the span of the normals. Requires n <= m.
ReducedCone reduce_to_span(const ConeSpec& cone);
ReducedCone reduce_to_span(Eigen::Index dim, const std::vector<VectorXd>& normals);

/// True iff (point, a_i) >= -tol for every wall.
bool contains(const ConeSpec& cone, const VectorXd& point, double tol = 0.0);

/// Margins (point, a_i), one per wall.
VectorXd margins(const ConeSpec& cone, const VectorXd& point);

/// The cone with the sign of normal i flipped.
ConeSpec flip_normal(const ConeSpec& cone, Eigen::Index i);

}  // namespace conebill
