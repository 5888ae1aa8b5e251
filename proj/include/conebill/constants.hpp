#pragma once
/**
 * @file constants.hpp
 * @brief Scalar characteristics of a cone and the collision-count bounds built from them.
 *
 * Every constant below is a property of the cone after reduction to the span
 * of its normals, so cones with n < m are reduced internally. Apart from the
 * BFK constant C, all of them are functions of the Gram matrix alone:
 *
 *   d     = 1 / sqrt(1^T G^{-1} 1)                  (inscribed ball radius)
 *   delta = 1 / max_{s in {+-1}^n} sqrt(s^T G^{-1} s)
 *   S(Q)  = arcsin max_{|u| <= 1} min_i (u, a_i)
 *
 * The delta formula follows from min_{|y|=1} |A^T y|_inf = 1 / max{|y| : |A^T y|_inf <= 1}
 * whose maximum sits at a vertex of the parallelotope.
 */

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "conebill/cone.hpp"

namespace conebill {

/// Ball of radius d centred at the unit vector e touching every wall: (e, a_i) = d.
struct InscribedBall {
  double d = 0;
  VectorXd e;
};

enum class EstimateMethod { closed_form, subset_enumeration, multistart, grid_oracle };

constexpr std::string_view to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::closed_form: return "closed_form";
    case EstimateMethod::subset_enumeration: return "subset_enumeration";
    case EstimateMethod::multistart: return "multistart";
    case EstimateMethod::grid_oracle: return "grid_oracle";
  }
  return "unknown";
}

struct ConstantEstimate {
  double value = 0;
  std::optional<double> certified_lower;
  EstimateMethod method = EstimateMethod::closed_form;
  int starts_used = 0;
};

/// Controls the nonconvex minimax searches (delta by multistart, and C).
struct SearchOptions {
  int starts = 256;
  int iterations = 500;
  /// For m <= 3, polish with a dense sphere grid.
  bool grid_refine = true;
  long grid_points = 1'000'000;
};

struct CapacityEstimate {
  ConstantEstimate delta;
  double psi = 0;  ///< arcsin(delta), radians
};

InscribedBall inscribed_ball(const ConeSpec& cone);

/// Exact delta by sign-vertex enumeration; certified_lower = sqrt(lambda_min / n).
CapacityEstimate capacity_delta(const ConeSpec& cone);
/// delta by multistart descent on the sphere; value is attained, so it bounds delta from above.
CapacityEstimate capacity_delta_multistart(const ConeSpec& cone, const SearchOptions& options = {});

/// S(Q) in radians, by equal-margin active-subset enumeration.
ConstantEstimate charge_SQ(const ConeSpec& cone);
/// Largest achievable min-margin max_{|u|<=1} min_i (u, a_i); S(Q) = arcsin of it when positive.
double max_min_margin(const GramMatrix& g);
/// phi: minimum of S over the full-dimensional sign cones.
ConstantEstimate charge_phi(const ConeSpec& cone);

/// Euclidean distance from y to the face B_i = {x : (x, a_i) = 0, (x, a_j) >= 0}.
double face_distance(const ConeSpec& cone, Eigen::Index wall, const VectorXd& y);
/// BFK nondegeneracy constant C = min_{y in Q, |y|=1} max_i dist(y, B_i).
ConstantEstimate bfk_constant(const ConeSpec& cone, const SearchOptions& options = {});

struct TridiagonalCase {
  bool applicable = false;
  std::optional<std::int64_t> bound;
};
/// Banded Gram with (a_i, a_{i+1}) >= -1/2 admits at most n(n+1)/2 collisions.
TridiagonalCase tridiagonal_case(const GramMatrix& g);

double factorial(int n);
double main_bound(int n, double lambda_min);
double dd_bound(int n, double d, double delta);
double sevryuk_bound(int n, double phi);
double bfk_bound(int n, double c);

struct BoundsReport {
  int n = 0;  ///< walls
  int m = 0;  ///< ambient dimension of the input cone
  double lambda_min = 0;
  double d = 0;
  double delta = 0;
  double psi = 0;
  double charge_SQ = 0;
  double charge_phi = 0;
  double bfk_C = 0;
  double bound_main = 0;
  double bound_dd = 0;
  double bound_sevryuk = 0;
  double bound_bfk = 0;
  std::optional<std::int64_t> bound_wedge;
  std::optional<std::int64_t> bound_tridiagonal;
  bool tridiagonal_applicable = false;
  double delta_certified_lower = 0;
  double bfk_C_certified_lower = 0;
};

BoundsReport bounds_report(const ConeSpec& cone, const SearchOptions& options = {});

}  // namespace conebill
