#pragma once
// Minimization of max-type functions over the unit sphere (optionally restricted to a cone).

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace conebill::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// f(y) = max_k f_k(y) on the unit sphere; each piece supplies a gradient.
class MaxObjective {
 public:
  virtual ~MaxObjective() = default;

  virtual double value(const VectorXd& y) const = 0;
  /// Piece values and ambient gradients (columns of `grads`).
  virtual void pieces(const VectorXd& y, VectorXd& values, MatrixXd& grads) const = 0;
  /// Maps an arbitrary nonzero vector back onto the search domain.
  virtual VectorXd retract(const VectorXd& y) const { return y.normalized(); }
  /// Grid points outside the domain are skipped.
  virtual bool admissible(const VectorXd&) const { return true; }
};

struct LocalMinimum {
  VectorXd y;
  double value = 0;
  int iterations = 0;
};

/// Projected descent with prox-linear steps; the step is halved (quartered) until the
/// actual decrease reaches a tenth of the model decrease.
LocalMinimum descend(const MaxObjective& f, VectorXd start, int max_iterations);

/// Simplex weights w minimizing 0.5 * step * |G w|^2 - values^T w (dual of the prox-linear step).
VectorXd prox_linear_weights(const MatrixXd& g, const VectorXd& values, double step);
/// Minimum-norm point of the convex hull of the columns of g.
VectorXd min_norm_in_hull(const MatrixXd& g);

/// Deterministic quasi-uniform directions on S^{dim-1} (Halton points through Box-Muller).
std::vector<VectorXd> low_discrepancy_directions(Eigen::Index dim, int count);

/// Visits a dense grid on S^1 (dim 2) or S^2 (dim 3, cube map). Roughly `points` visits.
void for_each_grid_point(Eigen::Index dim, long points, const std::function<void(const VectorXd&)>& visit);

struct SearchOutcome {
  LocalMinimum best;
  int starts_used = 0;
  bool grid_used = false;
};

/// Multistart descent from `starts` plus optional dense-grid polish (dim <= 3).
SearchOutcome multistart_minimize(const MaxObjective& f, const std::vector<VectorXd>& starts, int iterations,
                                  bool grid_refine, long grid_points);

}  // namespace conebill::detail
