#include "sphere_search.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numbers>

namespace conebill::detail {

namespace {

// Euclidean projection onto the probability simplex.
VectorXd project_to_simplex(const VectorXd& x) {
  const Eigen::Index k = x.size();
  std::vector<double> sorted(x.data(), x.data() + k);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0;
  double tau = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    cumulative += sorted[static_cast<std::size_t>(i)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[static_cast<std::size_t>(i)] - candidate > 0) tau = candidate;
  }
  return (x.array() - tau).max(0.0).matrix();
}

double radical_inverse(int base, long index) {
  double result = 0;
  double fraction = 1.0 / base;
  while (index > 0) {
    result += fraction * static_cast<double>(index % base);
    index /= base;
    fraction /= base;
  }
  return result;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

VectorXd min_norm_in_hull(const MatrixXd& g) { return g * prox_linear_weights(g, VectorXd::Zero(g.cols()), 1.0); }

namespace {

// Exact solve by support enumeration: on support T the KKT conditions are the bordered system
// [step K_TT, 1; 1^T, 0] [w_T; mu] = [values_T; 1] with w_T >= 0 and no improving index outside T.
bool prox_linear_weights_exact(const MatrixXd& gram, const VectorXd& values, VectorXd& weights) {
  const Eigen::Index k = gram.rows();
  const std::uint32_t all = (std::uint32_t{1} << k) - 1;
  std::vector<std::uint32_t> masks;
  masks.reserve(all);
  for (std::uint32_t mask = 1; mask <= all; ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
  Eigen::Index idx[32];
  for (std::uint32_t mask : masks) {
    Eigen::Index size = 0;
    for (Eigen::Index j = 0; j < k; ++j)
      if (mask & (std::uint32_t{1} << j)) idx[size++] = j;
    MatrixXd system(size + 1, size + 1);
    VectorXd rhs(size + 1);
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = 0; b < size; ++b) system(a, b) = gram(idx[a], idx[b]);
      system(a, size) = 1.0;
      system(size, a) = 1.0;
      rhs(a) = values(idx[a]);
    }
    system(size, size) = 0.0;
    rhs(size) = 1.0;
    Eigen::FullPivLU<MatrixXd> lu(system);
    if (!lu.isInvertible()) continue;
    const VectorXd sol = lu.solve(rhs);
    if (sol.head(size).minCoeff() < -1e-12) continue;
    VectorXd candidate = VectorXd::Zero(k);
    for (Eigen::Index a = 0; a < size; ++a) candidate(idx[a]) = std::max(sol(a), 0.0);
    const double mu = sol(size);
    // objective gradient gram w - values must be >= -mu off the support
    const VectorXd gradient = gram * candidate - values;
    bool optimal = true;
    for (Eigen::Index j = 0; j < k && optimal; ++j)
      if (!(mask & (std::uint32_t{1} << j)) && gradient(j) + mu < -1e-12 * (1.0 + std::abs(mu))) optimal = false;
    if (optimal) {
      weights = candidate / candidate.sum();
      return true;
    }
  }
  return false;
}

}  // namespace

VectorXd prox_linear_weights(const MatrixXd& g, const VectorXd& values, double step) {
  const Eigen::Index k = g.cols();
  if (k == 1) return VectorXd::Ones(1);
  const MatrixXd gram = step * (g.transpose() * g);
  const VectorXd offset = values.array() - values.maxCoeff();
  VectorXd weights = VectorXd::Zero(k);
  if (k <= 8 && prox_linear_weights_exact(gram, offset, weights)) return weights;

  // FISTA on 0.5 * step * |G w|^2 - values^T w over the simplex.
  const double lipschitz = std::max(gram.diagonal().sum(), 1e-300);
  weights.setZero();
  Eigen::Index top = 0;
  values.maxCoeff(&top);
  weights(top) = 1.0;
  VectorXd momentum = weights;
  double t = 1;
  for (int it = 0; it < 400; ++it) {
    const VectorXd next = project_to_simplex(momentum - (gram * momentum - offset) / lipschitz);
    const double t_next = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    const double change = (next - weights).lpNorm<Eigen::Infinity>();
    momentum = next + ((t - 1) / t_next) * (next - weights);
    weights = next;
    t = t_next;
    if (change < 1e-13) break;
  }
  return weights;
}

LocalMinimum descend(const MaxObjective& f, VectorXd start, int max_iterations) {
  LocalMinimum out;
  out.y = f.retract(start);
  out.value = f.value(out.y);

  // Prox-linear steps: d minimizes max_k (f_k + g_k . d) + |d|^2 / (2 step) on the tangent space.
  double step = 0.1;
  VectorXd values;
  MatrixXd grads;
  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    f.pieces(out.y, values, grads);
    const double top = values.maxCoeff();
    MatrixXd tangent = grads - out.y * (out.y.transpose() * grads);
    bool accepted = false;
    while (step > 1e-12) {
      const VectorXd w = prox_linear_weights(tangent, values, step);
      const VectorXd d = -step * (tangent * w);
      const double model = (values + tangent.transpose() * d).maxCoeff();
      const double predicted = top - model;
      if (!(predicted > 1e-15)) break;
      VectorXd trial = f.retract(out.y + d);
      const double trial_value = f.value(trial);
      if (out.value - trial_value >= 0.1 * predicted) {
        out.y = std::move(trial);
        out.value = trial_value;
        step = std::min(2 * step, 1.0);
        accepted = true;
        break;
      }
      step *= 0.25;
    }
    if (!accepted) break;
  }
  return out;
}

std::vector<VectorXd> low_discrepancy_directions(Eigen::Index dim, int count) {
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  const Eigen::Index pairs = (dim + 1) / 2;
  for (long index = 1; static_cast<long>(out.size()) < count; ++index) {
    VectorXd gauss(2 * pairs);
    for (Eigen::Index p = 0; p < pairs; ++p) {
      const double u1 = radical_inverse(kPrimes[(2 * p) % 20], index);
      const double u2 = radical_inverse(kPrimes[(2 * p + 1) % 20], index);
      const double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      gauss(2 * p) = r * std::cos(2 * std::numbers::pi * u2);
      gauss(2 * p + 1) = r * std::sin(2 * std::numbers::pi * u2);
    }
    VectorXd y = gauss.head(dim);
    const double norm = y.norm();
    if (norm > 1e-12) out.push_back(y / norm);
  }
  return out;
}

void for_each_grid_point(Eigen::Index dim, long points, const std::function<void(const VectorXd&)>& visit) {
  VectorXd y(dim);
  if (dim == 1) {
    y(0) = 1;
    visit(y);
    y(0) = -1;
    visit(y);
  } else if (dim == 2) {
    for (long k = 0; k < points; ++k) {
      const double angle = 2 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(points);
      y << std::cos(angle), std::sin(angle);
      visit(y);
    }
  } else if (dim == 3) {
    const long side = std::max(2L, static_cast<long>(std::ceil(std::sqrt(static_cast<double>(points) / 6.0))));
    for (int face = 0; face < 6; ++face) {
      const int axis = face / 2;
      const double sign = face % 2 == 0 ? 1.0 : -1.0;
      for (long a = 0; a < side; ++a) {
        for (long b = 0; b < side; ++b) {
          const double s = -1 + 2 * (static_cast<double>(a) + 0.5) / static_cast<double>(side);
          const double t = -1 + 2 * (static_cast<double>(b) + 0.5) / static_cast<double>(side);
          y(axis) = sign;
          y((axis + 1) % 3) = s;
          y((axis + 2) % 3) = t;
          visit(y.normalized());
        }
      }
    }
  }
}

SearchOutcome multistart_minimize(const MaxObjective& f, const std::vector<VectorXd>& starts, int iterations,
                                  bool grid_refine, long grid_points) {
  SearchOutcome outcome;
  bool have = false;
  for (const auto& start : starts) {
    LocalMinimum local = descend(f, start, iterations);
    ++outcome.starts_used;
    if (!have || local.value < outcome.best.value) {
      outcome.best = std::move(local);
      have = true;
    }
  }
  const Eigen::Index dim = starts.empty() ? 0 : starts.front().size();
  if (grid_refine && dim >= 2 && dim <= 3) {
    VectorXd best_point;
    double best_value = std::numeric_limits<double>::infinity();
    for_each_grid_point(dim, grid_points, [&](const VectorXd& y) {
      if (!f.admissible(y)) return;
      const double v = f.value(y);
      if (v < best_value) {
        best_value = v;
        best_point = y;
      }
    });
    if (best_point.size() > 0) {
      LocalMinimum polished = descend(f, best_point, iterations);
      if (polished.value < outcome.best.value - 1e-12) {
        outcome.best = std::move(polished);
        outcome.grid_used = true;
      }
    }
  }
  return outcome;
}

}  // namespace conebill::detail
