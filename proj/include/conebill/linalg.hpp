#pragma once
/**
 * @file linalg.hpp
 * @brief Small dense symmetric eigen-solver and helpers.
 *
 * Cyclic Jacobi rotations in a fixed (p, q) sweep order. Intended for the
 * small Gram matrices handled here (order <= 16); the cost per sweep is
 * O(n^3) and convergence is quadratic once the off-diagonal part is small.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace conebill {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct JacobiResult {
  VectorX<Scalar> eigenvalues;   ///< ascending
  MatrixX<Scalar> eigenvectors;  ///< column k pairs with eigenvalues(k)
  int sweeps = 0;
  bool converged = false;
};

/// Off-diagonal Frobenius norm of a square matrix.
template <typename Derived>
typename Derived::Scalar off_diagonal_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Scalar sum = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

/**
 * Diagonalizes a symmetric matrix with cyclic Jacobi rotations.
 *
 * Iterates until the off-diagonal Frobenius norm drops below
 * `tolerance * max(1, ||a||_F)` or `max_sweeps` is reached. Only the
 * upper triangle is trusted; the input is symmetrized first.
 */
template <typename Derived>
JacobiResult<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                    typename Derived::Scalar tolerance = 1e-13,
                                                    int max_sweeps = 64) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = input.rows();
  MatrixX<Scalar> a = (input + input.transpose()) / Scalar(2);
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar threshold = tolerance * std::max(Scalar(1), a.norm());

  JacobiResult<Scalar> result;
  while (result.sweeps < max_sweeps) {
    if (off_diagonal_norm(a) < threshold) {
      result.converged = true;
      break;
    }
    ++result.sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Rotation angle from the stable tangent formula.
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!result.converged && off_diagonal_norm(a) < threshold) result.converged = true;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  result.eigenvalues.resize(n);
  result.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    result.eigenvalues(k) = a(src, src);
    result.eigenvectors.col(k) = v.col(src);
  }
  return result;
}

/// Ascending eigenvalues of a symmetric matrix.
template <typename Derived>
VectorX<typename Derived::Scalar> symmetric_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  return jacobi_eigen(a).eigenvalues;
}

/// Smallest eigenvalue of a symmetric matrix.
template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return typename Derived::Scalar(0);
  return symmetric_eigenvalues(a)(0);
}

/// Informational check: a symmetric matrix with lambda_min <= 0 is not a valid Gram matrix.
template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& a) {
  return a.rows() > 0 && min_eigenvalue(a) > 0;
}

}  // namespace conebill
