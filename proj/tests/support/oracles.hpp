#pragma once

// Independent reference implementations used only by the tests. Each one
// takes a different route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "egolink/netcore.hpp"
#include "egolink/random.hpp"

namespace egolink::oracle {

// Best rank-r approximation from the eigendecomposition of m^T m:
// m * V_r V_r^T with V_r the top-r eigenvectors.
inline Matrix rank_r_via_gram(const Matrix& m, Index r) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.transpose() * m);
  const Index c = m.cols();
  const Matrix v = eig.eigenvectors().rightCols(r);  // eigenvalues ascend
  (void)c;
  return m * v * v.transpose();
}

// Singular values from the eigenvalues of m^T m (descending).
inline Vector singular_values_via_gram(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.transpose() * m);
  Vector ev = eig.eigenvalues().reverse();
  return ev.cwiseMax(0.0).cwiseSqrt();
}

// O(M^2) AUC over every ordered couple of (positive, negative) pairs.
// tie_credit is 0.5 for the Mann-Whitney convention, 0 for the strict one.
inline double brute_auc(const Matrix& scores, const Matrix& a,
                        const std::vector<std::pair<Index, Index>>& pairs,
                        double tie_credit) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [i, j] : pairs)
    for (const auto& [k, l] : pairs) {
      if (!(a(i, j) == 1.0 && a(k, l) == 0.0)) continue;
      den += 1.0;
      if (scores(i, j) > scores(k, l)) num += 1.0;
      else if (scores(i, j) == scores(k, l)) num += tie_credit;
    }
  return num / den;
}

inline double brute_tau(const Matrix& scores, const Matrix& p,
                        const std::vector<std::pair<Index, Index>>& pairs) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [i, j] : pairs)
    for (const auto& [k, l] : pairs) {
      if (!(p(i, j) > p(k, l))) continue;
      den += 1.0;
      if (scores(i, j) > scores(k, l)) num += 1.0;
    }
  return 2.0 * num / den - 1.0;
}

inline std::vector<std::pair<Index, Index>> brute_unobserved_pairs(
    Index n_total, const std::vector<Index>& sampled) {
  std::vector<std::pair<Index, Index>> out;
  auto in = [&](Index v) { return std::find(sampled.begin(), sampled.end(), v) != sampled.end(); };
  for (Index i = 0; i < n_total; ++i)
    for (Index j = 0; j < n_total; ++j)
      if (i < j && !in(i) && !in(j)) out.emplace_back(i, j);
  return out;
}

// Nuclear-norm objective lambda ||X||_* + 1/2 ||mask .* (X - a)||_F^2.
inline double nuclear_objective(const Matrix& x, const Matrix& a, const Matrix& mask,
                                double lambda) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return lambda * svd.singularValues().sum() +
         0.5 * mask.cwiseProduct(x - a).squaredNorm();
}

// Accelerated proximal gradient (FISTA) on the same objective, using a
// general two-sided Jacobi SVD for the proximal step.
inline Matrix fista_nuclear(const Matrix& a, const Matrix& mask, double lambda,
                            double tol = 1e-12, int max_iter = 200000) {
  const double step = 1.0;  // the smooth part has Lipschitz constant 1
  Matrix x = Matrix::Zero(a.rows(), a.cols());
  Matrix y = x;
  double t = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix g = mask.cwiseProduct(y - a);
    Eigen::JacobiSVD<Matrix> svd(y - step * g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vector s = (svd.singularValues().array() - step * lambda).max(0.0).matrix();
    Matrix next = svd.matrixU().leftCols(s.size()) * s.asDiagonal() *
                  svd.matrixV().leftCols(s.size()).transpose();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - x);
    const double change = (next - x).norm();
    x = std::move(next);
    t = t_next;
    if (change < tol) break;
  }
  return x;
}

// Textbook neighborhood smoothing on a fully observed adjacency matrix,
// written with plain loops over A^2.
inline Matrix standard_neighborhood_smoothing(const Matrix& a, double c = 1.0) {
  const Index n = a.rows();
  const Matrix sq = a * a / static_cast<double>(n);
  const double h = c * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
  Matrix dist = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double best = 0.0;
      for (Index k = 0; k < n; ++k)
        if (k != i && k != j) best = std::max(best, std::abs(sq(i, k) - sq(j, k)));
      dist(i, j) = best;
    }
  Matrix smooth(n, n);
  for (Index i = 0; i < n; ++i) {
    std::vector<double> d;
    for (Index j = 0; j < n; ++j)
      if (j != i) d.push_back(dist(i, j));
    std::sort(d.begin(), d.end());
    const auto m = static_cast<double>(d.size());
    auto idx = static_cast<std::ptrdiff_t>(std::ceil(h * m)) - 1;
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(d.size()) - 1);
    const double q = d[static_cast<std::size_t>(idx)];
    Vector acc = Vector::Zero(n);
    double count = 0.0;
    for (Index j = 0; j < n; ++j)
      if (j != i && dist(i, j) <= q) {
        acc += a.row(j).transpose();
        count += 1.0;
      }
    smooth.row(i) = (acc / count).transpose();
  }
  return 0.5 * (smooth + smooth.transpose());
}

inline Matrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Matrix random_adjacency_entries(Index n, double p, Rng& rng) {
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i)
      if (uniform01(rng) < p) a(i, j) = a(j, i) = 1.0;
  return a;
}

inline Index exact_rank(const Matrix& m) {
  Eigen::FullPivLU<Matrix> lu(m);
  return lu.rank();
}

}  // namespace egolink::oracle
