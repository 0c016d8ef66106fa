#include "egolink/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "egolink/errors.hpp"

namespace egolink {

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::distance: return "distance";
    case ModelFamily::product: return "product";
    case ModelFamily::sbm: return "sbm";
  }
  return "unknown";
}

ModelFamily parse_family(std::string_view name) {
  if (name == "distance") return ModelFamily::distance;
  if (name == "product") return ModelFamily::product;
  if (name == "sbm") return ModelFamily::sbm;
  throw InvalidArgument("unknown model family '" + std::string(name) + "'");
}

namespace {

Matrix gaussian_positions(Index n_nodes, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(kLatentDimension, n_nodes);
  for (Index i = 0; i < n_nodes; ++i)
    for (Index d = 0; d < kLatentDimension; ++d) x(d, i) = normal(rng);
  return x;
}

// Beta(a, 1) has CDF t^a, so U^(1/a) is an exact draw; a = 0.5 gives U^2.
Matrix beta_positions(Index n_nodes, Rng& rng) {
  Matrix x(kLatentDimension, n_nodes);
  for (Index i = 0; i < n_nodes; ++i)
    for (Index d = 0; d < kLatentDimension; ++d) {
      const double u = uniform01(rng);
      x(d, i) = u * u;
    }
  return x;
}

}  // namespace

Matrix generate_kernel(ModelFamily family, Index n_nodes, Rng& rng, std::vector<int>* blocks) {
  if (n_nodes < 2) throw InvalidArgument("generate_kernel: need at least 2 nodes");
  if (blocks) blocks->clear();
  Matrix f(n_nodes, n_nodes);
  switch (family) {
    case ModelFamily::distance: {
      const Matrix x = gaussian_positions(n_nodes, rng);
      for (Index j = 0; j < n_nodes; ++j)
        for (Index i = 0; i <= j; ++i) {
          const double dist = (x.col(i) - x.col(j)).norm();
          f(i, j) = f(j, i) = 1.0 / (1.0 + std::exp(dist));
        }
      break;
    }
    case ModelFamily::product: {
      const Matrix x = beta_positions(n_nodes, rng);
      f = x.transpose() * x;
      f = 0.5 * (f + f.transpose()).eval();
      break;
    }
    case ModelFamily::sbm: {
      std::vector<int> label(static_cast<std::size_t>(n_nodes));
      for (auto& b : label) b = 1 + static_cast<int>(uniform_below(rng, kBlockCount));
      for (Index j = 0; j < n_nodes; ++j)
        for (Index i = 0; i <= j; ++i) {
          const int bi = label[i];
          f(i, j) = f(j, i) = 0.05 + (bi == label[j] ? (bi - 0.3) / 6.0 : 0.0);
        }
      if (blocks) *blocks = std::move(label);
      break;
    }
  }
  return f;
}

double expected_degree(const Matrix& kernel, double phi) {
  const Index n = kernel.rows();
  double total = 0.0;
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i) total += std::min(phi * kernel(i, j), 1.0);
  return 2.0 * total / static_cast<double>(n);
}

double calibrate_phi(const Matrix& kernel, double target_degree) {
  const Index n = kernel.rows();
  if (n < 2 || kernel.cols() != n) throw InvalidArgument("calibrate_phi: kernel must be square, N >= 2");
  if (!kernel.allFinite()) throw InvalidArgument("calibrate_phi: non-finite kernel");
  double max_f = 0.0;
  std::int64_t positive_pairs = 0;
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i) {
      const double v = kernel(i, j);
      if (v < 0.0 || v != kernel(j, i))
        throw InvalidArgument("calibrate_phi: kernel must be symmetric and nonnegative");
      if (v > 0.0) ++positive_pairs;
      max_f = std::max(max_f, v);
    }
  if (max_f == 0.0) throw InvalidArgument("calibrate_phi: kernel is all zero");
  if (!(target_degree > 0.0) || target_degree > static_cast<double>(n - 1))
    throw InvalidArgument("calibrate_phi: target degree must lie in (0, N - 1]");
  const double reachable = 2.0 * static_cast<double>(positive_pairs) / static_cast<double>(n);
  if (target_degree > reachable)
    throw InvalidArgument("calibrate_phi: target degree unreachable even with p_ij = 1");

  // expected_degree is continuous and nondecreasing in phi; it saturates once
  // phi * min positive f >= 1, so hi = 1 / min positive f brackets the root.
  double min_pos = max_f;
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i)
      if (kernel(i, j) > 0.0) min_pos = std::min(min_pos, kernel(i, j));
  double lo = 0.0;
  double hi = 1.0 / min_pos;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double deg = expected_degree(kernel, mid);
    if (std::abs(deg - target_degree) <= 1e-9 * std::max(1.0, target_degree)) return mid;
    (deg < target_degree ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

GeneratedModel generate_model(const ModelSpec& spec, Rng& rng) {
  if (spec.n_nodes < 2) throw InvalidArgument("generate_model: need at least 2 nodes");
  if (!(spec.target_degree > 0.0) || spec.target_degree > static_cast<double>(spec.n_nodes - 1))
    throw InvalidArgument("generate_model: target degree must lie in (0, N - 1]");
  std::vector<int> blocks;
  Matrix kernel = generate_kernel(spec.family, spec.n_nodes, rng, &blocks);
  const double phi = calibrate_phi(kernel, spec.target_degree);
  Matrix p = (phi * kernel).cwiseMin(1.0);
  p.diagonal().setZero();
  return GeneratedModel{std::move(kernel), phi, ProbabilityMatrix(std::move(p)), std::move(blocks)};
}

ProbabilityMatrix generate_probability(const ModelSpec& spec, Rng& rng) {
  return generate_model(spec, rng).probability;
}

AdjacencyMatrix sample_adjacency(const ProbabilityMatrix& p, Rng& rng) {
  const Index n = p.size();
  Matrix a = Matrix::Zero(n, n);
  for (Index j = 1; j < n; ++j)
    for (Index i = 0; i < j; ++i)
      if (uniform01(rng) < p(i, j)) a(i, j) = a(j, i) = 1.0;
  return AdjacencyMatrix(std::move(a));
}

}  // namespace egolink
