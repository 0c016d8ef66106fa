#include "egolink/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "egolink/errors.hpp"
#include "egolink/linalg.hpp"

namespace egolink {

namespace {

struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

SymmetricEigen eigen_symmetric(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw InvalidArgument("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

MaskedMatrix::MaskedMatrix(Matrix entries, Matrix observed)
    : entries_(std::move(entries)), observed_(std::move(observed)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw InvalidArgument("MaskedMatrix: entries must be square and non-empty");
  if (observed_.rows() != entries_.rows() || observed_.cols() != entries_.cols())
    throw InvalidArgument("MaskedMatrix: mask shape differs from entries");
  if (!entries_.allFinite()) throw InvalidArgument("MaskedMatrix: non-finite entries");
  for (Index j = 0; j < observed_.cols(); ++j)
    for (Index i = 0; i < observed_.rows(); ++i) {
      const double o = observed_(i, j);
      if (o != 0.0 && o != 1.0) throw InvalidArgument("MaskedMatrix: mask must be 0/1");
      if (o != observed_(j, i)) throw InvalidArgument("MaskedMatrix: mask must be symmetric");
    }
  entries_ = entries_.cwiseProduct(observed_);
  for (Index j = 0; j < entries_.cols(); ++j)
    for (Index i = j + 1; i < entries_.rows(); ++i)
      if (entries_(i, j) != entries_(j, i))
        throw InvalidArgument("MaskedMatrix: observed entries must be symmetric");
}

MaskedMatrix MaskedMatrix::egocentric(const EgoSample& s) {
  const Index n_total = s.n_total();
  Matrix entries = Matrix::Zero(n_total, n_total);
  Matrix mask = Matrix::Zero(n_total, n_total);
  for (Index k = 0; k < s.n_sampled(); ++k) {
    const Index node = s.indices()[k];
    entries.row(node) = s.row_block().row(k);
    entries.col(node) = s.row_block().row(k).transpose();
    mask.row(node).setOnes();
    mask.col(node).setOnes();
  }
  return MaskedMatrix(std::move(entries), std::move(mask));
}

MaskedMatrix MaskedMatrix::iid(const AdjacencyMatrix& a, double rho, Rng& rng) {
  if (!(rho > 0.0 && rho <= 1.0)) throw InvalidArgument("MaskedMatrix::iid: rho must lie in (0, 1]");
  const Index n_total = a.size();
  Matrix mask = Matrix::Zero(n_total, n_total);
  for (Index j = 1; j < n_total; ++j)
    for (Index i = 0; i < j; ++i)
      if (uniform01(rng) < rho) mask(i, j) = mask(j, i) = 1.0;
  return MaskedMatrix(a.entries(), std::move(mask));
}

std::int64_t MaskedMatrix::observed_count() const {
  return static_cast<std::int64_t>(std::llround(observed_.sum()));
}

double MaskedMatrix::observed_fraction() const {
  return static_cast<double>(observed_count()) / static_cast<double>(observed_.size());
}

std::vector<std::pair<Index, Index>> MaskedMatrix::unobserved_pairs() const {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < size(); ++i)
    for (Index j = i + 1; j < size(); ++j)
      if (observed_(i, j) == 0.0) pairs.emplace_back(i, j);
  return pairs;
}

ScoreMatrix cur_estimate(const EgoSample& s, double pinv_rel_tol) {
  const Matrix a11 = s.in_sample_block();
  if (a11.cwiseAbs().maxCoeff() == 0.0)
    throw DegenerateSample("cur_estimate: in-sample block A_11 is all zero");
  const Matrix& rows = s.row_block();
  return ScoreMatrix(rows.transpose() * (pseudo_inverse(a11, pinv_rel_tol) * rows));
}

ScoreMatrix usvt_estimate(const MaskedMatrix& m, double threshold_mult) {
  if (!(threshold_mult > 0.0)) throw InvalidArgument("usvt_estimate: threshold multiplier must be positive");
  const double p_hat = m.observed_fraction();
  if (p_hat == 0.0) throw InvalidArgument("usvt_estimate: no observed entries");
  const auto n_total = static_cast<double>(m.size());
  const double threshold = threshold_mult * std::sqrt(n_total * p_hat);

  // The filled matrix is symmetric, so its singular values are |eigenvalues|.
  const SymmetricEigen eig = eigen_symmetric(m.entries());
  Matrix kept = Matrix::Zero(m.size(), m.size());
  for (Index k = 0; k < eig.values.size(); ++k)
    if (std::abs(eig.values(k)) > threshold)
      kept.noalias() += eig.values(k) * eig.vectors.col(k) * eig.vectors.col(k).transpose();
  return ScoreMatrix((kept / p_hat).cwiseMax(0.0).cwiseMin(1.0));
}

McResult mc_nuclear_estimate(const MaskedMatrix& m, const McOptions& opts) {
  const Index n_total = m.size();
  const double lambda = opts.lambda.value_or(std::sqrt(static_cast<double>(n_total)));
  if (!(lambda > 0.0)) throw InvalidArgument("mc_nuclear_estimate: lambda must be positive");
  if (!(opts.tol > 0.0)) throw InvalidArgument("mc_nuclear_estimate: tol must be positive");
  if (opts.max_iter < 1) throw InvalidArgument("mc_nuclear_estimate: max_iter must be positive");

  const Matrix& observed = m.observed();
  const Matrix unobserved = Matrix::Ones(n_total, n_total) - observed;
  const Matrix& target = m.entries();

  Matrix x = Matrix::Zero(n_total, n_total);
  McResult result{ScoreMatrix(x), false, 0, {}};
  for (Index it = 0; it < opts.max_iter; ++it) {
    const Matrix filled = target + unobserved.cwiseProduct(x);
    const SymmetricEigen eig = eigen_symmetric(symmetrized(filled));

    Vector shrunk(eig.values.size());
    double nuclear = 0.0;
    for (Index k = 0; k < eig.values.size(); ++k) {
      const double v = eig.values(k);
      const double mag = std::max(std::abs(v) - lambda, 0.0);
      shrunk(k) = std::copysign(mag, v);
      nuclear += mag;
    }
    Matrix next = eig.vectors * shrunk.asDiagonal() * eig.vectors.transpose();
    next = symmetrized(next);

    const double residual = observed.cwiseProduct(next - target).squaredNorm();
    result.objective.push_back(lambda * nuclear + 0.5 * residual);
    result.iterations = it + 1;

    const double prev_norm = x.norm();
    const double change = (next - x).norm();
    x = std::move(next);
    if (change == 0.0 || (prev_norm > 0.0 && change / prev_norm < opts.tol)) {
      result.converged = true;
      break;
    }
  }
  result.scores = ScoreMatrix(x);
  return result;
}

ScoreMatrix ns_estimate(const EgoSample& s, double bandwidth_mult) {
  const Index n = s.n_sampled();
  const Index n_total = s.n_total();
  if (n < 2) throw InvalidArgument("ns_estimate: need at least 2 sampled rows");
  if (!(bandwidth_mult > 0.0)) throw InvalidArgument("ns_estimate: bandwidth multiplier must be positive");

  const Matrix& rows = s.row_block();
  const Matrix sim = (rows.transpose() * rows) / static_cast<double>(n_total);
  const double h = bandwidth_mult *
                   std::sqrt(std::log(static_cast<double>(n_total)) / static_cast<double>(n_total));

  const Vector global_mean = rows.colwise().mean().transpose();
  Matrix smoothed(n_total, n_total);
  std::vector<double> dist;
  std::vector<Index> cand;
  std::vector<double> sorted;
  for (Index i = 0; i < n_total; ++i) {
    dist.clear();
    cand.clear();
    for (Index k = 0; k < n; ++k) {
      const Index other = s.indices()[k];
      if (other == i) continue;
      Vector diff = (sim.col(i) - sim.col(other)).cwiseAbs();
      diff(i) = 0.0;
      diff(other) = 0.0;
      dist.push_back(diff.maxCoeff());
      cand.push_back(k);
    }
    if (cand.empty()) {
      smoothed.row(i) = global_mean.transpose();
      continue;
    }
    sorted = dist;
    std::sort(sorted.begin(), sorted.end());
    const auto m = static_cast<double>(sorted.size());
    const auto q_idx = std::clamp<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(std::ceil(h * m)) - 1, 0,
        static_cast<std::ptrdiff_t>(sorted.size()) - 1);
    const double q = sorted[static_cast<std::size_t>(q_idx)];

    Vector acc = Vector::Zero(n_total);
    Index count = 0;
    for (std::size_t c = 0; c < cand.size(); ++c)
      if (dist[c] <= q) {
        acc += rows.row(cand[c]).transpose();
        ++count;
      }
    if (count == 0) {
      smoothed.row(i) = global_mean.transpose();
    } else {
      smoothed.row(i) = (acc / static_cast<double>(count)).transpose();
    }
  }
  return ScoreMatrix(std::move(smoothed));
}

}  // namespace egolink
