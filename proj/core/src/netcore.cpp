#include "egolink/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "egolink/errors.hpp"

namespace egolink {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidArgument(std::string(what) + ": matrix must be square and non-empty");
}

bool exactly_symmetric(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

}  // namespace

AdjacencyMatrix::AdjacencyMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "AdjacencyMatrix");
  entries_.diagonal().setZero();
  for (Index j = 0; j < entries_.cols(); ++j)
    for (Index i = 0; i < entries_.rows(); ++i) {
      const double v = entries_(i, j);
      if (v != 0.0 && v != 1.0)
        throw InvalidArgument("AdjacencyMatrix: entries must be 0 or 1");
    }
  if (!exactly_symmetric(entries_))
    throw InvalidArgument("AdjacencyMatrix: matrix must be symmetric");
}

AdjacencyMatrix AdjacencyMatrix::from_edges(
    Index n, std::span<const std::pair<Index, Index>> edges) {
  if (n <= 0) throw InvalidArgument("AdjacencyMatrix: node count must be positive");
  Matrix m = Matrix::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw InvalidArgument("AdjacencyMatrix: edge endpoint out of range");
    if (u == v) continue;
    m(u, v) = 1.0;
    m(v, u) = 1.0;
  }
  return AdjacencyMatrix(std::move(m));
}

std::int64_t AdjacencyMatrix::edge_count() const {
  return static_cast<std::int64_t>(std::llround(entries_.sum())) / 2;
}

double AdjacencyMatrix::average_degree() const {
  return 2.0 * static_cast<double>(edge_count()) / static_cast<double>(size());
}

ProbabilityMatrix::ProbabilityMatrix(Matrix entries) : entries_(std::move(entries)) {
  require_square(entries_, "ProbabilityMatrix");
  for (Index j = 0; j < entries_.cols(); ++j)
    for (Index i = 0; i < entries_.rows(); ++i) {
      const double v = entries_(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw InvalidArgument("ProbabilityMatrix: entries must lie in [0, 1]");
    }
  if (entries_.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw InvalidArgument("ProbabilityMatrix: diagonal must be zero");
  if (!exactly_symmetric(entries_))
    throw InvalidArgument("ProbabilityMatrix: matrix must be symmetric");
}

ScoreMatrix::ScoreMatrix(Matrix entries) {
  require_square(entries, "ScoreMatrix");
  if (!entries.allFinite()) throw InvalidArgument("ScoreMatrix: non-finite entries");
  entries_ = 0.5 * (entries + entries.transpose());
}

EgoSample::EgoSample(Index n_total, std::vector<Index> indices, Matrix row_block)
    : n_total_(n_total), indices_(std::move(indices)), row_block_(std::move(row_block)) {
  if (n_total_ <= 0) throw InvalidArgument("EgoSample: N must be positive");
  if (indices_.empty()) throw InvalidArgument("EgoSample: at least one node must be sampled");
  if (row_block_.rows() != n_sampled() || row_block_.cols() != n_total_)
    throw InvalidArgument("EgoSample: row block must be n x N");
  if (!row_block_.allFinite()) throw InvalidArgument("EgoSample: non-finite entries");

  position_.assign(static_cast<std::size_t>(n_total_), -1);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const Index node = indices_[k];
    if (node < 0 || node >= n_total_)
      throw InvalidArgument("EgoSample: node index out of range");
    if (position_[node] >= 0) throw InvalidArgument("EgoSample: repeated node index");
    position_[node] = static_cast<Index>(k);
  }
  if (!exactly_symmetric(in_sample_block()))
    throw InvalidArgument("EgoSample: in-sample block A_11 must be symmetric");
}

EgoSample EgoSample::from_matrix(const Matrix& full, std::vector<Index> indices) {
  require_square(full, "EgoSample");
  Matrix rows(static_cast<Index>(indices.size()), full.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Index node = indices[k];
    if (node < 0 || node >= full.rows())
      throw InvalidArgument("EgoSample: node index out of range");
    rows.row(static_cast<Index>(k)) = full.row(node);
  }
  return EgoSample(full.rows(), std::move(indices), std::move(rows));
}

Matrix EgoSample::in_sample_block() const {
  const Index n = n_sampled();
  Matrix block(n, n);
  for (Index c = 0; c < n; ++c) block.col(c) = row_block_.col(indices_[c]);
  return block;
}

std::vector<Index> EgoSample::out_of_sample_nodes() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n_total_ - n_sampled()));
  for (Index v = 0; v < n_total_; ++v)
    if (position_[v] < 0) out.push_back(v);
  return out;
}

EgoSample EgoSample::without_row(Index position) const {
  if (position < 0 || position >= n_sampled())
    throw InvalidArgument("EgoSample: row position out of range");
  if (n_sampled() == 1) throw InvalidArgument("EgoSample: cannot remove the only row");
  std::vector<Index> kept;
  kept.reserve(indices_.size() - 1);
  Matrix rows(n_sampled() - 1, n_total_);
  Index out = 0;
  for (Index k = 0; k < n_sampled(); ++k) {
    if (k == position) continue;
    kept.push_back(indices_[k]);
    rows.row(out++) = row_block_.row(k);
  }
  return EgoSample(n_total_, std::move(kept), std::move(rows));
}

EgoSample sample_ego(const AdjacencyMatrix& a, Index n, Rng& rng) {
  const Index big_n = a.size();
  if (n < 1 || n > big_n)
    throw InvalidArgument("sample_ego: sample size must satisfy 1 <= n <= N");
  // Partial Fisher-Yates: the first n slots become a uniform n-subset.
  std::vector<Index> perm(static_cast<std::size_t>(big_n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index k = 0; k < n; ++k) {
    const auto j = k + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(big_n - k)));
    std::swap(perm[k], perm[j]);
  }
  perm.resize(static_cast<std::size_t>(n));
  return EgoSample::from_matrix(a.entries(), std::move(perm));
}

double numerical_rank(const Matrix& m) {
  if (!m.allFinite()) throw InvalidArgument("numerical_rank: non-finite entries");
  const double fro2 = m.squaredNorm();
  if (fro2 == 0.0) throw UndefinedValue("numerical_rank: zero matrix has no numerical rank");
  double spectral = 0.0;
  if (m.rows() == m.cols() && exactly_symmetric(m)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    spectral = eig.eigenvalues().cwiseAbs().maxCoeff();
  } else {
    Eigen::BDCSVD<Matrix> svd(m);
    spectral = svd.singularValues()(0);
  }
  return fro2 / (spectral * spectral);
}

double numerical_rank(const AdjacencyMatrix& a) { return numerical_rank(a.entries()); }

std::vector<Index> complement_nodes(Index n_total, std::span<const Index> sampled) {
  std::vector<char> in(static_cast<std::size_t>(n_total), 0);
  for (Index v : sampled) {
    if (v < 0 || v >= n_total) throw InvalidArgument("index set: node out of range");
    in[v] = 1;
  }
  std::vector<Index> out;
  for (Index v = 0; v < n_total; ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

UnobservedPairs unobserved_pairs(const EgoSample& s) {
  return UnobservedPairs(s.out_of_sample_nodes());
}

}  // namespace egolink
