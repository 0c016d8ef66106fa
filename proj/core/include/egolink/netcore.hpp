#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "egolink/random.hpp"

namespace egolink {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric binary N x N matrix with zero diagonal.
class AdjacencyMatrix {
 public:
  // Throws InvalidArgument unless entries are square, symmetric and 0/1.
  // Diagonal entries are dropped (set to 0).
  explicit AdjacencyMatrix(Matrix entries);

  // Builds from undirected edges over nodes [0, n). Duplicates, reversed
  // duplicates and self-loops are absorbed.
  static AdjacencyMatrix from_edges(Index n,
                                    std::span<const std::pair<Index, Index>> edges);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

  std::int64_t edge_count() const;
  double average_degree() const;
  bool empty() const { return edge_count() == 0; }

 private:
  Matrix entries_;
};

// Symmetric N x N matrix of edge probabilities in [0, 1], zero diagonal.
class ProbabilityMatrix {
 public:
  explicit ProbabilityMatrix(Matrix entries);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

// Symmetric N x N link scores. Construction symmetrizes as (X + X^T) / 2.
// Entries are only meaningful through their ordering.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(Matrix entries);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(Index i, Index j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

// The rows of the adjacency matrix observed under egocentric sampling.
//
// indices() lists the sampled nodes in sampling order; row k of row_block()
// is the full row of node indices()[k]. Blocks follow the usual partition:
// A_11 is row_block() restricted to the sampled columns, A_12 the rest, and
// A_22 (pairs of unsampled nodes) is unobserved.
//
// Row entries are normally 0/1, but real-valued rows are accepted so that
// noiseless probability rows can be fed through the same estimators.
class EgoSample {
 public:
  // Throws InvalidArgument on out-of-range or repeated indices, a row block of
  // the wrong shape, non-finite entries, or an asymmetric A_11.
  EgoSample(Index n_total, std::vector<Index> indices, Matrix row_block);

  // Copies the rows of `full` (N x N) listed in `indices`.
  static EgoSample from_matrix(const Matrix& full, std::vector<Index> indices);

  Index n_total() const { return n_total_; }
  Index n_sampled() const { return static_cast<Index>(indices_.size()); }
  double sampling_rate() const {
    return static_cast<double>(n_sampled()) / static_cast<double>(n_total_);
  }

  const std::vector<Index>& indices() const { return indices_; }
  const Matrix& row_block() const { return row_block_; }

  // A_11: n x n, columns ordered like indices().
  Matrix in_sample_block() const;

  bool is_sampled(Index node) const { return position_[node] >= 0; }
  // Position of node in indices(), or -1.
  Index position_of(Index node) const { return position_[node]; }
  // Unsampled nodes in increasing order.
  std::vector<Index> out_of_sample_nodes() const;

  // The sample with the row at `position` removed (I' = I \ {indices()[position]}).
  EgoSample without_row(Index position) const;

 private:
  Index n_total_;
  std::vector<Index> indices_;
  Matrix row_block_;
  std::vector<Index> position_;
};

// Draws n distinct nodes uniformly without replacement and copies their rows.
// Throws InvalidArgument unless 1 <= n <= N.
EgoSample sample_ego(const AdjacencyMatrix& a, Index n, Rng& rng);

// ||A||_F^2 / ||A||_2^2. Throws UndefinedValue for the zero matrix.
double numerical_rank(const AdjacencyMatrix& a);
double numerical_rank(const Matrix& m);

// Forward range over unordered pairs (i, j), i < j, with neither endpoint
// sampled. Yields C(N - n, 2) pairs in lexicographic order.
class UnobservedPairs {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = std::pair<Index, Index>;
    using difference_type = std::ptrdiff_t;
    using pointer = const value_type*;
    using reference = value_type;

    iterator() = default;
    iterator(const std::vector<Index>* nodes, std::size_t a, std::size_t b)
        : nodes_(nodes), a_(a), b_(b) {}

    value_type operator*() const { return {(*nodes_)[a_], (*nodes_)[b_]}; }
    iterator& operator++() {
      if (++b_ >= nodes_->size()) {
        ++a_;
        b_ = a_ + 1;
        if (b_ >= nodes_->size()) a_ = b_ = nodes_->size();
      }
      return *this;
    }
    iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    bool operator==(const iterator& other) const {
      return a_ == other.a_ && b_ == other.b_;
    }

   private:
    const std::vector<Index>* nodes_ = nullptr;
    std::size_t a_ = 0;
    std::size_t b_ = 0;
  };

  explicit UnobservedPairs(std::vector<Index> nodes) : nodes_(std::move(nodes)) {}

  iterator begin() const {
    if (nodes_.size() < 2) return end();
    return iterator(&nodes_, 0, 1);
  }
  iterator end() const { return iterator(&nodes_, nodes_.size(), nodes_.size()); }

  std::int64_t size() const {
    const auto m = static_cast<std::int64_t>(nodes_.size());
    return m * (m - 1) / 2;
  }
  const std::vector<Index>& nodes() const { return nodes_; }

 private:
  std::vector<Index> nodes_;
};

UnobservedPairs unobserved_pairs(const EgoSample& s);

// Out-of-sample node list for an arbitrary sampled index set.
std::vector<Index> complement_nodes(Index n_total, std::span<const Index> sampled);

}  // namespace egolink
