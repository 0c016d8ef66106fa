#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "egolink/netcore.hpp"

namespace egolink {

// A symmetric matrix observed on a symmetric 0/1 mask. Unobserved entries are
// stored as 0.
class MaskedMatrix {
 public:
  MaskedMatrix(Matrix entries, Matrix observed);

  // Observed iff the row or the column belongs to a sampled node.
  static MaskedMatrix egocentric(const EgoSample& s);
  // Each off-diagonal pair is observed independently with probability rho;
  // the diagonal is unobserved.
  static MaskedMatrix iid(const AdjacencyMatrix& a, double rho, Rng& rng);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  const Matrix& observed() const { return observed_; }
  std::int64_t observed_count() const;
  double observed_fraction() const;

  // Pairs i < j that are not observed.
  std::vector<std::pair<Index, Index>> unobserved_pairs() const;

 private:
  Matrix entries_;
  Matrix observed_;
};

// CUR plug-in A_in^T A_11^+ A_in. Throws DegenerateSample if A_11 is all zero.
ScoreMatrix cur_estimate(const EgoSample& s, double pinv_rel_tol = 1e-10);

// Universal singular value thresholding: zero-fill, keep the singular values
// of the filled matrix above threshold_mult * sqrt(N * p^), divide by the
// observed fraction p^ and clip to [0, 1]. Throws InvalidArgument on an empty
// mask.
ScoreMatrix usvt_estimate(const MaskedMatrix& m, double threshold_mult = 2.02);

struct McOptions {
  std::optional<double> lambda;  // default sqrt(N)
  double tol = 1e-4;
  Index max_iter = 200;
};

struct McResult {
  ScoreMatrix scores;
  bool converged = false;
  Index iterations = 0;
  // Objective lambda * ||X||_* + 1/2 ||Omega(X - A)||_F^2 after each iteration.
  std::vector<double> objective;
};

// Nuclear-norm regularized completion by soft-impute: repeatedly impute the
// unobserved entries from the current iterate and soft-threshold the
// singular values by lambda. Stops when ||X_k+1 - X_k||_F / ||X_k||_F < tol.
// When max_iter is reached first, the last (lowest-objective) iterate is
// returned with converged = false.
McResult mc_nuclear_estimate(const MaskedMatrix& m, const McOptions& opts = {});

// Neighborhood smoothing with A_in^T A_in standing in for A^2.
//
// The dissimilarity of nodes i and i' is max_{k != i, i'} |S_ik - S_i'k| / N
// with S = A_in^T A_in. Node i averages the observed rows of the sampled
// nodes whose dissimilarity to i falls within the h-th lower quantile,
// h = bandwidth_mult * sqrt(log N / N). The two directed smoothings are
// averaged. Throws InvalidArgument if n < 2.
ScoreMatrix ns_estimate(const EgoSample& s, double bandwidth_mult = 1.0);

}  // namespace egolink
