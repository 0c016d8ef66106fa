#pragma once

#include "egolink/netcore.hpp"

namespace egolink {

// m ~= u * diag(d) * v^T with r components.
//
// Columns of u and v are orthonormal and d is nonincreasing. Each pair of
// singular vectors is sign-normalized so that the largest-magnitude entry of
// the left vector is positive; ties go to the first such entry.
struct SvdTriple {
  Matrix u;
  Vector d;
  Matrix v;

  Index rank() const { return d.size(); }
  Matrix reconstruct() const;
  // The leading r components (r <= rank()).
  SvdTriple leading(Index r) const;
};

// Thin SVD with min(rows, cols) components.
SvdTriple thin_svd(const Matrix& m);

// Leading r singular triplets. Throws InvalidArgument unless
// 1 <= r <= min(rows, cols) and every entry is finite.
SvdTriple truncated_svd(const Matrix& m, Index r);

// Frobenius-optimal rank-r approximation of m.
Matrix best_rank_r(const Matrix& m, Index r);

// Moore-Penrose pseudo-inverse through the SVD. Singular values below
// rel_tol * sigma_max are treated as zero.
Matrix pseudo_inverse(const Matrix& m, double rel_tol = 1e-10);

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace egolink
