#include "egolink/linalg.hpp"

#include <algorithm>

#include <Eigen/SVD>

#include "egolink/errors.hpp"

namespace egolink {

namespace {

void require_finite(const Matrix& m, const char* op) {
  if (!m.allFinite()) throw InvalidArgument(std::string(op) + ": non-finite entries");
}

void normalize_signs(SvdTriple& t) {
  for (Index c = 0; c < t.u.cols(); ++c) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < t.u.rows(); ++i) {
      const double a = std::abs(t.u(i, c));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (t.u(arg, c) < 0.0) {
      t.u.col(c) *= -1.0;
      t.v.col(c) *= -1.0;
    }
  }
}

}  // namespace

Matrix SvdTriple::reconstruct() const {
  return u * d.asDiagonal() * v.transpose();
}

SvdTriple SvdTriple::leading(Index r) const {
  if (r < 0 || r > rank()) throw InvalidArgument("SvdTriple::leading: rank out of range");
  return SvdTriple{u.leftCols(r), d.head(r), v.leftCols(r)};
}

SvdTriple thin_svd(const Matrix& m) {
  require_finite(m, "thin_svd");
  if (m.size() == 0) throw InvalidArgument("thin_svd: empty matrix");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdTriple t{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  normalize_signs(t);
  return t;
}

SvdTriple truncated_svd(const Matrix& m, Index r) {
  if (r < 1 || r > std::min(m.rows(), m.cols()))
    throw InvalidArgument("truncated_svd: rank must satisfy 1 <= r <= min(rows, cols)");
  return thin_svd(m).leading(r);
}

Matrix best_rank_r(const Matrix& m, Index r) { return truncated_svd(m, r).reconstruct(); }

Matrix pseudo_inverse(const Matrix& m, double rel_tol) {
  if (!(rel_tol > 0.0)) throw InvalidArgument("pseudo_inverse: rel_tol must be positive");
  require_finite(m, "pseudo_inverse");
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  const SvdTriple t = thin_svd(m);
  const double cutoff = rel_tol * t.d(0);
  Vector inv = Vector::Zero(t.d.size());
  for (Index k = 0; k < t.d.size(); ++k)
    if (t.d(k) > cutoff) inv(k) = 1.0 / t.d(k);
  return t.v * inv.asDiagonal() * t.u.transpose();
}

}  // namespace egolink
