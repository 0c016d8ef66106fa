#include "egolink/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "egolink/errors.hpp"
#include "egolink/linalg.hpp"
#include "egolink/metrics.hpp"

namespace egolink {

namespace {

// Rank-r embedding from the thin SVD of A_in.
//
// With P~_in = U_r D_r V_r^T and W = V_r restricted to the sampled nodes,
// P~_11 = U_r K for K = D_r W^T. U_r has orthonormal columns, so
// P~_11^+ = K^+ U_r^T and U_r^T X^ U_r = 1/2 (U_r^T K^+ + (U_r^T K^+)^T),
// which keeps every step at size r x n.
Embedding embedding_from_svd(const SvdTriple& svd, const std::vector<Index>& indices,
                             Index r, double rel_tol) {
  const SvdTriple lead = svd.leading(r);
  const auto n = static_cast<Index>(indices.size());

  Matrix k(r, n);
  for (Index c = 0; c < n; ++c) k.col(c) = lead.d.cwiseProduct(lead.v.row(indices[c]).transpose());

  const double scale = lead.d(0);
  if (!(scale > 0.0) || k.norm() <= 1e-12 * scale)
    throw DegenerateSample("se_estimate: in-sample block of the rank-r fit vanishes");

  const Matrix k_pinv = pseudo_inverse(k, rel_tol);  // n x r
  const Matrix h = lead.u.transpose() * k_pinv;      // r x r
  const Matrix middle = symmetrized(h);

  Embedding e;
  e.positions = lead.v.transpose();
  e.form = symmetrized(lead.d.asDiagonal() * middle * lead.d.asDiagonal());
  return e;
}

Index checked_rank(const EgoSample& s, const SeConfig& cfg) {
  if (!cfg.rank) throw InvalidArgument("se_estimate: an explicit rank is required");
  const Index r = *cfg.rank;
  if (r < 1 || r > s.n_sampled())
    throw InvalidArgument("se_estimate: rank must satisfy 1 <= r <= n");
  return r;
}

std::vector<Index> rank_grid(const EgoSample& s, const SeConfig& cfg) {
  const Index n = s.n_sampled();
  std::vector<Index> grid = cfg.cv_rank_grid;
  if (grid.empty()) {
    const Index top = std::min<Index>(n - 1, 20);
    for (Index r = 1; r <= top; ++r) grid.push_back(r);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (Index r : grid)
    if (r < 1 || r >= n)
      throw InvalidArgument("select_rank: candidate ranks must satisfy 1 <= r < n");
  return grid;
}

}  // namespace

ScoreMatrix Embedding::scores() const {
  return ScoreMatrix(positions.transpose() * form * positions);
}

Embedding extract_embedding(const EgoSample& s, const SeConfig& cfg) {
  const Index r = checked_rank(s, cfg);
  return embedding_from_svd(thin_svd(s.row_block()), s.indices(), r, cfg.pinv_rel_tol);
}

ScoreMatrix se_estimate(const EgoSample& s, const SeConfig& cfg) {
  return extract_embedding(s, cfg).scores();
}

RankSelection select_rank_detailed(const EgoSample& s, const SeConfig& cfg, Rng& rng) {
  const Index n = s.n_sampled();
  if (n < 3) throw InvalidArgument("select_rank: need at least 3 sampled rows");
  if (cfg.cv_holdout_rows < 1)
    throw InvalidArgument("select_rank: holdout count must be positive");

  RankSelection out;
  out.grid = rank_grid(s, cfg);
  const std::size_t n_grid = out.grid.size();

  // Held-out rows: the first T slots of a partial Fisher-Yates shuffle.
  const Index holdouts = std::min(cfg.cv_holdout_rows, n);
  std::vector<Index> positions(static_cast<std::size_t>(n));
  std::iota(positions.begin(), positions.end(), Index{0});
  for (Index k = 0; k < holdouts; ++k) {
    const auto j = k + static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(n - k)));
    std::swap(positions[k], positions[j]);
  }

  const std::vector<Index> targets = s.out_of_sample_nodes();
  std::vector<double> sums(n_grid, 0.0);
  std::vector<double> labels(targets.size());
  std::vector<double> predicted(targets.size());

  for (Index h = 0; h < holdouts; ++h) {
    const Index pos = positions[h];
    const Index node = s.indices()[pos];
    for (std::size_t t = 0; t < targets.size(); ++t) labels[t] = s.row_block()(pos, targets[t]);
    if (labels.empty()) continue;
    const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
    if (*lo == *hi) continue;  // AUC undefined for this row

    const EgoSample reduced = s.without_row(pos);
    const SvdTriple svd = thin_svd(reduced.row_block());
    for (std::size_t g = 0; g < n_grid; ++g) {
      double auc = 0.5;
      try {
        const Embedding e = embedding_from_svd(svd, reduced.indices(), out.grid[g], cfg.pinv_rel_tol);
        const Vector left = e.form * e.positions.col(node);
        for (std::size_t t = 0; t < targets.size(); ++t)
          predicted[t] = left.dot(e.positions.col(targets[t]));
        auc = auc_from_values(labels, predicted, TieRule::half);
      } catch (const DegenerateSample&) {
        // A vanished fit predicts nothing: scored as constant scores.
      }
      sums[g] += auc;
      ++out.fits;
    }
    ++out.holdouts_used;
  }

  if (out.holdouts_used == 0)
    throw DegenerateCv("select_rank: no held-out row has both linked and unlinked targets");

  out.mean_auc.resize(n_grid);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < n_grid; ++g) {
    out.mean_auc[g] = sums[g] / static_cast<double>(out.holdouts_used);
    // Differences at rounding level are ties; the smaller rank wins.
    if (out.mean_auc[g] > best + 1e-12) {
      best = out.mean_auc[g];
      out.rank = out.grid[g];
    }
  }
  return out;
}

Matrix clamp_to_unit(const ScoreMatrix& scores) {
  return scores.entries().cwiseMax(0.0).cwiseMin(1.0);
}

}  // namespace egolink
