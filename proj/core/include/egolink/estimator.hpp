#pragma once

#include <optional>
#include <vector>

#include "egolink/netcore.hpp"

namespace egolink {

// Configuration of the subspace estimator.
struct SeConfig {
  // Explicit rank r, or empty to select it by row resampling.
  std::optional<Index> rank;
  // Held-out rows used by rank selection; the effective count is min(T, n).
  Index cv_holdout_rows = 30;
  // Candidate ranks; empty means 1..min(n - 1, 20).
  std::vector<Index> cv_rank_grid;
  double pinv_rel_tol = 1e-10;

  static SeConfig with_rank(Index r) {
    SeConfig cfg;
    cfg.rank = r;
    return cfg;
  }
};

// Low-rank factorization scores = positions^T * form * positions.
struct Embedding {
  Matrix positions;  // r x N, node coordinates as columns
  Matrix form;       // r x r symmetric

  Index rank() const { return form.rows(); }
  ScoreMatrix scores() const;
};

// Subspace estimate of the probability matrix from the sampled rows:
//
//   P~_in = best rank-r approximation of A_in
//   P^    = 1/2 * P~_in^T (P~_11^+ + (P~_11^T)^+) P~_in
//
// where P~_11 holds the in-sample columns of P~_in. The result has rank <= r.
// Throws InvalidArgument when the rank is missing or outside [1, n] and
// DegenerateSample when P~_11 vanishes.
ScoreMatrix se_estimate(const EgoSample& s, const SeConfig& cfg);

// The factorization behind se_estimate: positions are V_r^T and the form is
// D_r U_r^T X^ U_r D_r with X^ = 1/2 (P~_11^+ + P~_11^T+).
Embedding extract_embedding(const EgoSample& s, const SeConfig& cfg);

struct RankSelection {
  Index rank = 0;
  std::vector<Index> grid;       // candidates in increasing order
  std::vector<double> mean_auc;  // aligned with grid
  Index holdouts_used = 0;       // held-out rows with a defined AUC
  Index fits = 0;                // rank-specific fits performed
};

// Chooses r by deleting random sampled rows, refitting on the remaining rows
// and scoring each deleted row against its out-of-sample entries. Returns
// the candidate with the highest mean AUC; ties go to the smallest rank.
//
// Throws InvalidArgument if n < 3 or a candidate is outside [1, n), and
// DegenerateCv if no held-out row has both positive and negative entries.
RankSelection select_rank_detailed(const EgoSample& s, const SeConfig& cfg, Rng& rng);

inline Index select_rank(const EgoSample& s, const SeConfig& cfg, Rng& rng) {
  return select_rank_detailed(s, cfg, rng).rank;
}

// Score clamped into [0, 1] for callers that want probabilities.
Matrix clamp_to_unit(const ScoreMatrix& scores);

}  // namespace egolink
