#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "egolink/netcore.hpp"

namespace egolink {

// How AUC scores a positive/negative couple whose scores are equal.
enum class TieRule {
  half,  // Mann-Whitney convention: ties count 1/2
  zero,  // strict indicator: ties count 0
};

// Counts over all couples (x, y) of items with truth[x] > truth[y].
struct ConcordanceCounts {
  std::int64_t ordered = 0;      // couples with truth[x] > truth[y]
  std::int64_t concordant = 0;   // ... and score[x] > score[y]
  std::int64_t score_ties = 0;   // ... and score[x] == score[y]
};

// O(M log M) via sorting on truth and a Fenwick tree over score ranks.
// Throws InvalidArgument on length mismatch or NaN.
ConcordanceCounts concordance(std::span<const double> truth, std::span<const double> scores);

// Fraction of ordered couples ranked correctly. For 0/1 truth this is the
// ROC AUC. Throws UndefinedMetric if no couple is ordered.
double auc_from_values(std::span<const double> truth, std::span<const double> scores,
                       TieRule ties = TieRule::half);

// 2 * concordant / ordered - 1, strict on both truth and scores.
// Throws UndefinedMetric if every truth value is tied.
double kendall_tau_from_values(std::span<const double> truth,
                               std::span<const double> scores);

// Predictive AUC over unordered pairs i < j with i, j both outside `sampled`.
double predictive_auc(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                      std::span<const Index> sampled, TieRule ties = TieRule::half);

// Predictive Kendall's tau over the same pairs, against the true probabilities.
double predictive_kendall_tau(const ScoreMatrix& scores, const ProbabilityMatrix& p,
                              std::span<const Index> sampled);

// Same metrics over an explicit list of evaluation pairs.
double auc_over_pairs(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                      std::span<const std::pair<Index, Index>> pairs,
                      TieRule ties = TieRule::half);
double kendall_tau_over_pairs(const ScoreMatrix& scores, const ProbabilityMatrix& p,
                              std::span<const std::pair<Index, Index>> pairs);

struct EvalResult {
  std::optional<double> auc;
  std::optional<double> kendall_tau;
  std::int64_t n_pairs = 0;
  std::int64_t n_positive = 0;
};

// Both metrics over `pairs`; a metric is absent where it is undefined. Tau is
// only computed when p is given.
EvalResult evaluate_pairs(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                          const ProbabilityMatrix* p,
                          std::span<const std::pair<Index, Index>> pairs);

// evaluate_pairs over the pairs with neither endpoint in `sampled`.
EvalResult evaluate(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                    const ProbabilityMatrix* p, std::span<const Index> sampled);

std::vector<std::pair<Index, Index>> unobserved_pair_list(Index n_total,
                                                          std::span<const Index> sampled);

}  // namespace egolink
