#include "egolink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egolink/errors.hpp"

namespace egolink {

namespace {

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}

  void add(std::size_t pos) {  // 1-based
    for (; pos < tree_.size(); pos += pos & (~pos + 1)) ++tree_[pos];
  }
  std::int64_t prefix(std::size_t pos) const {  // sum over [1, pos]
    std::int64_t s = 0;
    for (; pos > 0; pos -= pos & (~pos + 1)) s += tree_[pos];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

struct PairValues {
  std::vector<double> truth;
  std::vector<double> scores;
};

PairValues gather(const Matrix& truth, const Matrix& scores,
                  std::span<const std::pair<Index, Index>> pairs) {
  if (truth.rows() != scores.rows())
    throw InvalidArgument("metrics: score and truth matrices differ in size");
  PairValues v;
  v.truth.reserve(pairs.size());
  v.scores.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= truth.rows() || j >= truth.rows())
      throw InvalidArgument("metrics: pair out of range");
    v.truth.push_back(truth(i, j));
    v.scores.push_back(scores(i, j));
  }
  return v;
}

}  // namespace

ConcordanceCounts concordance(std::span<const double> truth,
                              std::span<const double> scores) {
  if (truth.size() != scores.size())
    throw InvalidArgument("concordance: truth and scores differ in length");
  const std::size_t m = truth.size();
  for (std::size_t k = 0; k < m; ++k)
    if (std::isnan(truth[k]) || std::isnan(scores[k]))
      throw InvalidArgument("concordance: NaN value");

  // Dense 1-based ranks of the scores.
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> rank(m);
  for (std::size_t k = 0; k < m; ++k)
    rank[k] = static_cast<std::size_t>(
                  std::lower_bound(sorted.begin(), sorted.end(), scores[k]) - sorted.begin()) +
              1;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return truth[a] < truth[b]; });

  // Sweep truth groups upward; items already in the tree have strictly
  // smaller truth than the current group.
  ConcordanceCounts c;
  Fenwick tree(sorted.size());
  std::int64_t inserted = 0;
  std::size_t g = 0;
  while (g < m) {
    std::size_t end = g;
    while (end < m && truth[order[end]] == truth[order[g]]) ++end;
    for (std::size_t k = g; k < end; ++k) {
      const std::size_t r = rank[order[k]];
      const std::int64_t below = tree.prefix(r - 1);
      const std::int64_t upto = tree.prefix(r);
      c.ordered += inserted;
      c.concordant += below;
      c.score_ties += upto - below;
    }
    for (std::size_t k = g; k < end; ++k) tree.add(rank[order[k]]);
    inserted += static_cast<std::int64_t>(end - g);
    g = end;
  }
  return c;
}

double auc_from_values(std::span<const double> truth, std::span<const double> scores,
                       TieRule ties) {
  const ConcordanceCounts c = concordance(truth, scores);
  if (c.ordered == 0)
    throw UndefinedMetric("AUC undefined: need at least one positive and one negative pair");
  const double credit = static_cast<double>(c.concordant) +
                        (ties == TieRule::half ? 0.5 * static_cast<double>(c.score_ties) : 0.0);
  return credit / static_cast<double>(c.ordered);
}

double kendall_tau_from_values(std::span<const double> truth,
                               std::span<const double> scores) {
  const ConcordanceCounts c = concordance(truth, scores);
  if (c.ordered == 0)
    throw UndefinedMetric("Kendall's tau undefined: all probabilities are tied");
  return 2.0 * static_cast<double>(c.concordant) / static_cast<double>(c.ordered) - 1.0;
}

std::vector<std::pair<Index, Index>> unobserved_pair_list(Index n_total,
                                                          std::span<const Index> sampled) {
  const UnobservedPairs range(complement_nodes(n_total, sampled));
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(range.size()));
  for (auto pr : range) pairs.push_back(pr);
  return pairs;
}

double auc_over_pairs(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                      std::span<const std::pair<Index, Index>> pairs, TieRule ties) {
  const PairValues v = gather(a.entries(), scores.entries(), pairs);
  return auc_from_values(v.truth, v.scores, ties);
}

double kendall_tau_over_pairs(const ScoreMatrix& scores, const ProbabilityMatrix& p,
                              std::span<const std::pair<Index, Index>> pairs) {
  const PairValues v = gather(p.entries(), scores.entries(), pairs);
  return kendall_tau_from_values(v.truth, v.scores);
}

double predictive_auc(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                      std::span<const Index> sampled, TieRule ties) {
  const auto pairs = unobserved_pair_list(a.size(), sampled);
  return auc_over_pairs(scores, a, pairs, ties);
}

double predictive_kendall_tau(const ScoreMatrix& scores, const ProbabilityMatrix& p,
                              std::span<const Index> sampled) {
  const auto pairs = unobserved_pair_list(p.size(), sampled);
  return kendall_tau_over_pairs(scores, p, pairs);
}

EvalResult evaluate_pairs(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                          const ProbabilityMatrix* p,
                          std::span<const std::pair<Index, Index>> pairs) {
  EvalResult r;
  r.n_pairs = static_cast<std::int64_t>(pairs.size());
  const PairValues v = gather(a.entries(), scores.entries(), pairs);
  for (double t : v.truth)
    if (t > 0.0) ++r.n_positive;
  try {
    r.auc = auc_from_values(v.truth, v.scores, TieRule::half);
  } catch (const UndefinedMetric&) {
  }
  if (p != nullptr) {
    try {
      r.kendall_tau = kendall_tau_over_pairs(scores, *p, pairs);
    } catch (const UndefinedMetric&) {
    }
  }
  return r;
}

EvalResult evaluate(const ScoreMatrix& scores, const AdjacencyMatrix& a,
                    const ProbabilityMatrix* p, std::span<const Index> sampled) {
  const auto pairs = unobserved_pair_list(a.size(), sampled);
  return evaluate_pairs(scores, a, p, pairs);
}

}  // namespace egolink
