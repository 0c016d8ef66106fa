#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <numeric>

#include "egolink/baselines.hpp"
#include "egolink/errors.hpp"
#include "egolink/estimator.hpp"
#include "egolink/generators.hpp"
#include "egolink/linalg.hpp"
#include "egolink/metrics.hpp"
#include "oracles.hpp"

using namespace egolink;

namespace {

std::vector<Index> first_nodes(Index n) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  return idx;
}

double rel_error(const Matrix& est, const Matrix& truth) {
  return (est - truth).norm() / truth.norm();
}

// X^T S X for a random r x N factor and signature S.
Matrix low_rank_symmetric(Index r, Index n_total, bool indefinite, Rng& rng) {
  const Matrix x = oracle::random_gaussian(r, n_total, rng);
  Vector sig = Vector::Ones(r);
  if (indefinite)
    for (Index k = 1; k < r; k += 2) sig(k) = -1.0;
  return x.transpose() * sig.asDiagonal() * x;
}

}  // namespace

TEST_CASE("noiseless PSD feed is recovered exactly") {
  Rng rng = make_rng(11);
  const Matrix x = oracle::random_gaussian(2, 12, rng);
  const Matrix p = x.transpose() * x;
  const EgoSample s = EgoSample::from_matrix(p, {0, 3, 5, 9});
  const ScoreMatrix est = se_estimate(s, SeConfig::with_rank(2));
  CHECK((est.entries() - p).norm() < 1e-8);

  const Embedding emb = extract_embedding(s, SeConfig::with_rank(2));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(emb.form);
  CHECK(eig.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("noiseless indefinite feed is recovered exactly") {
  Rng rng = make_rng(12);
  for (Index r = 1; r <= 5; ++r) {
    const Matrix p = low_rank_symmetric(r, 40, true, rng);
    const EgoSample s = EgoSample::from_matrix(p, {2, 7, 11, 19, 23, 31, 37});
    REQUIRE(oracle::exact_rank(s.in_sample_block()) == r);
    CHECK(rel_error(se_estimate(s, SeConfig::with_rank(r)).entries(), p) < 1e-8);
  }
}

TEST_CASE("full sampling of an exact-rank matrix returns it") {
  Rng rng = make_rng(13);
  const Matrix p = low_rank_symmetric(3, 15, false, rng);
  const EgoSample s = EgoSample::from_matrix(p, first_nodes(15));
  CHECK((se_estimate(s, SeConfig::with_rank(3)).entries() - p).norm() < 1e-8);
}

TEST_CASE("output rank is at most r") {
  Rng rng = make_rng(14);
  const AdjacencyMatrix a(oracle::random_adjacency_entries(60, 0.2, rng));
  const EgoSample s = sample_ego(a, 20, rng);
  for (Index r : {1, 2, 4, 7}) {
    const Matrix est = se_estimate(s, SeConfig::with_rank(r)).entries();
    CHECK(est.isApprox(est.transpose(), 0.0));
    const Vector sv = Eigen::JacobiSVD<Matrix>(est).singularValues();
    const double cut = 1e-8 * sv.maxCoeff();
    CHECK((sv.array() > cut).count() <= r);
  }
}

TEST_CASE("relabeling nodes permutes the scores") {
  Rng rng = make_rng(15);
  const Index n_total = 30;
  const Matrix a = oracle::random_adjacency_entries(n_total, 0.3, rng);
  std::vector<Index> pi(static_cast<std::size_t>(n_total));
  std::iota(pi.begin(), pi.end(), Index{0});
  for (Index k = n_total - 1; k > 0; --k)
    std::swap(pi[k], pi[static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(k + 1)))]);

  // b(pi(i), pi(j)) = a(i, j)
  Matrix b(n_total, n_total);
  for (Index i = 0; i < n_total; ++i)
    for (Index j = 0; j < n_total; ++j) b(pi[i], pi[j]) = a(i, j);

  const std::vector<Index> sampled{4, 9, 1, 22, 17, 28, 13, 0};
  std::vector<Index> relabeled;
  for (Index v : sampled) relabeled.push_back(pi[v]);

  const Matrix sa = se_estimate(EgoSample::from_matrix(a, sampled), SeConfig::with_rank(3)).entries();
  const Matrix sb = se_estimate(EgoSample::from_matrix(b, relabeled), SeConfig::with_rank(3)).entries();
  double worst = 0.0;
  for (Index i = 0; i < n_total; ++i)
    for (Index j = 0; j < n_total; ++j) worst = std::max(worst, std::abs(sb(pi[i], pi[j]) - sa(i, j)));
  CHECK(worst < 1e-10 * sa.cwiseAbs().maxCoeff());
}

TEST_CASE("estimate equals the plug-in formula computed directly") {
  Rng rng = make_rng(16);
  const AdjacencyMatrix a(oracle::random_adjacency_entries(40, 0.25, rng));
  const EgoSample s = sample_ego(a, 12, rng);
  const Index r = 4;
  const Matrix p_in = oracle::rank_r_via_gram(s.row_block(), r);
  Matrix p11(s.n_sampled(), s.n_sampled());
  for (Index k = 0; k < s.n_sampled(); ++k) p11.col(k) = p_in.col(s.indices()[k]);
  const Matrix x_hat = 0.5 * (p11.completeOrthogonalDecomposition().pseudoInverse() +
                              Matrix(p11.transpose()).completeOrthogonalDecomposition().pseudoInverse());
  const Matrix direct = p_in.transpose() * x_hat * p_in;
  const Matrix direct_sym = 0.5 * (direct + direct.transpose());
  const Matrix est = se_estimate(s, SeConfig::with_rank(r)).entries();
  CHECK((est - direct_sym).norm() < 1e-8 * std::max(1.0, direct_sym.norm()));
}

TEST_CASE("embedding reproduces the score matrix") {
  Rng rng = make_rng(17);
  const AdjacencyMatrix a(oracle::random_adjacency_entries(50, 0.2, rng));
  const EgoSample s = sample_ego(a, 15, rng);
  for (Index r : {1, 3, 6}) {
    const Embedding emb = extract_embedding(s, SeConfig::with_rank(r));
    CHECK(emb.rank() == r);
    CHECK(emb.positions.rows() == r);
    CHECK(emb.positions.cols() == 50);
    CHECK((emb.scores().entries() - se_estimate(s, SeConfig::with_rank(r)).entries()).norm() < 1e-8);
  }
  const Embedding one = extract_embedding(s, SeConfig::with_rank(1));
  CHECK(one.form.rows() == 1);
  CHECK(one.form.cols() == 1);
}

TEST_CASE("estimator errors") {
  Rng rng = make_rng(18);
  const AdjacencyMatrix a(oracle::random_adjacency_entries(20, 0.3, rng));
  const EgoSample s = sample_ego(a, 5, rng);
  CHECK_THROWS_AS(se_estimate(s, SeConfig::with_rank(6)), InvalidArgument);
  CHECK_THROWS_AS(se_estimate(s, SeConfig::with_rank(0)), InvalidArgument);
  CHECK_THROWS_AS(se_estimate(s, SeConfig{}), InvalidArgument);

  const EgoSample empty = EgoSample::from_matrix(Matrix::Zero(10, 10), {1, 2, 3});
  CHECK_THROWS_AS(se_estimate(empty, SeConfig::with_rank(1)), DegenerateSample);

  // Rows with edges only to unsampled nodes: P~_11 vanishes.
  Matrix star = Matrix::Zero(10, 10);
  for (Index v = 3; v < 10; ++v) star(0, v) = star(v, 0) = star(1, v) = star(v, 1) = 1.0;
  CHECK_THROWS_AS(se_estimate(EgoSample::from_matrix(star, {0, 1}), SeConfig::with_rank(1)),
                  DegenerateSample);

  SeConfig bad_grid;
  bad_grid.cv_rank_grid = {1, 5};
  CHECK_THROWS_AS(select_rank(s, bad_grid, rng), InvalidArgument);
  CHECK_THROWS_AS(select_rank(EgoSample::from_matrix(a.entries(), {0, 1}), SeConfig{}, rng),
                  InvalidArgument);
  CHECK_THROWS_AS(select_rank(EgoSample::from_matrix(Matrix::Zero(10, 10), {1, 2, 3, 4}), SeConfig{}, rng),
                  DegenerateCv);
}

TEST_CASE("clamp_to_unit") {
  Matrix m(2, 2);
  m << -0.5, 0.4, 0.4, 1.7;
  const Matrix c = clamp_to_unit(ScoreMatrix(m));
  CHECK(c(0, 0) == 0.0);
  CHECK(c(0, 1) == 0.4);
  CHECK(c(1, 1) == 1.0);
}

TEST_CASE("singleton grid fits one candidate per holdout") {
  Rng rng = make_rng(19);
  const AdjacencyMatrix a(oracle::random_adjacency_entries(80, 0.2, rng));
  const EgoSample s = sample_ego(a, 20, rng);
  SeConfig cfg;
  cfg.cv_rank_grid = {1};
  const RankSelection sel = select_rank_detailed(s, cfg, rng);
  CHECK(sel.rank == 1);
  CHECK(sel.grid == std::vector<Index>{1});
  CHECK(sel.holdouts_used > 0);
  CHECK(sel.fits <= 20);
  CHECK(sel.fits >= sel.holdouts_used);
}

TEST_CASE("noiseless rank-3 rows select rank 3") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng = make_rng(100 + seed);
    const Matrix x = oracle::random_gaussian(3, 80, rng).cwiseAbs();
    const Matrix p = x.transpose() * x / 10.0;
    Rng pick = make_rng(seed);
    const EgoSample s = sample_ego(AdjacencyMatrix(Matrix::Zero(80, 80)), 20, pick);
    const EgoSample rows = EgoSample::from_matrix(p, s.indices());
    SeConfig cfg;
    cfg.cv_rank_grid = {1, 2, 3, 4, 5, 6};
    const RankSelection sel = select_rank_detailed(rows, cfg, rng);
    CHECK(sel.rank == 3);
    CHECK(sel.grid.size() == sel.mean_auc.size());
  }
}

TEST_CASE("rank selection is reproducible") {
  Rng rng = make_rng(20);
  const AdjacencyMatrix a(oracle::random_adjacency_entries(60, 0.25, rng));
  const EgoSample s = sample_ego(a, 15, rng);
  Rng r1 = make_rng(5), r2 = make_rng(5);
  const RankSelection x = select_rank_detailed(s, SeConfig{}, r1);
  const RankSelection y = select_rank_detailed(s, SeConfig{}, r2);
  CHECK(x.rank == y.rank);
  CHECK(x.mean_auc == y.mean_auc);
  CHECK(x.grid.size() == 14u);
}

TEST_CASE("SE beats CUR on the block model") {
  double se_sum = 0.0, cur_sum = 0.0;
  const int seeds = 20;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng = make_rng(derive_seed(777, {static_cast<std::uint64_t>(seed)}));
    const ModelSpec spec{ModelFamily::sbm, 500, 100.0, 0};
    const ProbabilityMatrix p = generate_probability(spec, rng);
    const AdjacencyMatrix a = sample_adjacency(p, rng);
    const EgoSample s = sample_ego(a, 100, rng);
    se_sum += predictive_auc(se_estimate(s, SeConfig::with_rank(5)), a, s.indices());
    cur_sum += predictive_auc(cur_estimate(s), a, s.indices());
  }
  MESSAGE("mean AUC se=" << se_sum / seeds << " cur=" << cur_sum / seeds);
  CHECK(se_sum > cur_sum);
}
