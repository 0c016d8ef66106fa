#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "egolink/netcore.hpp"

namespace egolink {

enum class ModelFamily {
  distance,  // X_i ~ N_5(0, I),            f = 1 / (1 + exp(||X_i - X_j||))
  product,   // X_i ~ Beta(0.5, 1)^5 i.i.d., f = X_i^T X_j
  sbm,       // X_i ~ U{1..5},              f = 0.05 + (b - 0.3) / 6 * 1(same block b)
};

std::string_view to_string(ModelFamily family);
// Throws InvalidArgument for unknown names.
ModelFamily parse_family(std::string_view name);

struct ModelSpec {
  ModelFamily family = ModelFamily::sbm;
  Index n_nodes = 500;
  double target_degree = 10.0;
  std::uint64_t seed = 0;
};

inline constexpr int kLatentDimension = 5;
inline constexpr int kBlockCount = 5;

// A drawn model: the kernel f(X_i, X_j) including its diagonal, the
// calibrated scale phi, and P = min(phi * f, 1) with the diagonal zeroed.
struct GeneratedModel {
  Matrix kernel;
  double phi = 0.0;
  ProbabilityMatrix probability;
  std::vector<int> blocks;  // 1-based block labels (sbm only)
};

// Kernel matrix f(X_i, X_j) for fresh latent positions, diagonal included.
// `blocks` receives the labels for the block model and is cleared otherwise.
Matrix generate_kernel(ModelFamily family, Index n_nodes, Rng& rng,
                       std::vector<int>* blocks = nullptr);

// Draws latent positions and calibrates phi so that the expected average
// degree (2 / N) * sum_{i<j} p_ij equals spec.target_degree. spec.seed is not
// consulted here; callers seed `rng` from it.
GeneratedModel generate_model(const ModelSpec& spec, Rng& rng);
ProbabilityMatrix generate_probability(const ModelSpec& spec, Rng& rng);

// Expected average degree (2 / N) * sum_{i<j} min(phi * f_ij, 1).
double expected_degree(const Matrix& kernel, double phi);

// phi with expected_degree(kernel, phi) = target_degree (within 1e-6), found
// by bisection. Throws InvalidArgument if the kernel is not symmetric and
// nonnegative, or the target lies outside (0, N - 1] or beyond what
// saturating every positive pair reaches.
double calibrate_phi(const Matrix& kernel, double target_degree);

// Independent Bernoulli(p_ij) edges on the upper triangle, mirrored.
AdjacencyMatrix sample_adjacency(const ProbabilityMatrix& p, Rng& rng);

}  // namespace egolink
