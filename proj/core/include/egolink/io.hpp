#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "egolink/netcore.hpp"

namespace egolink {

// A graph read from an edge list together with the external node labels;
// labels[v] is the label of internal node v.
struct LabeledGraph {
  AdjacencyMatrix adjacency;
  std::vector<std::string> labels;
};

struct GraphStats {
  Index n_nodes = 0;
  std::int64_t n_edges = 0;
  double average_degree = 0.0;
  double numerical_rank = 0.0;
};

GraphStats describe(const AdjacencyMatrix& a);

// Edge lists hold one edge per line as two whitespace-separated labels.
// Further columns (weights, timestamps) are ignored, as are blank lines and
// lines starting with '#' or '%'. Edges are undirected: reversed and repeated
// edges collapse and self-loops are dropped. Labels get contiguous ids in
// order of first appearance.
//
// Throws IngestionError naming the line for malformed input, or when the file
// is unreadable or holds no edge.
LabeledGraph load_edge_list(const std::filesystem::path& path);
LabeledGraph read_edge_list(std::istream& in);

// Reads an edge list over a fixed node set. Unknown labels are an error.
AdjacencyMatrix read_edge_list_over(std::istream& in, const std::vector<std::string>& labels);
AdjacencyMatrix load_edge_list_over(const std::filesystem::path& path,
                                    const std::vector<std::string>& labels);

// Writes each edge once as "u v"; labels default to the internal ids.
void write_edge_list(std::ostream& out, const AdjacencyMatrix& a,
                     const std::vector<std::string>& labels = {});

// Dense matrices: a first line holding N, then N rows of N comma-separated
// values printed with 17 significant digits.
void write_dense_csv(std::ostream& out, const Matrix& m);
Matrix read_dense_csv(std::istream& in);
Matrix load_dense_csv(const std::filesystem::path& path);

// An ego sample on disk: a JSON object
//   {"format": "egolink-ego-sample", "nodes": [...], "egos": [...],
//    "edges": [[u, v], ...]}
// holding every node label, the sampled labels in sampling order, and every
// observed edge (each has at least one sampled endpoint).
struct LabeledEgoSample {
  EgoSample sample;
  std::vector<std::string> labels;
};

void write_ego_sample(std::ostream& out, const EgoSample& s,
                      const std::vector<std::string>& labels);
LabeledEgoSample read_ego_sample(std::istream& in);
LabeledEgoSample load_ego_sample(const std::filesystem::path& path);

// Default labels "0", "1", ..., "n-1".
std::vector<std::string> index_labels(Index n);

}  // namespace egolink
