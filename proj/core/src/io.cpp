#include "egolink/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "egolink/errors.hpp"

namespace egolink {

namespace {

using Edge = std::pair<Index, Index>;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  return in;
}

bool is_comment_or_blank(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#' || line[first] == '%';
}

// Calls on_edge(u_label, v_label, line_number) for every edge line.
template <typename OnEdge>
void scan_edges(std::istream& in, OnEdge&& on_edge) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream fields(line);
    std::string u;
    std::string v;
    if (!(fields >> u >> v))
      throw IngestionError("malformed edge: expected two node labels", line_no);
    on_edge(u, v, line_no);
  }
  if (in.bad()) throw IngestionError("read error");
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> index_labels(Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) labels.push_back(std::to_string(v));
  return labels;
}

GraphStats describe(const AdjacencyMatrix& a) {
  GraphStats s;
  s.n_nodes = a.size();
  s.n_edges = a.edge_count();
  s.average_degree = a.average_degree();
  s.numerical_rank = s.n_edges > 0 ? numerical_rank(a) : 0.0;
  return s;
}

LabeledGraph read_edge_list(std::istream& in) {
  std::unordered_map<std::string, Index> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = ids.try_emplace(label, static_cast<Index>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };
  scan_edges(in, [&](const std::string& u, const std::string& v, std::size_t) {
    const Index iu = id_of(u);
    edges.emplace_back(iu, id_of(v));
  });
  if (labels.empty()) throw IngestionError("edge list contains no edges");
  AdjacencyMatrix a = AdjacencyMatrix::from_edges(static_cast<Index>(labels.size()), edges);
  if (a.empty()) throw IngestionError("edge list contains only self-loops");
  return LabeledGraph{std::move(a), std::move(labels)};
}

LabeledGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_edge_list(in);
}

AdjacencyMatrix read_edge_list_over(std::istream& in, const std::vector<std::string>& labels) {
  if (labels.empty()) throw IngestionError("node set is empty");
  std::unordered_map<std::string, Index> ids;
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (!ids.emplace(labels[k], static_cast<Index>(k)).second)
      throw IngestionError("duplicate node label '" + labels[k] + "'");
  std::vector<Edge> edges;
  scan_edges(in, [&](const std::string& u, const std::string& v, std::size_t line_no) {
    const auto iu = ids.find(u);
    const auto iv = ids.find(v);
    if (iu == ids.end() || iv == ids.end())
      throw IngestionError("edge references an unknown node label", line_no);
    edges.emplace_back(iu->second, iv->second);
  });
  return AdjacencyMatrix::from_edges(static_cast<Index>(labels.size()), edges);
}

AdjacencyMatrix load_edge_list_over(const std::filesystem::path& path,
                                    const std::vector<std::string>& labels) {
  std::ifstream in = open_input(path);
  return read_edge_list_over(in, labels);
}

void write_edge_list(std::ostream& out, const AdjacencyMatrix& a,
                     const std::vector<std::string>& labels) {
  const std::vector<std::string> names = labels.empty() ? index_labels(a.size()) : labels;
  if (static_cast<Index>(names.size()) != a.size())
    throw InvalidArgument("write_edge_list: label count differs from node count");
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = i + 1; j < a.size(); ++j)
      if (a(i, j) != 0.0) out << names[i] << ' ' << names[j] << '\n';
}

void write_dense_csv(std::ostream& out, const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("write_dense_csv: matrix must be square");
  out << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_value(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_dense_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw IngestionError("dense matrix: missing size header", 1);
  Index n = 0;
  {
    std::istringstream header(line);
    std::string rest;
    if (!(header >> n) || n <= 0 || (header >> rest))
      throw IngestionError("dense matrix: header must be a positive integer N", 1);
  }
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    ++line_no;
    if (!std::getline(in, line)) throw IngestionError("dense matrix: too few rows", line_no);
    std::istringstream row(line);
    std::string cell;
    Index j = 0;
    while (std::getline(row, cell, ',')) {
      if (j >= n) throw IngestionError("dense matrix: too many columns", line_no);
      try {
        std::size_t used = 0;
        m(i, j) = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
          throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IngestionError("dense matrix: bad number '" + cell + "'", line_no);
      }
      ++j;
    }
    if (j != n) throw IngestionError("dense matrix: too few columns", line_no);
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      throw IngestionError("dense matrix: trailing data", line_no);
  }
  return m;
}

Matrix load_dense_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_dense_csv(in);
}

void write_ego_sample(std::ostream& out, const EgoSample& s,
                      const std::vector<std::string>& labels) {
  const std::vector<std::string> names = labels.empty() ? index_labels(s.n_total()) : labels;
  if (static_cast<Index>(names.size()) != s.n_total())
    throw InvalidArgument("write_ego_sample: label count differs from node count");
  nlohmann::json doc;
  doc["format"] = "egolink-ego-sample";
  doc["nodes"] = names;
  nlohmann::json egos = nlohmann::json::array();
  for (Index v : s.indices()) egos.push_back(names[v]);
  doc["egos"] = std::move(egos);
  nlohmann::json edges = nlohmann::json::array();
  for (Index k = 0; k < s.n_sampled(); ++k) {
    const Index u = s.indices()[k];
    for (Index v = 0; v < s.n_total(); ++v) {
      const double x = s.row_block()(k, v);
      if (x != 0.0 && x != 1.0)
        throw InvalidArgument("write_ego_sample: rows must be binary");
      // Edges between two egos appear in both rows; keep one copy.
      if (x == 0.0 || (s.is_sampled(v) && s.position_of(v) < k)) continue;
      edges.push_back({names[u], names[v]});
    }
  }
  doc["edges"] = std::move(edges);
  out << doc.dump(1) << '\n';
}

LabeledEgoSample read_ego_sample(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IngestionError(std::string("ego sample: invalid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != "egolink-ego-sample")
      throw IngestionError("ego sample: missing or wrong \"format\" field");
    auto labels = doc.at("nodes").get<std::vector<std::string>>();
    const auto egos = doc.at("egos").get<std::vector<std::string>>();
    const auto edges = doc.at("edges").get<std::vector<std::vector<std::string>>>();

    std::unordered_map<std::string, Index> ids;
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (!ids.emplace(labels[k], static_cast<Index>(k)).second)
        throw IngestionError("ego sample: duplicate node label '" + labels[k] + "'");
    auto id_of = [&](const std::string& label) {
      const auto it = ids.find(label);
      if (it == ids.end()) throw IngestionError("ego sample: unknown node label '" + label + "'");
      return it->second;
    };

    const auto n_total = static_cast<Index>(labels.size());
    std::vector<Index> indices;
    std::vector<Index> position(static_cast<std::size_t>(n_total), -1);
    for (const auto& e : egos) {
      const Index v = id_of(e);
      if (position[v] >= 0) throw IngestionError("ego sample: repeated ego '" + e + "'");
      position[v] = static_cast<Index>(indices.size());
      indices.push_back(v);
    }
    Matrix rows = Matrix::Zero(static_cast<Index>(indices.size()), n_total);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (edges[k].size() != 2) throw IngestionError("ego sample: edges must be label pairs");
      const Index u = id_of(edges[k][0]);
      const Index v = id_of(edges[k][1]);
      if (u == v) continue;
      if (position[u] < 0 && position[v] < 0)
        throw IngestionError("ego sample: edge between two unsampled nodes");
      if (position[u] >= 0) rows(position[u], v) = 1.0;
      if (position[v] >= 0) rows(position[v], u) = 1.0;
    }
    return LabeledEgoSample{EgoSample(n_total, std::move(indices), std::move(rows)),
                            std::move(labels)};
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError(std::string("ego sample: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw IngestionError(std::string("ego sample: ") + e.what());
  }
}

LabeledEgoSample load_ego_sample(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_ego_sample(in);
}

}  // namespace egolink
