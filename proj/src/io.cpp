#include "dmgc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dmgc/errors.hpp"

namespace dmgc {

namespace {

struct Edge {
  long u;
  long v;
  double w;
  int line;
};

std::string location(const std::string& path, int line) {
  return path + ":" + std::to_string(line);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

AdjacencyMatrix load_edge_list(const std::string& path, const EdgeListOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open edge list '" + path + "'");
  }

  std::vector<Edge> edges;
  long max_id = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (blank(line)) continue;

    std::istringstream fields(line);
    long u = 0, v = 0;
    double w = 1.0;
    if (!(fields >> u >> v)) {
      throw ParseError(location(path, line_no) + ": malformed edge line '" + line + "'");
    }
    if (fields >> w) {
      // weight present
    } else if (!fields.eof()) {
      throw ParseError(location(path, line_no) + ": malformed weight in '" + line + "'");
    }
    std::string extra;
    if (fields.clear(), fields >> extra) {
      throw ParseError(location(path, line_no) + ": trailing tokens in '" + line + "'");
    }
    if (opts.one_indexed) {
      if (u < 1 || v < 1) {
        throw DataError(location(path, line_no) + ": node id below 1 in a one-indexed file");
      }
      --u;
      --v;
    }
    if (u < 0 || v < 0) {
      throw DataError(location(path, line_no) + ": negative node id");
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw DataError(location(path, line_no) + ": edge weight must be finite and nonnegative");
    }
    max_id = std::max(max_id, std::max(u, v));
    edges.push_back({u, v, w, line_no});
  }

  long n = opts.node_count ? *opts.node_count : max_id + 1;
  if (n < 1) {
    throw DataError("edge list '" + path + "' defines no nodes");
  }
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw DataError(location(path, e.line) + ": node id " + std::to_string(std::max(e.u, e.v)) +
                      " exceeds declared node count " + std::to_string(n));
    }
  }

  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.u == e.v) {
      weights(e.u, e.u) += e.w;  // recorded and dropped by from_weights
      continue;
    }
    weights(e.u, e.v) += e.w;
  }
  if (opts.binarize) {
    for (long j = 0; j < n; ++j) {
      for (long i = j + 1; i < n; ++i) {
        const double present = (weights(i, j) > 0.0 || weights(j, i) > 0.0) ? 1.0 : 0.0;
        weights(i, j) = present;
        weights(j, i) = present;
      }
      weights(j, j) = weights(j, j) > 0.0 ? 1.0 : 0.0;
    }
  }
  return AdjacencyMatrix::from_weights(std::move(weights));
}

Eigen::MatrixXd load_attributes(const std::string& path, int n, bool one_indexed) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open attribute file '" + path + "'");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("attribute file '" + path + "' is empty");
  }
  int columns = 1;
  for (char ch : line) {
    if (ch == ',') ++columns;
  }
  const int p = columns - 1;
  if (p < 1) {
    throw DataError("attribute file '" + path + "' needs an id column plus at least one value");
  }

  Eigen::MatrixXd x(n, p);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;

    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != columns) {
      throw DataError(location(path, line_no) + ": expected " + std::to_string(columns) +
                      " columns, got " + std::to_string(cells.size()));
    }

    long id = 0;
    std::size_t used = 0;
    try {
      id = std::stol(cells[0], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || cells[0].find_first_not_of(" \t", used) != std::string::npos) {
      throw DataError(location(path, line_no) + ": non-numeric node id '" + cells[0] + "'");
    }
    if (one_indexed) --id;
    if (id < 0 || id >= n) {
      throw DataError(location(path, line_no) + ": node id " + cells[0] +
                      " outside the graph's 0.." + std::to_string(n - 1) + " range");
    }
    if (seen[static_cast<std::size_t>(id)]) {
      throw DataError(location(path, line_no) + ": duplicate node id " + cells[0]);
    }
    seen[static_cast<std::size_t>(id)] = true;

    for (int c = 0; c < p; ++c) {
      const std::string& token = cells[static_cast<std::size_t>(c) + 1];
      try {
        x(id, c) = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || token.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw DataError(location(path, line_no) + ": non-numeric value '" + token + "'");
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw DataError("attribute file '" + path + "' is missing node " + std::to_string(i));
    }
  }
  return x;
}

void write_edge_list(const std::string& path, const AdjacencyMatrix& a) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write edge list '" + path + "'");
  }
  char buffer[64];
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      const double w = a.weights()(i, j);
      if (w == 0.0) continue;
      std::snprintf(buffer, sizeof(buffer), "%.17g", w);
      out << i << ' ' << j << ' ' << buffer << '\n';
    }
  }
}

void write_attributes_csv(const std::string& path, const Eigen::MatrixXd& x) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write attribute file '" + path + "'");
  }
  out << "id";
  for (int c = 0; c < x.cols(); ++c) out << ",x" << (c + 1);
  out << '\n';
  char buffer[64];
  for (int i = 0; i < x.rows(); ++i) {
    out << i;
    for (int c = 0; c < x.cols(); ++c) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", x(i, c));
      out << ',' << buffer;
    }
    out << '\n';
  }
}

}  // namespace dmgc
