#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "dmgc/graph.hpp"

namespace dmgc {

struct EdgeListOptions {
  bool one_indexed = false;
  /// Clamp weights to {0, 1} and mirror edges (logical OR) while loading.
  bool binarize = false;
  /// Declared node count; inferred from the largest id when absent.
  std::optional<int> node_count;
};

/// Reads whitespace-separated "u v [w]" lines; '#' starts a comment, blank
/// lines are skipped, a missing weight means 1.0 and duplicate edges sum.
/// Self-loops are dropped (the count is available on the returned matrix).
AdjacencyMatrix load_edge_list(const std::string& path, const EdgeListOptions& opts = {});

/// Reads a CSV with a header row; the first column is the node id, the
/// remaining columns are numeric attributes. Rows may appear in any order
/// but must cover each of the n node ids exactly once.
Eigen::MatrixXd load_attributes(const std::string& path, int n, bool one_indexed = false);

/// Writes every nonzero entry as a "u v w" line (both directions for
/// symmetric matrices, so a reload reproduces the matrix exactly).
void write_edge_list(const std::string& path, const AdjacencyMatrix& a);

void write_attributes_csv(const std::string& path, const Eigen::MatrixXd& x);

}  // namespace dmgc
