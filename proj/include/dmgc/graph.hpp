#pragma once

#include <Eigen/Dense>

namespace dmgc {

/// Nonnegative edge-weight matrix with a zero diagonal. Self-loops are
/// dropped on construction and counted so callers can warn about them.
class AdjacencyMatrix {
 public:
  /// Empty placeholder; populated instances come from from_weights.
  AdjacencyMatrix() = default;

  /// Validates shape, nonnegativity and finiteness; zeroes the diagonal.
  static AdjacencyMatrix from_weights(Eigen::MatrixXd weights);

  int n() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  bool directed() const { return directed_; }
  int dropped_self_loops() const { return dropped_self_loops_; }

 private:
  Eigen::MatrixXd weights_;
  bool directed_ = false;
  int dropped_self_loops_ = 0;
};

/// Degree-normalized similarity matrix; symmetric with spectrum in [-1, 1],
/// and identically zero on rows/columns of zero-degree nodes.
struct LaplacianMatrix {
  Eigen::MatrixXd values;

  int n() const { return static_cast<int>(values.rows()); }
};

/// K = (A + A^T) / 2. Idempotent on symmetric input; result is undirected.
AdjacencyMatrix symmetrize(const AdjacencyMatrix& a);

/// L(i,j) = K(i,j) / sqrt(B(i,i) B(j,j)) with B(i,i) the weighted degree of
/// node i in K. Entries touching a zero-degree node are zero.
LaplacianMatrix normalized_laplacian(const AdjacencyMatrix& k);

}  // namespace dmgc
