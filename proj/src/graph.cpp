#include "dmgc/graph.hpp"

#include <cmath>

#include "dmgc/errors.hpp"

namespace dmgc {

AdjacencyMatrix AdjacencyMatrix::from_weights(Eigen::MatrixXd weights) {
  if (weights.rows() != weights.cols()) {
    throw ParameterError("adjacency matrix must be square, got " +
                         std::to_string(weights.rows()) + "x" +
                         std::to_string(weights.cols()));
  }
  if (weights.rows() < 1) {
    throw ParameterError("adjacency matrix must have at least one node");
  }

  const auto n = weights.rows();
  int dropped = 0;
  bool symmetric = true;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double w = weights(i, j);
      if (!std::isfinite(w)) {
        throw DataError("non-finite edge weight at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
      if (w < 0.0) {
        throw DataError("negative edge weight at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
      if (i == j && w != 0.0) {
        weights(i, j) = 0.0;
        ++dropped;
      }
    }
  }
  for (Eigen::Index j = 0; j < n && symmetric; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      if (weights(i, j) != weights(j, i)) {
        symmetric = false;
        break;
      }
    }
  }

  AdjacencyMatrix a;
  a.weights_ = std::move(weights);
  a.directed_ = !symmetric;
  a.dropped_self_loops_ = dropped;
  return a;
}

AdjacencyMatrix symmetrize(const AdjacencyMatrix& a) {
  Eigen::MatrixXd k = (a.weights() + a.weights().transpose()) / 2.0;
  return AdjacencyMatrix::from_weights(std::move(k));
}

LaplacianMatrix normalized_laplacian(const AdjacencyMatrix& k) {
  if (k.directed()) {
    throw ParameterError("normalized_laplacian requires a symmetric matrix; symmetrize first");
  }
  const int n = k.n();
  Eigen::VectorXd degrees = k.weights().rowwise().sum();
  Eigen::VectorXd inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    // Zero-degree nodes get identically zero rows and columns.
    inv_sqrt(i) = degrees(i) > 0.0 ? 1.0 / std::sqrt(degrees(i)) : 0.0;
  }

  LaplacianMatrix l;
  l.values.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      l.values(i, j) = k.weights()(i, j) * inv_sqrt(i) * inv_sqrt(j);
    }
  }
  return l;
}

}  // namespace dmgc
