#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dmgc/graph.hpp"

namespace dmgc {

/// Full eigensystem of a symmetric matrix. Eigenpairs are sorted by
/// |eigenvalue| descending (ties: signed value descending, then original
/// solver order), and each eigenvector's first nonzero coordinate is made
/// positive so embeddings are reproducible across solver backends.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // orthonormal columns aligned with eigenvalues

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// Diffusion coordinates at time t: row i is (lambda_j^t * phi_j(i)) for
/// j = 1..q. At t = 0 the rows are the leading eigenvector entries.
struct DiffusionMap {
  int t = 0;
  int q = 0;
  Eigen::MatrixXd coords;  // n x q

  int n() const { return static_cast<int>(coords.rows()); }
};

/// Symmetric pairwise-distance matrix with zero diagonal.
struct DistanceMatrix {
  Eigen::MatrixXd values;

  int n() const { return static_cast<int>(values.rows()); }
};

/// Eigensystem of an arbitrary dense symmetric matrix with the ordering and
/// sign conventions above.
SpectralDecomposition decompose_symmetric(const Eigen::MatrixXd& matrix);

SpectralDecomposition decompose(const LaplacianMatrix& l);

DiffusionMap diffusion_map(const SpectralDecomposition& d, int t, int q);

/// Euclidean distances between diffusion coordinates; invariant to
/// eigenvector sign flips.
DistanceMatrix diffusion_distance(const DiffusionMap& u);

/** Scree-plot elbows via the profile likelihood of a two-component Gaussian
 *  model with pooled variance.
 *
 *  For each candidate split c the values are modelled as two normal samples
 *  {v_1..v_c} and {v_{c+1}..} sharing one variance; the chosen elbow
 *  maximizes the profile log-likelihood (a zero-variance split is treated as
 *  infinitely good, ties resolved toward the smallest split). Subsequent
 *  elbows are found recursively on the remaining tail. Returned values are
 *  1-based prefix lengths into `values`.
 */
std::vector<int> zhu_ghodsi_elbows(const std::vector<double>& values, int n_elbows);

/// Embedding dimension rule used by the pipeline: the second elbow of the
/// absolute-eigenvalue scree, or the first elbow when the tail after it is
/// too short to split again.
int select_embedding_dimension(const SpectralDecomposition& d);

/// Rows are (sqrt(|lambda_j|) * phi_j(i)) for j = 1..q from an eigensystem
/// already in canonical order.
DiffusionMap spectral_embedding_coordinates(const SpectralDecomposition& d, int q);

/// Adjacency spectral embedding: eigendecomposition of the adjacency matrix
/// itself with sqrt(|lambda|) column scaling.
DiffusionMap adjacency_spectral_embedding(const AdjacencyMatrix& a, int q);

}  // namespace dmgc
