#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dmgc/spectral.hpp"

namespace dmgc {

enum class Centering { biased, unbiased };

/// Distance matrix after double-centering (biased, H D H) or U-centering
/// (unbiased: row/column means scaled by 1/(n-2), grand mean by
/// 1/((n-1)(n-2)), zero diagonal).
struct CenteredMatrix {
  Centering mode = Centering::unbiased;
  Eigen::MatrixXd values;

  int n() const { return static_cast<int>(values.rows()); }
};

/// ranks(i, j) = k when node i is the k-th nearest neighbor of node j,
/// judged by column j of the distance matrix. Self is rank 0 and ties go to
/// the smaller node index, so every column is a permutation of 0..n-1.
struct RankMatrix {
  Eigen::MatrixXi ranks;

  int n() const { return static_cast<int>(ranks.rows()); }
};

/** kappa x gamma grid of local distance correlations.
 *
 *  Scales count distinct neighbor-distance ranks per side (tied distances
 *  share a rank). A local entry (k, l) is the covariance, over the n^2 pair
 *  grid, of the two column-centered distance matrices masked to the k
 *  (resp. l) nearest rank groups -- pairing "i among j's nearest by the
 *  first matrix" with "j among i's nearest by the second" -- normalized by
 *  the equally masked variances. The final entry (kappa, gamma) masks
 *  nothing and is the plain unbiased distance correlation, so the grid
 *  interpolates between fully local statistics and the global one.
 */
struct LocalCorrelationMap {
  int kappa = 0;
  int gamma = 0;
  Eigen::MatrixXd values;  // (k, l) scale stored at (k-1, l-1)

  double global() const { return values(kappa - 1, gamma - 1); }
};

struct MgcResult {
  double statistic = 0.0;
  int k_star = 0;
  int l_star = 0;
};

/// One side of a dependence statistic, preprocessed once so that null
/// permutations can be applied by reindexing instead of recomputation.
/// Column centering subtracts each column's off-diagonal mean and zeroes
/// the diagonal; the transposed copies keep the hot permutation loop
/// sequential in memory.
struct PreparedSide {
  Eigen::MatrixXd u_centered;       // symmetric U-centered distances
  Eigen::MatrixXd col_centered;     // column-centered distances
  Eigen::MatrixXd col_centered_t;   // transpose of col_centered
  Eigen::MatrixXi tied_ranks;       // per column: count of distinct smaller values
  Eigen::MatrixXi tied_ranks_t;     // transpose of tied_ranks
  int scale_count = 0;              // max tied rank + 1

  int n() const { return static_cast<int>(u_centered.rows()); }
};

/// Per-scale moments shared by every null permutation of a side: the masked
/// sum of column-centered values, the mutually-masked sum of products with
/// the transpose, and the total U-centered square sum.
struct SideMoments {
  std::vector<double> masked_sum;       // sum of col_centered over ranks < k
  std::vector<double> masked_cross_sq;  // sum of colc(i,j)*colc(j,i) over max rank < k
  double u_square_sum = 0.0;            // sum of u_centered^2 off the diagonal
};

DistanceMatrix pairwise_euclidean(const Eigen::MatrixXd& x);

CenteredMatrix center(const DistanceMatrix& d, Centering mode);

/// Distance correlation: the centered cross-sum normalized by the two
/// centered self-sums (Cauchy-Schwarz), 0 when either self-sum vanishes.
double dcorr(const DistanceMatrix& c, const DistanceMatrix& d,
             Centering mode = Centering::unbiased);

RankMatrix nearest_neighbor_ranks(const DistanceMatrix& d);

PreparedSide prepare_side(const DistanceMatrix& d);

/// out(i, j) = in(perm[i], perm[j]) applied to every stored field.
void permute_side(const PreparedSide& in, const std::vector<int>& perm, PreparedSide& out);

SideMoments side_moments(const PreparedSide& side);

LocalCorrelationMap local_correlation_map(const PreparedSide& c, const SideMoments& c_moments,
                                          const PreparedSide& d, const SideMoments& d_moments);

LocalCorrelationMap local_correlation_map(const DistanceMatrix& c, const DistanceMatrix& d);

/// Order-invariant evaluation of a single local correlation: the masked
/// sums are accumulated in sorted order, so jointly relabeled inputs give
/// bit-identical results. Used for reported statistics.
double local_correlation_at(const PreparedSide& c, const PreparedSide& d, int k, int l);

/** Smoothed maximum over the local-correlation grid.
 *
 *  Entries above the threshold max(0, global correlation, largest |negative
 *  entry|) are marked significant; within the largest 4-connected component
 *  of significant entries, the maximum is returned together with its scale,
 *  provided the component covers at least ceil(0.02 max(kappa, gamma)) *
 *  min(kappa, gamma) cells. Otherwise the global statistic is returned with
 *  scale (kappa, gamma). Isolated spikes never survive the component-size
 *  requirement.
 */
MgcResult mgc_statistic(const LocalCorrelationMap& map, int n);

/// Pairwise rank-based association: for every ordered pair (i, j) the
/// remaining points are cross-classified by whether they fall inside the
/// distance balls around i of radius C(i,j) and D(i,j); each table
/// contributes its (n-2)-scaled chi-square unless a margin is empty.
double hhg_statistic(const DistanceMatrix& c, const DistanceMatrix& d);

}  // namespace dmgc
