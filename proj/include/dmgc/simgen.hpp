#pragma once

#include <Eigen/Dense>

#include "dmgc/graph.hpp"
#include "dmgc/random.hpp"

namespace dmgc {

/// One synthetic draw: a binary symmetric adjacency matrix with zero
/// diagonal, nodal attributes, and the latent values used while generating.
struct GraphSample {
  AdjacencyMatrix a;
  Eigen::MatrixXd x;  // n x p attributes
  Eigen::MatrixXd z;  // latent labels/positions, one column per latent
};

/// Three blocks with within-probability 0.5 and between-probabilities 0.2
/// (labels one apart) and 0.4 (labels two apart). The attribute is the block
/// label, kept with probability 0.5 and otherwise flipped uniformly to one
/// of the other two labels.
GraphSample sample_sbm_3block(int n, RandomSource& rng);

/// Same three-block model with the labels-two-apart probability replaced by
/// beta in (0, 1); beta = 0.4 reproduces sample_sbm_3block.
GraphSample sample_sbm_beta(int n, double beta, RandomSource& rng);

/// Two blocks with degree factors C_i ~ Uniform(1 - tau, 1 + tau); edge
/// probability 0.2 C_i C_j within and 0.05 C_i C_j between blocks. The
/// attribute equals the label with probability 0.6, otherwise the other one.
GraphSample sample_dcsbm(int n, double tau, RandomSource& rng);

struct RelationshipSample {
  Eigen::VectorXd w;
  Eigen::VectorXd x;
};

/// The twenty bivariate relationships driving the latent-position graphs:
///  1 linear        2 exponential     3 cubic          4 joint normal
///  5 step          6 quadratic       7 w-shape        8 spiral
///  9 bernoulli    10 logarithm      11 fourth root   12 sine (period 4 pi)
/// 13 sine (16 pi) 14 square         15 two parabolas 16 circle
/// 17 ellipse      18 diamond        19 multiplicative noise
/// 20 independent marginals
RelationshipSample relationship(int id, int n, RandomSource& rng);

/// Latent-position graph: (w, x) from the chosen relationship are min-max
/// scaled to [0, 1] separately; edges are Bernoulli(W_i * W_j) and the
/// scaled x becomes the attribute.
GraphSample sample_rdpg(int n, int id, RandomSource& rng);

/// Two blocks with within-probability 0.5 - eps and between-probability 0.3;
/// at eps = 0.2 connectivity is independent of the labels and for eps > 0.2
/// the block probability matrix has a negative eigenvalue. The attribute is
/// Bernoulli(label / 3).
GraphSample sample_nonpsd_sbm(int n, double eps, RandomSource& rng);

}  // namespace dmgc
