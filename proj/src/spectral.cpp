#include "dmgc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dmgc/errors.hpp"

namespace dmgc {

namespace {

// Integer power by repeated multiplication; base^0 == 1 for every base.
double ipow(double base, int exp) {
  double r = 1.0;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

void canonicalize_signs(Eigen::MatrixXd& vectors) {
  constexpr double kZeroTol = 1e-12;
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      double v = vectors(i, j);
      if (std::abs(v) > kZeroTol) {
        if (v < 0.0) vectors.col(j) = -vectors.col(j);
        break;
      }
    }
  }
}

}  // namespace

SpectralDecomposition decompose_symmetric(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw ParameterError("eigendecomposition requires a square matrix");
  }
  const int n = static_cast<int>(matrix.rows());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver failed to converge (n = " +
                         std::to_string(n) +
                         ", frobenius norm = " + std::to_string(matrix.norm()) +
                         ", max |entry| = " +
                         std::to_string(matrix.cwiseAbs().maxCoeff()) + ")");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd& raw = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    double aa = std::abs(raw(a)), ab = std::abs(raw(b));
    if (aa != ab) return aa > ab;
    return raw(a) > raw(b);
  });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues(j) = raw(order[j]);
    out.eigenvectors.col(j) = solver.eigenvectors().col(order[j]);
  }
  canonicalize_signs(out.eigenvectors);
  return out;
}

SpectralDecomposition decompose(const LaplacianMatrix& l) {
  return decompose_symmetric(l.values);
}

DiffusionMap diffusion_map(const SpectralDecomposition& d, int t, int q) {
  const int n = d.n();
  if (q < 1 || q > n) {
    throw ParameterError("embedding dimension q = " + std::to_string(q) +
                         " must be in [1, " + std::to_string(n) + "]");
  }
  if (t < 0) {
    throw ParameterError("diffusion time t must be nonnegative");
  }

  DiffusionMap map;
  map.t = t;
  map.q = q;
  map.coords.resize(n, q);
  for (int j = 0; j < q; ++j) {
    map.coords.col(j) = ipow(d.eigenvalues(j), t) * d.eigenvectors.col(j);
  }
  return map;
}

DistanceMatrix diffusion_distance(const DiffusionMap& u) {
  const int n = u.n();
  DistanceMatrix dist;
  dist.values.setZero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      double d = (u.coords.row(i) - u.coords.row(j)).norm();
      dist.values(i, j) = d;
      dist.values(j, i) = d;
    }
  }
  return dist;
}

namespace {

// Best split of a nonincreasing sequence under the shared-variance
// two-Gaussian profile likelihood. Returns the 1-based prefix length.
int first_elbow(const double* values, int m) {
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += values[i];

  int best = 1;
  double best_ll = -std::numeric_limits<double>::infinity();
  bool best_degenerate = false;

  double head = 0.0;
  for (int c = 1; c <= m; ++c) {
    head += values[c - 1];
    double mu1 = head / c;
    double ss = 0.0;
    for (int i = 0; i < c; ++i) ss += (values[i] - mu1) * (values[i] - mu1);
    if (c < m) {
      double mu2 = (total - head) / (m - c);
      for (int i = c; i < m; ++i) ss += (values[i] - mu2) * (values[i] - mu2);
    }
    double variance = ss / m;
    // A zero-variance split fits perfectly; earliest such split wins.
    double scale = std::max(std::abs(values[0]), 1.0);
    if (variance <= scale * scale * 1e-30) {
      if (!best_degenerate) {
        best = c;
        best_degenerate = true;
      }
      continue;
    }
    if (best_degenerate) continue;
    double ll = -0.5 * m * (std::log(2.0 * M_PI * variance) + 1.0);
    if (ll > best_ll) {
      best_ll = ll;
      best = c;
    }
  }
  return best;
}

}  // namespace

std::vector<int> zhu_ghodsi_elbows(const std::vector<double>& values, int n_elbows) {
  if (values.size() < 2) {
    throw ParameterError("elbow selection needs at least 2 values, got " +
                         std::to_string(values.size()));
  }
  if (n_elbows < 1) {
    throw ParameterError("n_elbows must be positive");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw ParameterError("elbow selection expects finite nonnegative values");
    }
    if (i > 0 && values[i] > values[i - 1] + 1e-12) {
      throw ParameterError("elbow selection expects a nonincreasing sequence");
    }
  }

  std::vector<int> elbows;
  int offset = 0;
  int remaining = static_cast<int>(values.size());
  for (int e = 0; e < n_elbows && remaining >= 2; ++e) {
    int c = first_elbow(values.data() + offset, remaining);
    offset += c;
    remaining -= c;
    elbows.push_back(offset);
  }
  return elbows;
}

int select_embedding_dimension(const SpectralDecomposition& d) {
  std::vector<double> scree(static_cast<std::size_t>(d.n()));
  for (int i = 0; i < d.n(); ++i) scree[static_cast<std::size_t>(i)] = std::abs(d.eigenvalues(i));
  auto elbows = zhu_ghodsi_elbows(scree, 2);
  return elbows.back();
}

DiffusionMap spectral_embedding_coordinates(const SpectralDecomposition& d, int q) {
  const int n = d.n();
  if (q < 1 || q > n) {
    throw ParameterError("embedding dimension q = " + std::to_string(q) +
                         " must be in [1, " + std::to_string(n) + "]");
  }
  DiffusionMap map;
  map.t = 1;
  map.q = q;
  map.coords.resize(n, q);
  for (int j = 0; j < q; ++j) {
    map.coords.col(j) = std::sqrt(std::abs(d.eigenvalues(j))) * d.eigenvectors.col(j);
  }
  return map;
}

DiffusionMap adjacency_spectral_embedding(const AdjacencyMatrix& a, int q) {
  if (a.directed()) {
    throw ParameterError("adjacency spectral embedding requires a symmetric matrix");
  }
  return spectral_embedding_coordinates(decompose_symmetric(a.weights()), q);
}

}  // namespace dmgc
