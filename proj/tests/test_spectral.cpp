#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "dmgc/errors.hpp"
#include "dmgc/graph.hpp"
#include "dmgc/random.hpp"
#include "dmgc/simgen.hpp"
#include "dmgc/spectral.hpp"
#include "oracles.hpp"

using dmgc::AdjacencyMatrix;
using dmgc::LaplacianMatrix;

namespace {

LaplacianMatrix path3_laplacian() {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.0;
  return dmgc::normalized_laplacian(AdjacencyMatrix::from_weights(w));
}

LaplacianMatrix sbm_laplacian(int n, std::uint64_t seed) {
  dmgc::RandomSource rng(seed);
  auto sample = dmgc::sample_sbm_3block(n, rng);
  return dmgc::normalized_laplacian(dmgc::symmetrize(sample.a));
}

}  // namespace

TEST_CASE("3-path eigenvalues are 1, -1, 0 in magnitude order") {
  auto dec = dmgc::decompose(path3_laplacian());
  REQUIRE(dec.n() == 3);
  CHECK(dec.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dec.eigenvalues(1) == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(dec.eigenvalues(2) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("zero matrix decomposes to all-zero eigenvalues") {
  LaplacianMatrix l;
  l.values = Eigen::MatrixXd::Zero(4, 4);
  auto dec = dmgc::decompose(l);
  CHECK(dec.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decomposition reconstructs the Laplacian") {
  auto l = sbm_laplacian(40, 5);
  auto dec = dmgc::decompose(l);
  Eigen::MatrixXd rebuilt =
      dec.eigenvectors * dec.eigenvalues.asDiagonal() * dec.eigenvectors.transpose();
  CHECK((rebuilt - l.values).norm() < 1e-8);

  Eigen::MatrixXd gram = dec.eigenvectors.transpose() * dec.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("eigenvector signs are canonical") {
  auto dec = dmgc::decompose(sbm_laplacian(25, 9));
  for (int j = 0; j < dec.n(); ++j) {
    for (int i = 0; i < dec.n(); ++i) {
      double v = dec.eigenvectors(i, j);
      if (std::abs(v) > 1e-12) {
        CHECK(v > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("3-path diffusion coordinates at t=1, q=1") {
  auto map = dmgc::diffusion_map(dmgc::decompose(path3_laplacian()), 1, 1);
  CHECK(map.coords(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(map.coords(1, 0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-10));
  CHECK(map.coords(2, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("t=0 coordinates equal the leading eigenvector columns") {
  auto dec = dmgc::decompose(sbm_laplacian(20, 3));
  auto map = dmgc::diffusion_map(dec, 0, 5);
  CHECK((map.coords - dec.eigenvectors.leftCols(5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trailing coordinates decay geometrically in t") {
  // K3 spectrum is (1, -1/2, -1/2): columns beyond the first halve each step.
  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(3, 3, 1.0);
  w.diagonal().setZero();
  auto dec = dmgc::decompose(dmgc::normalized_laplacian(AdjacencyMatrix::from_weights(w)));
  double previous = dmgc::diffusion_map(dec, 1, 3).coords.col(1).norm();
  for (int t = 2; t <= 5; ++t) {
    double current = dmgc::diffusion_map(dec, t, 3).coords.col(1).norm();
    CHECK(current < previous);
    CHECK(current == doctest::Approx(previous / 2.0).epsilon(1e-10));
    previous = current;
  }
}

TEST_CASE("diffusion map parameter validation") {
  auto dec = dmgc::decompose(path3_laplacian());
  CHECK_THROWS_AS(dmgc::diffusion_map(dec, 1, 4), dmgc::ParameterError);
  CHECK_THROWS_AS(dmgc::diffusion_map(dec, 1, 0), dmgc::ParameterError);
  CHECK_THROWS_AS(dmgc::diffusion_map(dec, -1, 1), dmgc::ParameterError);
}

TEST_CASE("3-path diffusion distances at t=1, q=1") {
  auto dist = dmgc::diffusion_distance(dmgc::diffusion_map(dmgc::decompose(path3_laplacian()), 1, 1));
  CHECK(dist.values(0, 2) <= 1e-15);
  const double expected = std::sqrt(2.0) / 2.0 - 0.5;
  CHECK(dist.values(0, 1) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(dist.values(1, 2) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("duplicate rows give zero distance") {
  dmgc::DiffusionMap map;
  map.t = 1;
  map.q = 2;
  map.coords.resize(3, 2);
  map.coords << 1.0, 2.0, 1.0, 2.0, 0.0, 0.5;
  auto dist = dmgc::diffusion_distance(map);
  CHECK(dist.values(0, 1) == 0.0);
}

TEST_CASE("diffusion distance is invariant to sign flips") {
  auto dec = dmgc::decompose(sbm_laplacian(15, 21));
  auto map = dmgc::diffusion_map(dec, 2, 4);
  auto dist = dmgc::diffusion_distance(map);
  auto flipped = map;
  flipped.coords.col(0) = -flipped.coords.col(0);
  flipped.coords.col(2) = -flipped.coords.col(2);
  auto dist_flipped = dmgc::diffusion_distance(flipped);
  CHECK((dist.values - dist_flipped.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diffusion map rows satisfy the sqrt(q) norm bound") {
  auto dec = dmgc::decompose(sbm_laplacian(30, 13));
  for (int t = 0; t <= 10; ++t) {
    for (int q : {1, 3, 10, 30}) {
      auto map = dmgc::diffusion_map(dec, t, q);
      CHECK(map.coords.rowwise().norm().maxCoeff() <= std::sqrt(double(q)) + 1e-12);
    }
  }
}

TEST_CASE("first elbow matches the spelled-out cases") {
  CHECK(dmgc::zhu_ghodsi_elbows({100.0, 1.0, 1.0, 1.0}, 1).front() == 1);
  CHECK(dmgc::zhu_ghodsi_elbows({10.0, 9.8, 1.0, 0.9, 0.85, 0.8}, 1).front() == 2);
  CHECK(dmgc::zhu_ghodsi_elbows({2.0, 2.0, 2.0, 2.0}, 1).front() == 1);
  CHECK(oracle::first_elbow({100.0, 1.0, 1.0, 1.0}) == 1);
  CHECK(oracle::first_elbow({10.0, 9.8, 1.0, 0.9, 0.85, 0.8}) == 2);
}

TEST_CASE("elbow selection agrees with the profile-likelihood oracle") {
  dmgc::RandomSource rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.uniform_int(4, 40);
    std::vector<double> values(m);
    for (double& v : values) v = rng.uniform(0.0, 10.0);
    std::sort(values.rbegin(), values.rend());
    CHECK(dmgc::zhu_ghodsi_elbows(values, 1).front() == oracle::first_elbow(values));
  }
}

TEST_CASE("subsequent elbows recurse on the tail") {
  std::vector<double> values = {100.0, 50.0, 49.0, 1.0, 0.9, 0.8};
  auto elbows = dmgc::zhu_ghodsi_elbows(values, 3);
  REQUIRE(elbows.size() >= 2);
  const int first = elbows[0];
  std::vector<double> tail(values.begin() + first, values.end());
  CHECK(elbows[1] == first + oracle::first_elbow(tail));
}

TEST_CASE("elbow selection validates input") {
  CHECK_THROWS_AS(dmgc::zhu_ghodsi_elbows({1.0}, 1), dmgc::ParameterError);
  CHECK_THROWS_AS(dmgc::zhu_ghodsi_elbows({1.0, 2.0, 3.0}, 1), dmgc::ParameterError);
}

TEST_CASE("pipeline dimension is the second elbow when available") {
  auto dec = dmgc::decompose(sbm_laplacian(60, 17));
  std::vector<double> scree(60);
  for (int i = 0; i < 60; ++i) scree[i] = std::abs(dec.eigenvalues(i));
  auto elbows = dmgc::zhu_ghodsi_elbows(scree, 2);
  int expected = elbows.back();
  CHECK(dmgc::select_embedding_dimension(dec) == expected);
  CHECK(expected >= 1);
  CHECK(expected <= 60);
}

TEST_CASE("spectral embedding recovers a constant rank-one latent vector") {
  const int n = 6;
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::MatrixXd w = v * v.transpose();
  w.diagonal().setZero();
  auto map = dmgc::adjacency_spectral_embedding(AdjacencyMatrix::from_weights(w), 1);
  Eigen::VectorXd direction = map.coords.col(0) / map.coords.col(0).norm();
  CHECK((direction - v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral embedding separates two planted blocks") {
  dmgc::RandomSource rng(41);
  const int n = 60;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = (i < n / 2) == (j < n / 2);
      if (rng.bernoulli(same ? 0.6 : 0.05)) w(i, j) = w(j, i) = 1.0;
    }
  }
  auto map = dmgc::adjacency_spectral_embedding(AdjacencyMatrix::from_weights(w), 2);

  double within = 0.0, between = 0.0;
  int within_count = 0, between_count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (map.coords.row(i) - map.coords.row(j)).norm();
      if ((i < n / 2) == (j < n / 2)) {
        within += d;
        ++within_count;
      } else {
        between += d;
        ++between_count;
      }
    }
  }
  CHECK(within / within_count * 2.0 < between / between_count);
}

TEST_CASE("full-dimension spectral embedding keeps all coordinates") {
  dmgc::RandomSource rng(43);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(7, 7);
  for (int i = 0; i < 7; ++i) {
    for (int j = i + 1; j < 7; ++j) {
      if (rng.bernoulli(0.5)) w(i, j) = w(j, i) = 1.0;
    }
  }
  auto a = AdjacencyMatrix::from_weights(w);
  auto dec = dmgc::decompose_symmetric(a.weights());
  auto map = dmgc::adjacency_spectral_embedding(a, 7);
  Eigen::MatrixXd direct = oracle::pairwise(map.coords);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      double expected = 0.0;
      for (int c = 0; c < 7; ++c) {
        double di = std::sqrt(std::abs(dec.eigenvalues(c))) * dec.eigenvectors(i, c);
        double dj = std::sqrt(std::abs(dec.eigenvalues(c))) * dec.eigenvectors(j, c);
        expected += (di - dj) * (di - dj);
      }
      CHECK(direct(i, j) == doctest::Approx(std::sqrt(expected)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(dmgc::adjacency_spectral_embedding(a, 8), dmgc::ParameterError);
}

TEST_CASE("relabeling the graph permutes diffusion distances") {
  dmgc::RandomSource rng(47);
  auto sample = dmgc::sample_sbm_3block(30, rng);
  auto dec = dmgc::decompose(dmgc::normalized_laplacian(dmgc::symmetrize(sample.a)));
  const int q = dmgc::select_embedding_dimension(dec);

  std::vector<int> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  Eigen::MatrixXd pw(30, 30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) pw(i, j) = sample.a.weights()(perm[i], perm[j]);
  }
  auto pdec = dmgc::decompose(
      dmgc::normalized_laplacian(dmgc::symmetrize(AdjacencyMatrix::from_weights(pw))));

  for (int t : {0, 1, 2, 5}) {
    auto dist = dmgc::diffusion_distance(dmgc::diffusion_map(dec, t, q));
    auto pdist = dmgc::diffusion_distance(dmgc::diffusion_map(pdec, t, q));
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < 30; ++j) {
        worst = std::max(worst, std::abs(pdist.values(i, j) - dist.values(perm[i], perm[j])));
      }
    }
    CHECK(worst < 1e-8);
  }
}
