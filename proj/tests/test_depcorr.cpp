#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "dmgc/depcorr.hpp"
#include "dmgc/errors.hpp"
#include "dmgc/graph.hpp"
#include "dmgc/random.hpp"
#include "dmgc/simgen.hpp"
#include "dmgc/spectral.hpp"
#include "oracles.hpp"

using dmgc::Centering;
using dmgc::DistanceMatrix;

namespace {

DistanceMatrix from_values(Eigen::MatrixXd m) {
  DistanceMatrix d;
  d.values = std::move(m);
  return d;
}

Eigen::MatrixXd random_points(int n, int p, dmgc::RandomSource& rng) {
  Eigen::MatrixXd x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < p; ++c) x(i, c) = rng.normal(0.0, 1.0);
  }
  return x;
}

DistanceMatrix random_distances(int n, dmgc::RandomSource& rng, int p = 2) {
  return dmgc::pairwise_euclidean(random_points(n, p, rng));
}

DistanceMatrix scalar_distances(const std::vector<double>& points) {
  Eigen::MatrixXd x(static_cast<int>(points.size()), 1);
  for (std::size_t i = 0; i < points.size(); ++i) x(static_cast<int>(i), 0) = points[i];
  return dmgc::pairwise_euclidean(x);
}

}  // namespace

TEST_CASE("pairwise distances of scalar points") {
  auto d = scalar_distances({0.0, 1.0, 3.0});
  CHECK(d.values(0, 2) == 3.0);
  CHECK(d.values(1, 2) == 2.0);
  CHECK(d.values(0, 1) == 1.0);
  CHECK(d.values(2, 0) == 3.0);
  CHECK(d.values.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identical rows give a zero distance matrix") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(4, 2, 1.5);
  auto d = dmgc::pairwise_euclidean(x);
  CHECK(d.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pairwise distances match the double-loop oracle") {
  dmgc::RandomSource rng(3);
  Eigen::MatrixXd x = random_points(6, 2, rng);
  auto d = dmgc::pairwise_euclidean(x);
  CHECK((d.values - oracle::pairwise(x)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((d.values - d.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pairwise distances reject non-finite input") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 1);
  x(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(dmgc::pairwise_euclidean(x), dmgc::DataError);
}

TEST_CASE("U-centering a constant distance matrix gives zeros") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(5, 5, 2.0);
  m.diagonal().setZero();
  auto centered = dmgc::center(from_values(m), Centering::unbiased);
  CHECK(centered.values.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("double-centered rows and columns sum to zero") {
  dmgc::RandomSource rng(5);
  auto d = random_distances(6, rng);
  auto centered = dmgc::center(d, Centering::biased);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(centered.values.row(i).sum()) < 1e-10);
    CHECK(std::abs(centered.values.col(i).sum()) < 1e-10);
  }
}

TEST_CASE("centering matches the term-by-term oracle") {
  dmgc::RandomSource rng(7);
  auto d = random_distances(5, rng);
  auto unbiased = dmgc::center(d, Centering::unbiased);
  auto biased = dmgc::center(d, Centering::biased);
  CHECK((unbiased.values - oracle::u_center(d.values)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((biased.values - oracle::double_center(d.values)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("U-centered off-diagonal row sums vanish") {
  dmgc::RandomSource rng(9);
  auto centered = dmgc::center(random_distances(8, rng), Centering::unbiased);
  for (int i = 0; i < 8; ++i) {
    double row = 0.0;
    for (int j = 0; j < 8; ++j) {
      if (j != i) row += centered.values(i, j);
    }
    CHECK(std::abs(row) < 1e-10);
    CHECK(centered.values(i, i) == 0.0);
  }
}

TEST_CASE("U-centering needs at least four points") {
  auto d = scalar_distances({0.0, 1.0, 2.0});
  CHECK_THROWS_AS(dmgc::center(d, Centering::unbiased), dmgc::ParameterError);
}

TEST_CASE("dcorr of a matrix with itself is one") {
  dmgc::RandomSource rng(11);
  auto d = random_distances(9, rng);
  CHECK(dmgc::dcorr(d, d, Centering::unbiased) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dmgc::dcorr(d, d, Centering::biased) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dcorr against a constant attribute is zero") {
  dmgc::RandomSource rng(13);
  auto c = random_distances(7, rng);
  auto d = scalar_distances({4.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0});
  CHECK(dmgc::dcorr(c, d, Centering::unbiased) == 0.0);
  CHECK(dmgc::dcorr(c, d, Centering::biased) == 0.0);
}

TEST_CASE("dcorr matches the brute-force oracle") {
  dmgc::RandomSource rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_distances(10, rng, 1 + trial % 3);
    auto d = random_distances(10, rng);
    CHECK(dmgc::dcorr(c, d, Centering::unbiased) ==
          doctest::Approx(oracle::dcorr_unbiased(c.values, d.values)).epsilon(1e-12));
    CHECK(dmgc::dcorr(c, d, Centering::biased) ==
          doctest::Approx(oracle::dcorr_biased(c.values, d.values)).epsilon(1e-12));
  }
}

TEST_CASE("dcorr validates dimensions") {
  dmgc::RandomSource rng(19);
  auto c = random_distances(6, rng);
  auto d = random_distances(7, rng);
  CHECK_THROWS_AS(dmgc::dcorr(c, d), dmgc::ParameterError);
}

TEST_CASE("neighbor ranks of scalar points") {
  auto ranks = dmgc::nearest_neighbor_ranks(scalar_distances({0.0, 1.0, 3.0}));
  // Relative to the point at 3: the point at 1 is nearest, the point at 0 next.
  CHECK(ranks.ranks(2, 2) == 0);
  CHECK(ranks.ranks(1, 2) == 1);
  CHECK(ranks.ranks(0, 2) == 2);
}

TEST_CASE("neighbor ranks break ties by node index") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 1);
  auto ranks = dmgc::nearest_neighbor_ranks(dmgc::pairwise_euclidean(x));
  for (int j = 0; j < 4; ++j) {
    CHECK(ranks.ranks(j, j) == 0);
    int expected = 1;
    for (int i = 0; i < 4; ++i) {
      if (i == j) continue;
      CHECK(ranks.ranks(i, j) == expected);
      ++expected;
    }
  }
}

TEST_CASE("every rank column is a permutation") {
  dmgc::RandomSource rng(23);
  auto ranks = dmgc::nearest_neighbor_ranks(random_distances(8, rng));
  for (int j = 0; j < 8; ++j) {
    std::vector<bool> seen(8, false);
    for (int i = 0; i < 8; ++i) {
      int r = ranks.ranks(i, j);
      REQUIRE(r >= 0);
      REQUIRE(r < 8);
      CHECK_FALSE(seen[static_cast<std::size_t>(r)]);
      seen[static_cast<std::size_t>(r)] = true;
    }
    CHECK(ranks.ranks(j, j) == 0);
  }
}

TEST_CASE("the last local-map entry is the global dcorr") {
  dmgc::RandomSource rng(29);
  auto c = random_distances(12, rng);
  auto d = random_distances(12, rng, 1);
  auto map = dmgc::local_correlation_map(c, d);
  CHECK(map.global() == doctest::Approx(dmgc::dcorr(c, d)).epsilon(1e-10));
}

TEST_CASE("the local map matches the masked-matrix oracle") {
  dmgc::RandomSource rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_distances(6, rng);
    auto d = random_distances(6, rng, 1);
    auto map = dmgc::local_correlation_map(c, d);
    Eigen::MatrixXd expected = oracle::local_map(c.values, d.values);
    REQUIRE(map.kappa == expected.rows());
    REQUIRE(map.gamma == expected.cols());
    CHECK((map.values - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("the local map handles tied attribute distances") {
  dmgc::RandomSource rng(37);
  auto c = random_distances(10, rng);
  auto d = scalar_distances({1, 1, 2, 2, 3, 3, 1, 2, 3, 1});
  auto map = dmgc::local_correlation_map(c, d);
  CHECK(map.gamma == 3);  // attribute distances take values {0, 1, 2}
  Eigen::MatrixXd expected = oracle::local_map(c.values, d.values);
  CHECK((map.values - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(map.global() == doctest::Approx(dmgc::dcorr(c, d)).epsilon(1e-10));
}

TEST_CASE("perfectly linear data saturates the global entry") {
  std::vector<double> points(10);
  for (int i = 0; i < 10; ++i) points[static_cast<std::size_t>(i)] = i;
  auto d = scalar_distances(points);
  auto map = dmgc::local_correlation_map(d, d);
  CHECK(map.global() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(map.values.maxCoeff() <= map.global() + 1e-12);
}

TEST_CASE("local map entries stay in [-1, 1] and transpose with the inputs") {
  dmgc::RandomSource rng(41);
  auto c = random_distances(9, rng);
  auto d = random_distances(9, rng, 1);
  auto map_cd = dmgc::local_correlation_map(c, d);
  auto map_dc = dmgc::local_correlation_map(d, c);
  CHECK(map_cd.values.maxCoeff() <= 1.0);
  CHECK(map_cd.values.minCoeff() >= -1.0);
  REQUIRE(map_cd.kappa == map_dc.gamma);
  REQUIRE(map_cd.gamma == map_dc.kappa);
  CHECK((map_cd.values - map_dc.values.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dependence statistics ignore distance scale") {
  dmgc::RandomSource rng(43);
  auto c = random_distances(11, rng);
  auto d = random_distances(11, rng, 1);
  auto c_scaled = from_values((c.values * 7.5).eval());

  CHECK(dmgc::dcorr(c_scaled, d) == doctest::Approx(dmgc::dcorr(c, d)).epsilon(1e-10));

  auto map = dmgc::local_correlation_map(c, d);
  auto map_scaled = dmgc::local_correlation_map(c_scaled, d);
  CHECK((map.values - map_scaled.values).cwiseAbs().maxCoeff() < 1e-10);

  auto mgc = dmgc::mgc_statistic(map, 11);
  auto mgc_scaled = dmgc::mgc_statistic(map_scaled, 11);
  CHECK(mgc.statistic == doctest::Approx(mgc_scaled.statistic).epsilon(1e-10));
  CHECK(mgc.k_star == mgc_scaled.k_star);
  CHECK(mgc.l_star == mgc_scaled.l_star);

  CHECK(dmgc::hhg_statistic(c_scaled, d) ==
        doctest::Approx(dmgc::hhg_statistic(c, d)).epsilon(1e-12));
}

TEST_CASE("the local map validates dimensions") {
  dmgc::RandomSource rng(47);
  auto c = random_distances(6, rng);
  auto d = random_distances(7, rng);
  CHECK_THROWS_AS(dmgc::local_correlation_map(c, d), dmgc::ParameterError);
}

TEST_CASE("mgc falls back to the global entry when it is the maximum") {
  dmgc::LocalCorrelationMap map;
  map.kappa = 4;
  map.gamma = 4;
  map.values = Eigen::MatrixXd::Constant(4, 4, 0.1);
  map.values(3, 3) = 0.5;
  auto result = dmgc::mgc_statistic(map, 20);
  CHECK(result.statistic == 0.5);
  CHECK(result.k_star == 4);
  CHECK(result.l_star == 4);
}

TEST_CASE("an isolated spike is filtered out") {
  dmgc::LocalCorrelationMap map;
  map.kappa = 10;
  map.gamma = 10;
  map.values = Eigen::MatrixXd::Zero(10, 10);
  map.values(9, 9) = 0.01;  // global entry
  map.values(4, 4) = 0.9;   // lone spike far above everything else
  auto result = dmgc::mgc_statistic(map, 30);
  CHECK(result.statistic == 0.01);
  CHECK(result.k_star == 10);
  CHECK(result.l_star == 10);
}

TEST_CASE("a large significant region is selected") {
  dmgc::LocalCorrelationMap map;
  map.kappa = 12;
  map.gamma = 12;
  map.values = Eigen::MatrixXd::Zero(12, 12);
  map.values(11, 11) = 0.05;
  for (int k = 2; k < 12; ++k) {
    for (int l = 3; l < 9; ++l) map.values(k, l) = 0.3;
  }
  map.values(5, 5) = 0.8;
  auto result = dmgc::mgc_statistic(map, 5);  // region has 60 cells >= 2n = 10
  CHECK(result.statistic == 0.8);
  CHECK(result.k_star == 6);
  CHECK(result.l_star == 6);
}

TEST_CASE("a nonlinear block model picks a non-global attribute scale") {
  // Strongly non-monotone three-block draw; the optimal neighborhood stays
  // below the full attribute scale.
  dmgc::RandomSource rng(106);
  auto sample = dmgc::sample_sbm_beta(100, 0.7, rng);
  auto dec = dmgc::decompose(dmgc::normalized_laplacian(dmgc::symmetrize(sample.a)));
  auto dist = dmgc::diffusion_distance(dmgc::diffusion_map(dec, 2, dmgc::select_embedding_dimension(dec)));
  auto d = dmgc::pairwise_euclidean(sample.x);
  auto map = dmgc::local_correlation_map(dist, d);
  auto result = dmgc::mgc_statistic(map, 100);
  CHECK(result.l_star < map.gamma);
}

TEST_CASE("hhg against a constant attribute is zero") {
  dmgc::RandomSource rng(53);
  auto c = random_distances(7, rng);
  auto d = scalar_distances({2, 2, 2, 2, 2, 2, 2});
  CHECK(dmgc::hhg_statistic(c, d) == 0.0);
}

TEST_CASE("hhg saturates when both sides agree") {
  auto c = scalar_distances({0.0, 1.1, 2.9, 5.2, 9.0});
  const double expected = (5.0 - 2.0) * oracle::hhg_valid_pairs(c.values, c.values);
  CHECK(dmgc::hhg_statistic(c, c) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(oracle::hhg(c.values, c.values) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("hhg matches the counting oracle") {
  dmgc::RandomSource rng(59);
  for (int trial = 0; trial < 8; ++trial) {
    auto c = random_distances(6, rng);
    auto d = random_distances(6, rng, 1);
    CHECK(dmgc::hhg_statistic(c, d) ==
          doctest::Approx(oracle::hhg(c.values, d.values)).epsilon(1e-10));
  }
}

TEST_CASE("hhg matches the counting oracle on tied data") {
  dmgc::RandomSource rng(61);
  auto c = random_distances(9, rng);
  auto d = scalar_distances({1, 2, 1, 3, 2, 1, 3, 3, 2});
  CHECK(dmgc::hhg_statistic(c, d) ==
        doctest::Approx(oracle::hhg(c.values, d.values)).epsilon(1e-10));
  CHECK(dmgc::hhg_statistic(d, c) ==
        doctest::Approx(oracle::hhg(d.values, c.values)).epsilon(1e-10));
}

TEST_CASE("hhg validates input") {
  dmgc::RandomSource rng(67);
  auto c = random_distances(5, rng);
  auto d = random_distances(6, rng);
  CHECK_THROWS_AS(dmgc::hhg_statistic(c, d), dmgc::ParameterError);
  auto tiny = scalar_distances({0.0, 1.0});
  CHECK_THROWS_AS(dmgc::hhg_statistic(tiny, tiny), dmgc::ParameterError);
}

TEST_CASE("unbiased dcorr is centered at zero under independence") {
  dmgc::RandomSource rng(71);
  double total = 0.0;
  const int draws = 200;
  for (int i = 0; i < draws; ++i) {
    Eigen::MatrixXd u = random_points(100, 1, rng);
    Eigen::MatrixXd x = random_points(100, 1, rng);
    total += dmgc::dcorr(dmgc::pairwise_euclidean(u), dmgc::pairwise_euclidean(x));
  }
  CHECK(std::abs(total / draws) < 0.01);
}
