#include "dmgc/pipeline.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dmgc/errors.hpp"
#include "dmgc/parallel.hpp"
#include "dmgc/spectral.hpp"

namespace dmgc {

void RunConfig::validate() const {
  if (t_max < 0) throw ParameterError("t_max must be nonnegative");
  if (permutations < 1) throw ParameterError("permutation count must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (replicates < 1) throw ParameterError("replicate count must be at least 1");
  if (q_override && *q_override < 1) throw ParameterError("q must be positive");
  if (threads < 0) throw ParameterError("thread budget must be nonnegative");
}

namespace {

std::vector<DistanceMatrix> embedding_distances(const AdjacencyMatrix& k, const RunConfig& config,
                                                int* q_used) {
  std::vector<DistanceMatrix> distances;
  if (config.embedding == Embedding::diffusion) {
    SpectralDecomposition dec = decompose(normalized_laplacian(k));
    const int q = config.q_override.value_or(select_embedding_dimension(dec));
    distances.reserve(static_cast<std::size_t>(config.t_max) + 1);
    for (int t = 0; t <= config.t_max; ++t) {
      distances.push_back(diffusion_distance(diffusion_map(dec, t, q)));
    }
    *q_used = q;
  } else {
    SpectralDecomposition dec = decompose_symmetric(k.weights());
    const int q = config.q_override.value_or(select_embedding_dimension(dec));
    distances.push_back(diffusion_distance(spectral_embedding_coordinates(dec, q)));
    *q_used = q;
  }
  return distances;
}

}  // namespace

TestReport run_test(const AdjacencyMatrix& a, const Eigen::MatrixXd& x, const RunConfig& config) {
  config.validate();
  if (a.n() != static_cast<int>(x.rows())) {
    throw ParameterError("graph has " + std::to_string(a.n()) + " nodes but attributes have " +
                         std::to_string(x.rows()) + " rows");
  }
  if (a.n() < 4) {
    throw ParameterError("the test needs at least 4 nodes, got " + std::to_string(a.n()));
  }

  const AdjacencyMatrix k = symmetrize(a);
  int q = 0;
  const std::vector<DistanceMatrix> distances = embedding_distances(k, config, &q);
  const DistanceMatrix d = pairwise_euclidean(x);

  TestReport report = permutation_test(distances, d, config.method, config.permutations,
                                       config.seed, config.threads);
  report.embedding = config.embedding;
  report.q = q;
  return report;
}

Eigen::MatrixXd embed_coordinates(const AdjacencyMatrix& a, Embedding embedding, int t,
                                  std::optional<int> q_override, int* q_used) {
  const AdjacencyMatrix k = symmetrize(a);
  if (embedding == Embedding::diffusion) {
    SpectralDecomposition dec = decompose(normalized_laplacian(k));
    const int q = q_override.value_or(select_embedding_dimension(dec));
    if (q_used) *q_used = q;
    return diffusion_map(dec, t, q).coords;
  }
  SpectralDecomposition dec = decompose_symmetric(k.weights());
  const int q = q_override.value_or(select_embedding_dimension(dec));
  if (q_used) *q_used = q;
  return spectral_embedding_coordinates(dec, q).coords;
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::sbm3: return "sbm3";
    case Scenario::sbm_beta: return "sbm-beta";
    case Scenario::dcsbm: return "dcsbm";
    case Scenario::rdpg: return "rdpg";
    case Scenario::nonpsd: return "nonpsd";
  }
  return "sbm3";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "sbm3") return Scenario::sbm3;
  if (s == "sbm-beta") return Scenario::sbm_beta;
  if (s == "dcsbm") return Scenario::dcsbm;
  if (s == "rdpg") return Scenario::rdpg;
  if (s == "nonpsd") return Scenario::nonpsd;
  throw ParameterError("unknown scenario '" + s +
                       "' (expected sbm3, sbm-beta, dcsbm, rdpg or nonpsd)");
}

GraphSample sample_scenario(Scenario scenario, double param, int n, RandomSource& rng) {
  switch (scenario) {
    case Scenario::sbm3:
      return sample_sbm_3block(n, rng);
    case Scenario::sbm_beta:
      return sample_sbm_beta(n, param, rng);
    case Scenario::dcsbm:
      return sample_dcsbm(n, param, rng);
    case Scenario::rdpg: {
      const int id = static_cast<int>(param);
      if (static_cast<double>(id) != param) {
        throw ParameterError("rdpg relationship id must be an integer, got " +
                             std::to_string(param));
      }
      return sample_rdpg(n, id, rng);
    }
    case Scenario::nonpsd:
      return sample_nonpsd_sbm(n, param, rng);
  }
  throw ParameterError("unknown scenario");
}

namespace {

std::uint64_t grid_point_key(Scenario scenario, double param) {
  const std::uint64_t code = static_cast<std::uint64_t>(scenario) + 1;
  return detail::splitmix64(code * 0x9e3779b97f4a7c15ULL) ^ std::bit_cast<std::uint64_t>(param);
}

}  // namespace

PowerRow estimate_power(Scenario scenario, double param, int n, const RunConfig& config) {
  config.validate();
  const int m = config.replicates;
  const RandomSource point = RandomSource(config.seed).derive(grid_point_key(scenario, param));

  std::vector<std::uint8_t> rejected(static_cast<std::size_t>(m), 0);
  parallel_for(static_cast<std::size_t>(m), config.threads, [&](std::size_t rep) {
    RandomSource replicate = point.derive(rep);
    RandomSource sampler = replicate.derive(0);
    const GraphSample sample = sample_scenario(scenario, param, n, sampler);

    RunConfig local = config;
    local.threads = 1;
    local.seed = replicate.derive(1).seed();
    const TestReport report = run_test(sample.a, sample.x, local);
    rejected[rep] = report.p_value < config.alpha ? 1 : 0;
  });

  int count = 0;
  for (std::uint8_t r : rejected) count += r;

  PowerRow row;
  row.scenario = scenario;
  row.param = param;
  row.method = config.method;
  row.embedding = config.embedding;
  row.power = static_cast<double>(count) / m;
  row.replicates = m;
  row.permutations = config.permutations;
  row.seed = config.seed;
  return row;
}

std::vector<PowerRow> power_sweep(Scenario scenario, const std::vector<double>& grid, int n,
                                  const RunConfig& config) {
  if (grid.empty()) {
    throw ParameterError("power sweep needs at least one grid point");
  }
  std::vector<PowerRow> rows;
  rows.reserve(grid.size());
  for (double param : grid) {
    rows.push_back(estimate_power(scenario, param, n, config));
  }
  return rows;
}

}  // namespace dmgc
