#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dmgc/dmgc.hpp"
#include "dmgc/graph.hpp"
#include "dmgc/simgen.hpp"

namespace dmgc {

struct RunConfig {
  Method method = Method::dmgc;
  Embedding embedding = Embedding::diffusion;
  int t_max = 10;
  std::optional<int> q_override;
  int permutations = 500;
  double alpha = 0.05;
  int replicates = 100;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = auto

  void validate() const;
};

/// End-to-end test: symmetrize, normalized Laplacian, eigendecomposition,
/// dimension selection (second scree elbow unless overridden), embedding
/// distances for every time step, then the permutation test. With the ase
/// embedding a single spectral-embedding distance matrix replaces the sweep.
TestReport run_test(const AdjacencyMatrix& a, const Eigen::MatrixXd& x, const RunConfig& config);

/// Embedding coordinates as the CLI's embed command emits them. Returns the
/// coordinate matrix; `q_used` reports the selected dimension.
Eigen::MatrixXd embed_coordinates(const AdjacencyMatrix& a, Embedding embedding, int t,
                                  std::optional<int> q_override, int* q_used = nullptr);

enum class Scenario { sbm3, sbm_beta, dcsbm, rdpg, nonpsd };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// Draws one synthetic instance. The parameter means beta for sbm_beta, tau
/// for dcsbm, the relationship id for rdpg, eps for nonpsd and is ignored
/// for sbm3.
GraphSample sample_scenario(Scenario scenario, double param, int n, RandomSource& rng);

struct PowerRow {
  Scenario scenario = Scenario::sbm3;
  double param = 0.0;
  Method method = Method::dmgc;
  Embedding embedding = Embedding::diffusion;
  double power = 0.0;
  int replicates = 0;
  int permutations = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo power at one parameter value: the fraction of replicates
/// whose p-value falls below alpha. Replicate seeds derive from
/// (seed, scenario, param, replicate index), so a single grid point
/// reproduces the matching sweep row exactly.
PowerRow estimate_power(Scenario scenario, double param, int n, const RunConfig& config);

std::vector<PowerRow> power_sweep(Scenario scenario, const std::vector<double>& grid, int n,
                                  const RunConfig& config);

}  // namespace dmgc
