#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmgc/depcorr.hpp"

namespace dmgc {

enum class Method { dmgc, dcorr, hhg };
enum class Embedding { diffusion, ase };

std::string to_string(Method m);
std::string to_string(Embedding e);
Method method_from_string(const std::string& s);
Embedding embedding_from_string(const std::string& s);

struct ScaleStatistic {
  double statistic = 0.0;
  int k_star = 0;
  int l_star = 0;
};

/// Statistics across diffusion times together with the smoothed-max choice.
struct TSweepResult {
  std::vector<ScaleStatistic> stats;  // indexed by t
  int t_star = 0;
  double statistic_at_star = 0.0;
};

struct TestReport {
  Method method = Method::dmgc;
  Embedding embedding = Embedding::diffusion;
  double statistic = 0.0;
  double p_value = 1.0;
  int t_star = 0;
  int q = 0;
  int k_star = 0;
  int l_star = 0;
  int permutations = 0;
  std::uint64_t seed = 0;
  std::vector<double> t_stats;  // observed statistic per diffusion time
};

/** Time step selected by a smoothed maximum.
 *
 *  A 3-point moving average (endpoints average their available neighbors)
 *  filters isolated spikes; the earliest argmax of the smoothed sequence is
 *  chosen when the smoothed maximum is positive, otherwise min(3, t_max) as
 *  the default time.
 */
int smoothed_max(const std::vector<double>& stats);

/// Statistic per diffusion time with the smoothed-max time selection.
/// `distances` holds one embedding distance matrix per time step; `d` is the
/// attribute distance matrix.
TSweepResult t_sweep(const std::vector<DistanceMatrix>& distances, const DistanceMatrix& d,
                     Method method);

/** Permutation test over the full time sweep.
 *
 *  The observed statistic is the t_sweep value; each null replicate jointly
 *  permutes rows and columns of the attribute distance matrix and re-runs
 *  the entire sweep, re-selecting the time step and scale. The p-value is
 *  (1 + #{null >= observed}) / (r + 1). Embedding distances are prepared
 *  once and reused across replicates; replicate seeds derive from the master
 *  seed by counter, so thread budget never changes results.
 */
TestReport permutation_test(const std::vector<DistanceMatrix>& distances, const DistanceMatrix& d,
                            Method method, int permutations, std::uint64_t seed, int threads = 1);

}  // namespace dmgc
