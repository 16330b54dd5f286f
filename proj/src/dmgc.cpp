#include "dmgc/dmgc.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "dmgc/errors.hpp"
#include "dmgc/parallel.hpp"
#include "dmgc/random.hpp"

namespace dmgc {

std::string to_string(Method m) {
  switch (m) {
    case Method::dmgc: return "dmgc";
    case Method::dcorr: return "dcorr";
    case Method::hhg: return "hhg";
  }
  return "dmgc";
}

std::string to_string(Embedding e) {
  return e == Embedding::diffusion ? "diffusion" : "ase";
}

Method method_from_string(const std::string& s) {
  if (s == "dmgc") return Method::dmgc;
  if (s == "dcorr") return Method::dcorr;
  if (s == "hhg") return Method::hhg;
  throw ParameterError("unknown method '" + s + "' (expected dmgc, dcorr or hhg)");
}

Embedding embedding_from_string(const std::string& s) {
  if (s == "diffusion") return Embedding::diffusion;
  if (s == "ase") return Embedding::ase;
  throw ParameterError("unknown embedding '" + s + "' (expected diffusion or ase)");
}

int smoothed_max(const std::vector<double>& stats) {
  if (stats.empty()) {
    throw ParameterError("smoothed_max needs at least one statistic");
  }
  const int count = static_cast<int>(stats.size());
  // Window averages are compared as fractions (cross-multiplied) so that
  // equal statistics tie exactly and resolve to the smallest time.
  int best = 0;
  double best_sum = 0.0;
  int best_terms = 0;
  for (int t = 0; t < count; ++t) {
    double sum = stats[static_cast<std::size_t>(t)];
    int terms = 1;
    if (t > 0) {
      sum += stats[static_cast<std::size_t>(t - 1)];
      ++terms;
    }
    if (t + 1 < count) {
      sum += stats[static_cast<std::size_t>(t + 1)];
      ++terms;
    }
    if (best_terms == 0 || sum * best_terms > best_sum * terms) {
      best = t;
      best_sum = sum;
      best_terms = terms;
    }
  }
  if (best_sum > 0.0) return best;
  return std::min(3, count - 1);
}

namespace {

// Everything a sweep evaluation needs, prepared once so null replicates only
// reindex the attribute side.
struct SweepContext {
  Method method = Method::dmgc;
  int n = 0;
  std::vector<PreparedSide> c_sides;            // per t (dmgc, dcorr)
  std::vector<SideMoments> c_moments;           // per t
  PreparedSide d_side;                          // (dmgc, dcorr)
  SideMoments d_moments;
  const std::vector<DistanceMatrix>* c_raw = nullptr;  // hhg
  const DistanceMatrix* d_raw = nullptr;               // hhg
};

SweepContext make_context(const std::vector<DistanceMatrix>& distances, const DistanceMatrix& d,
                          Method method) {
  if (distances.empty()) {
    throw ParameterError("t_sweep needs at least one embedding distance matrix");
  }
  const int n = d.n();
  for (const auto& c : distances) {
    if (c.n() != n) {
      throw ParameterError("t_sweep: embedding and attribute distances have mismatched sizes " +
                           std::to_string(c.n()) + " vs " + std::to_string(n));
    }
  }

  SweepContext ctx;
  ctx.method = method;
  ctx.n = n;
  if (method == Method::hhg) {
    if (n < 3) throw ParameterError("hhg needs n >= 3");
    ctx.c_raw = &distances;
    ctx.d_raw = &d;
    return ctx;
  }
  ctx.c_sides.reserve(distances.size());
  ctx.c_moments.reserve(distances.size());
  for (const auto& c : distances) {
    ctx.c_sides.push_back(prepare_side(c));
    ctx.c_moments.push_back(side_moments(ctx.c_sides.back()));
  }
  ctx.d_side = prepare_side(d);
  ctx.d_moments = side_moments(ctx.d_side);
  return ctx;
}

// Scratch owned per worker; permuted attribute sides are materialized here.
struct SweepScratch {
  PreparedSide d_perm;
  DistanceMatrix d_raw_perm;
};

// Evaluates the full sweep. `canonical` recomputes the selected statistic
// with order-invariant summation; reported statistics use it, null
// replicates skip it since they are only compared against the observed one.
TSweepResult evaluate_sweep(const SweepContext& ctx, const std::vector<int>* perm,
                            SweepScratch& scratch, bool canonical) {
  const std::size_t t_count =
      ctx.method == Method::hhg ? ctx.c_raw->size() : ctx.c_sides.size();

  const PreparedSide* d_side = &ctx.d_side;
  const DistanceMatrix* d_raw = ctx.d_raw;
  if (perm != nullptr) {
    if (ctx.method == Method::hhg) {
      const int n = ctx.n;
      scratch.d_raw_perm.values.resize(n, n);
      for (int j = 0; j < n; ++j) {
        const int pj = (*perm)[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
          scratch.d_raw_perm.values(i, j) =
              ctx.d_raw->values((*perm)[static_cast<std::size_t>(i)], pj);
        }
      }
      d_raw = &scratch.d_raw_perm;
    } else {
      permute_side(ctx.d_side, *perm, scratch.d_perm);
      d_side = &scratch.d_perm;
    }
  }

  TSweepResult result;
  result.stats.resize(t_count);
  std::vector<double> values(t_count);
  for (std::size_t t = 0; t < t_count; ++t) {
    ScaleStatistic s;
    switch (ctx.method) {
      case Method::dmgc: {
        LocalCorrelationMap map =
            local_correlation_map(ctx.c_sides[t], ctx.c_moments[t], *d_side, ctx.d_moments);
        MgcResult mgc = mgc_statistic(map, ctx.n);
        s.statistic = mgc.statistic;
        s.k_star = mgc.k_star;
        s.l_star = mgc.l_star;
        break;
      }
      case Method::dcorr: {
        const PreparedSide& c = ctx.c_sides[t];
        double cross = 0.0;
        for (int j = 0; j < ctx.n; ++j) {
          for (int i = 0; i < ctx.n; ++i) {
            if (i != j) cross += c.u_centered(i, j) * d_side->u_centered(i, j);
          }
        }
        const double vc = ctx.c_moments[t].u_square_sum;
        const double vd = ctx.d_moments.u_square_sum;
        s.statistic = (vc <= 0.0 || vd <= 0.0)
                          ? 0.0
                          : std::clamp(cross / std::sqrt(vc * vd), -1.0, 1.0);
        s.k_star = c.scale_count;
        s.l_star = d_side->scale_count;
        break;
      }
      case Method::hhg: {
        s.statistic = hhg_statistic((*ctx.c_raw)[t], *d_raw);
        s.k_star = 0;
        s.l_star = 0;
        break;
      }
    }
    result.stats[t] = s;
    values[t] = s.statistic;
  }

  result.t_star = smoothed_max(values);
  if (canonical && ctx.method != Method::hhg) {
    ScaleStatistic& sel = result.stats[static_cast<std::size_t>(result.t_star)];
    sel.statistic = local_correlation_at(ctx.c_sides[static_cast<std::size_t>(result.t_star)],
                                         *d_side, sel.k_star, sel.l_star);
  }
  result.statistic_at_star =
      result.stats[static_cast<std::size_t>(result.t_star)].statistic;
  return result;
}

}  // namespace

TSweepResult t_sweep(const std::vector<DistanceMatrix>& distances, const DistanceMatrix& d,
                     Method method) {
  SweepContext ctx = make_context(distances, d, method);
  SweepScratch scratch;
  return evaluate_sweep(ctx, nullptr, scratch, /*canonical=*/true);
}

TestReport permutation_test(const std::vector<DistanceMatrix>& distances, const DistanceMatrix& d,
                            Method method, int permutations, std::uint64_t seed, int threads) {
  if (permutations < 1) {
    throw ParameterError("permutation count must be at least 1, got " +
                         std::to_string(permutations));
  }
  SweepContext ctx = make_context(distances, d, method);
  SweepScratch observed_scratch;
  TSweepResult observed = evaluate_sweep(ctx, nullptr, observed_scratch, /*canonical=*/true);

  const int n = ctx.n;
  const RandomSource master(seed);
  std::vector<std::uint8_t> exceeds(static_cast<std::size_t>(permutations), 0);

  const int workers = std::min(resolve_threads(threads), permutations);
  parallel_for(static_cast<std::size_t>(permutations), workers, [&](std::size_t b) {
    thread_local SweepScratch scratch;
    thread_local std::vector<int> perm;
    perm.resize(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    RandomSource rng = master.derive(b + 1);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    TSweepResult null_sweep = evaluate_sweep(ctx, &perm, scratch, /*canonical=*/false);
    exceeds[b] = null_sweep.statistic_at_star >= observed.statistic_at_star ? 1 : 0;
  });

  int count = 0;
  for (std::uint8_t e : exceeds) count += e;

  TestReport report;
  report.method = method;
  report.statistic = observed.statistic_at_star;
  report.p_value = (1.0 + count) / (permutations + 1.0);
  report.t_star = observed.t_star;
  const ScaleStatistic& sel = observed.stats[static_cast<std::size_t>(observed.t_star)];
  report.k_star = sel.k_star;
  report.l_star = sel.l_star;
  report.permutations = permutations;
  report.seed = seed;
  report.t_stats.reserve(observed.stats.size());
  for (const auto& s : observed.stats) report.t_stats.push_back(s.statistic);
  return report;
}

}  // namespace dmgc
