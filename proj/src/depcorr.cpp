#include "dmgc/depcorr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dmgc/errors.hpp"

namespace dmgc {

namespace {

// Accumulates in sorted order so the result depends only on the multiset of
// addends, never on their arrangement. Reported statistics go through this,
// which keeps them bit-identical under joint node relabeling.
double stable_sum(std::vector<double>& scratch) {
  std::sort(scratch.begin(), scratch.end());
  double s = 0.0;
  for (double v : scratch) s += v;
  return s;
}

void require_matching(int cn, int dn, const char* what) {
  if (cn != dn) {
    throw ParameterError(std::string(what) + ": mismatched sizes " + std::to_string(cn) +
                         " vs " + std::to_string(dn));
  }
}

struct CenteringSums {
  std::vector<double> row;  // equals column sums; distance matrices are symmetric
  double grand = 0.0;
};

CenteringSums centering_sums(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  CenteringSums sums;
  sums.row.resize(static_cast<std::size_t>(n));
  std::vector<double> scratch(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) scratch[static_cast<std::size_t>(j)] = m(i, j);
    sums.row[static_cast<std::size_t>(i)] = stable_sum(scratch);
  }
  scratch = sums.row;
  sums.grand = stable_sum(scratch);
  return sums;
}

void u_center_into(const Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
  const int n = static_cast<int>(m.rows());
  const CenteringSums sums = centering_sums(m);
  const double row_scale = 1.0 / (n - 2);
  const double grand_term = sums.grand / (static_cast<double>(n - 1) * (n - 2));
  out.resize(n, n);
  // Mirrored assignment keeps the result exactly symmetric.
  for (int j = 0; j < n; ++j) {
    out(j, j) = 0.0;
    for (int i = j + 1; i < n; ++i) {
      const double value = m(i, j) - sums.row[static_cast<std::size_t>(i)] * row_scale -
                           sums.row[static_cast<std::size_t>(j)] * row_scale + grand_term;
      out(i, j) = value;
      out(j, i) = value;
    }
  }
}

// Column centering: subtract each column's off-diagonal mean, zero the
// diagonal. The result is not symmetric.
void column_center_into(const Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
  const int n = static_cast<int>(m.rows());
  out.resize(n, n);
  std::vector<double> scratch(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) scratch[static_cast<std::size_t>(i)] = m(i, j);
    const double mean = stable_sum(scratch) / (n - 1);
    for (int i = 0; i < n; ++i) {
      out(i, j) = i == j ? 0.0 : m(i, j) - mean;
    }
  }
}

void double_center_into(const Eigen::MatrixXd& m, Eigen::MatrixXd& out) {
  const int n = static_cast<int>(m.rows());
  const CenteringSums sums = centering_sums(m);
  const double inv_n = 1.0 / n;
  const double grand_term = sums.grand * inv_n * inv_n;
  out.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out(i, j) = m(i, j) - sums.row[static_cast<std::size_t>(i)] * inv_n -
                  sums.row[static_cast<std::size_t>(j)] * inv_n + grand_term;
    }
  }
}

double correlation_ratio(double cross, double vc, double vd) {
  if (vc <= 0.0 || vd <= 0.0) return 0.0;
  double r = cross / std::sqrt(vc * vd);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

DistanceMatrix pairwise_euclidean(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  if (n < 2) {
    throw ParameterError("pairwise distances need at least 2 rows, got " + std::to_string(n));
  }
  if (!x.allFinite()) {
    throw DataError("attribute matrix contains non-finite values");
  }
  DistanceMatrix d;
  d.values.setZero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      double v = (x.row(i) - x.row(j)).norm();
      d.values(i, j) = v;
      d.values(j, i) = v;
    }
  }
  return d;
}

CenteredMatrix center(const DistanceMatrix& d, Centering mode) {
  const int n = d.n();
  if (mode == Centering::unbiased && n < 4) {
    throw ParameterError("U-centering needs n >= 4, got n = " + std::to_string(n));
  }
  if (mode == Centering::biased && n < 2) {
    throw ParameterError("centering needs n >= 2, got n = " + std::to_string(n));
  }
  CenteredMatrix out;
  out.mode = mode;
  if (mode == Centering::unbiased) {
    u_center_into(d.values, out.values);
  } else {
    double_center_into(d.values, out.values);
  }
  return out;
}

double dcorr(const DistanceMatrix& c, const DistanceMatrix& d, Centering mode) {
  require_matching(c.n(), d.n(), "dcorr");
  const int n = c.n();
  const CenteredMatrix cc = center(c, mode);
  const CenteredMatrix dc = center(d, mode);

  std::vector<double> cross, vc, vd;
  cross.reserve(static_cast<std::size_t>(n) * n);
  vc.reserve(static_cast<std::size_t>(n) * n);
  vd.reserve(static_cast<std::size_t>(n) * n);
  const bool skip_diagonal = mode == Centering::unbiased;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (skip_diagonal && i == j) continue;
      double a = cc.values(i, j);
      double b = dc.values(i, j);
      cross.push_back(a * b);
      vc.push_back(a * a);
      vd.push_back(b * b);
    }
  }
  return correlation_ratio(stable_sum(cross), stable_sum(vc), stable_sum(vd));
}

RankMatrix nearest_neighbor_ranks(const DistanceMatrix& d) {
  const int n = d.n();
  RankMatrix out;
  out.ranks.resize(n, n);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n) - 1);
  for (int j = 0; j < n; ++j) {
    order.clear();
    for (int i = 0; i < n; ++i) {
      if (i != j) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double da = d.values(a, j), db = d.values(b, j);
      if (da != db) return da < db;
      return a < b;
    });
    out.ranks(j, j) = 0;
    for (int r = 0; r < static_cast<int>(order.size()); ++r) {
      out.ranks(order[static_cast<std::size_t>(r)], j) = r + 1;
    }
  }
  return out;
}

PreparedSide prepare_side(const DistanceMatrix& d) {
  const int n = d.n();
  if (n < 4) {
    throw ParameterError("local correlations need n >= 4, got n = " + std::to_string(n));
  }
  PreparedSide side;
  u_center_into(d.values, side.u_centered);
  column_center_into(d.values, side.col_centered);
  side.col_centered_t = side.col_centered.transpose();
  side.tied_ranks.resize(n, n);

  // Dense ranks per column: tied distances share a rank, so the rank counts
  // distinct values below. The zero diagonal makes self always rank 0.
  std::vector<int> order(static_cast<std::size_t>(n));
  int max_rank = 0;
  for (int j = 0; j < n; ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double da = d.values(a, j), db = d.values(b, j);
      if (da != db) return da < db;
      return a < b;
    });
    int rank = 0;
    double prev = d.values(order[0], j);
    for (int s = 0; s < n; ++s) {
      double v = d.values(order[static_cast<std::size_t>(s)], j);
      if (v != prev) {
        ++rank;
        prev = v;
      }
      side.tied_ranks(order[static_cast<std::size_t>(s)], j) = rank;
    }
    max_rank = std::max(max_rank, rank);
  }
  side.tied_ranks_t = side.tied_ranks.transpose();
  side.scale_count = max_rank + 1;
  return side;
}

void permute_side(const PreparedSide& in, const std::vector<int>& perm, PreparedSide& out) {
  const int n = in.n();
  if (static_cast<int>(perm.size()) != n) {
    throw ParameterError("permutation length does not match matrix size");
  }
  out.u_centered.resize(n, n);
  out.col_centered.resize(n, n);
  out.col_centered_t.resize(n, n);
  out.tied_ranks.resize(n, n);
  out.tied_ranks_t.resize(n, n);
  out.scale_count = in.scale_count;
  for (int j = 0; j < n; ++j) {
    const int pj = perm[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i) {
      const int pi = perm[static_cast<std::size_t>(i)];
      out.u_centered(i, j) = in.u_centered(pi, pj);
      out.col_centered(i, j) = in.col_centered(pi, pj);
      out.col_centered_t(i, j) = in.col_centered_t(pi, pj);
      out.tied_ranks(i, j) = in.tied_ranks(pi, pj);
      out.tied_ranks_t(i, j) = in.tied_ranks_t(pi, pj);
    }
  }
}

SideMoments side_moments(const PreparedSide& side) {
  const int n = side.n();
  SideMoments moments;
  moments.masked_sum.assign(static_cast<std::size_t>(side.scale_count), 0.0);
  moments.masked_cross_sq.assign(static_cast<std::size_t>(side.scale_count), 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const double v = side.col_centered(i, j);
      const double u = side.u_centered(i, j);
      const int rank = side.tied_ranks(i, j);
      const int mutual = std::max(rank, side.tied_ranks_t(i, j));
      moments.masked_sum[static_cast<std::size_t>(rank)] += v;
      moments.masked_cross_sq[static_cast<std::size_t>(mutual)] += v * side.col_centered_t(i, j);
      moments.u_square_sum += u * u;
    }
  }
  for (std::size_t k = 1; k < moments.masked_sum.size(); ++k) {
    moments.masked_sum[k] += moments.masked_sum[k - 1];
    moments.masked_cross_sq[k] += moments.masked_cross_sq[k - 1];
  }
  return moments;
}

namespace {

// Local correlation from masked raw sums: a covariance over the n^2 pair
// grid (unmasked cells count as zeros), normalized by the equally masked
// variances.
double local_ratio(double cross, double sum_c, double cross_sq_c, double sum_d,
                   double cross_sq_d, double inv_n2) {
  const double num = cross - sum_c * sum_d * inv_n2;
  const double var_c = cross_sq_c - sum_c * sum_c * inv_n2;
  const double var_d = cross_sq_d - sum_d * sum_d * inv_n2;
  return correlation_ratio(num, var_c, var_d);
}

double global_ratio(double cross, double u_sq_c, double u_sq_d) {
  return correlation_ratio(cross, u_sq_c, u_sq_d);
}

}  // namespace

LocalCorrelationMap local_correlation_map(const PreparedSide& c, const SideMoments& c_moments,
                                          const PreparedSide& d, const SideMoments& d_moments) {
  require_matching(c.n(), d.n(), "local_correlation_map");
  const int n = c.n();
  const int kappa = c.scale_count;
  const int gamma = d.scale_count;
  const double inv_n2 = 1.0 / (static_cast<double>(n) * n);

  LocalCorrelationMap map;
  map.kappa = kappa;
  map.gamma = gamma;
  map.values.setZero(kappa, gamma);

  // Cross sums pair entry (i, j) of the first side with entry (j, i) of the
  // second: "i among j's nearest by C" against "j among i's nearest by D".
  // The grid is a 2-D prefix sum of per-rank-cell accumulations.
  double u_cross = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      map.values(c.tied_ranks(i, j), d.tied_ranks_t(i, j)) +=
          c.col_centered(i, j) * d.col_centered_t(i, j);
      u_cross += c.u_centered(i, j) * d.u_centered(i, j);
    }
  }
  for (int k = 0; k < kappa; ++k) {
    for (int l = 1; l < gamma; ++l) map.values(k, l) += map.values(k, l - 1);
  }
  for (int k = 1; k < kappa; ++k) {
    for (int l = 0; l < gamma; ++l) map.values(k, l) += map.values(k - 1, l);
  }
  for (int k = 0; k < kappa; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    for (int l = 0; l < gamma; ++l) {
      const auto ls = static_cast<std::size_t>(l);
      map.values(k, l) = local_ratio(map.values(k, l), c_moments.masked_sum[ks],
                                     c_moments.masked_cross_sq[ks], d_moments.masked_sum[ls],
                                     d_moments.masked_cross_sq[ls], inv_n2);
    }
  }
  // The unmasked scale is the plain unbiased distance correlation.
  map.values(kappa - 1, gamma - 1) =
      global_ratio(u_cross, c_moments.u_square_sum, d_moments.u_square_sum);
  return map;
}

LocalCorrelationMap local_correlation_map(const DistanceMatrix& c, const DistanceMatrix& d) {
  require_matching(c.n(), d.n(), "local_correlation_map");
  PreparedSide cs = prepare_side(c);
  PreparedSide ds = prepare_side(d);
  return local_correlation_map(cs, side_moments(cs), ds, side_moments(ds));
}

double local_correlation_at(const PreparedSide& c, const PreparedSide& d, int k, int l) {
  require_matching(c.n(), d.n(), "local_correlation_at");
  if (k < 1 || k > c.scale_count || l < 1 || l > d.scale_count) {
    throw ParameterError("local correlation scale out of range");
  }
  const int n = c.n();
  const double inv_n2 = 1.0 / (static_cast<double>(n) * n);
  const bool global_scale = k == c.scale_count && l == d.scale_count;
  std::vector<double> cross, sc, vc, sd, vd;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      if (global_scale) {
        const double a = c.u_centered(i, j);
        const double b = d.u_centered(i, j);
        cross.push_back(a * b);
        vc.push_back(a * a);
        vd.push_back(b * b);
        continue;
      }
      const double a = c.col_centered(i, j);
      const double b = d.col_centered(i, j);
      if (c.tied_ranks(i, j) < k) sc.push_back(a);
      if (std::max(c.tied_ranks(i, j), c.tied_ranks_t(i, j)) < k) {
        vc.push_back(a * c.col_centered_t(i, j));
      }
      if (d.tied_ranks(i, j) < l) sd.push_back(b);
      if (std::max(d.tied_ranks(i, j), d.tied_ranks_t(i, j)) < l) {
        vd.push_back(b * d.col_centered_t(i, j));
      }
      if (c.tied_ranks(i, j) < k && d.tied_ranks_t(i, j) < l) {
        cross.push_back(a * d.col_centered_t(i, j));
      }
    }
  }
  if (global_scale) {
    return global_ratio(stable_sum(cross), stable_sum(vc), stable_sum(vd));
  }
  return local_ratio(stable_sum(cross), stable_sum(sc), stable_sum(vc), stable_sum(sd),
                     stable_sum(vd), inv_n2);
}

MgcResult mgc_statistic(const LocalCorrelationMap& map, int n) {
  const int kappa = map.kappa;
  const int gamma = map.gamma;
  const double global = map.global();

  double threshold = std::max(0.0, global);
  for (int k = 0; k < kappa; ++k) {
    for (int l = 0; l < gamma; ++l) {
      double v = map.values(k, l);
      if (v < 0.0) threshold = std::max(threshold, -v);
    }
  }

  // Largest 4-connected component of entries above the threshold.
  const int cells = kappa * gamma;
  std::vector<int> label(static_cast<std::size_t>(cells), -1);
  std::vector<int> stack;
  int best_label = -1;
  int best_size = 0;
  int labels = 0;
  for (int k = 0; k < kappa; ++k) {
    for (int l = 0; l < gamma; ++l) {
      const int cell = k * gamma + l;
      if (label[static_cast<std::size_t>(cell)] != -1 || !(map.values(k, l) > threshold)) {
        continue;
      }
      const int id = labels++;
      int size = 0;
      stack.push_back(cell);
      label[static_cast<std::size_t>(cell)] = id;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        ++size;
        const int ck = cur / gamma;
        const int cl = cur % gamma;
        const int nbr[4][2] = {{ck - 1, cl}, {ck + 1, cl}, {ck, cl - 1}, {ck, cl + 1}};
        for (const auto& nb : nbr) {
          if (nb[0] < 0 || nb[0] >= kappa || nb[1] < 0 || nb[1] >= gamma) continue;
          const int ncell = nb[0] * gamma + nb[1];
          if (label[static_cast<std::size_t>(ncell)] == -1 &&
              map.values(nb[0], nb[1]) > threshold) {
            label[static_cast<std::size_t>(ncell)] = id;
            stack.push_back(ncell);
          }
        }
      }
      if (size > best_size) {
        best_size = size;
        best_label = id;
      }
    }
  }

  // Minimum believable region: a 0.02 fraction of the longer grid axis times
  // the full shorter axis (2n cells on an n x n grid at n = 100).
  const int min_cells =
      static_cast<int>(std::ceil(0.02 * std::max(kappa, gamma))) * std::min(kappa, gamma);
  (void)n;
  MgcResult result;
  if (best_label >= 0 && best_size >= min_cells) {
    bool found = false;
    for (int k = 0; k < kappa; ++k) {
      for (int l = 0; l < gamma; ++l) {
        if (label[static_cast<std::size_t>(k * gamma + l)] != best_label) continue;
        if (!found || map.values(k, l) > result.statistic) {
          found = true;
          result.statistic = map.values(k, l);
          result.k_star = k + 1;
          result.l_star = l + 1;
        }
      }
    }
    return result;
  }
  result.statistic = global;
  result.k_star = kappa;
  result.l_star = gamma;
  return result;
}

namespace {

struct Fenwick {
  std::vector<int> tree;

  void reset(int size) { tree.assign(static_cast<std::size_t>(size) + 1, 0); }
  void add(int pos) {
    for (; pos < static_cast<int>(tree.size()); pos += pos & -pos) {
      ++tree[static_cast<std::size_t>(pos)];
    }
  }
  int prefix(int pos) const {
    int s = 0;
    for (; pos > 0; pos -= pos & -pos) s += tree[static_cast<std::size_t>(pos)];
    return s;
  }
};

}  // namespace

double hhg_statistic(const DistanceMatrix& c, const DistanceMatrix& d) {
  require_matching(c.n(), d.n(), "hhg_statistic");
  const int n = c.n();
  if (n < 3) {
    throw ParameterError("hhg_statistic needs n >= 3, got n = " + std::to_string(n));
  }
  const int m = n - 1;

  std::vector<double> cv(static_cast<std::size_t>(m)), dv(static_cast<std::size_t>(m));
  std::vector<double> sorted_c(static_cast<std::size_t>(m)), sorted_d(static_cast<std::size_t>(m));
  std::vector<int> dpos(static_cast<std::size_t>(m)), order(static_cast<std::size_t>(m));
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) * m);
  Fenwick fen;

  for (int i = 0; i < n; ++i) {
    int s = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cv[static_cast<std::size_t>(s)] = c.values(j, i);
      dv[static_cast<std::size_t>(s)] = d.values(j, i);
      ++s;
    }
    sorted_c = cv;
    sorted_d = dv;
    std::sort(sorted_c.begin(), sorted_c.end());
    std::sort(sorted_d.begin(), sorted_d.end());
    for (int t = 0; t < m; ++t) {
      dpos[static_cast<std::size_t>(t)] = static_cast<int>(
          std::upper_bound(sorted_d.begin(), sorted_d.end(), dv[static_cast<std::size_t>(t)]) -
          sorted_d.begin());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return cv[static_cast<std::size_t>(a)] < cv[static_cast<std::size_t>(b)];
    });

    fen.reset(m);
    int g = 0;
    while (g < m) {
      int h = g;
      const double value = cv[static_cast<std::size_t>(order[static_cast<std::size_t>(g)])];
      while (h < m && cv[static_cast<std::size_t>(order[static_cast<std::size_t>(h)])] == value) {
        ++h;
      }
      for (int t = g; t < h; ++t) {
        fen.add(dpos[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
      }
      // h now counts how many pairs have c-distance <= the group's value.
      for (int t = g; t < h; ++t) {
        const int slot = order[static_cast<std::size_t>(t)];
        const int within_c = h - 1;  // excluding the pair point itself
        const int within_d = dpos[static_cast<std::size_t>(slot)] - 1;
        const int both = fen.prefix(dpos[static_cast<std::size_t>(slot)]) - 1;
        const int r1 = within_c, r2 = (n - 2) - within_c;
        const int c1 = within_d, c2 = (n - 2) - within_d;
        if (r1 <= 0 || r2 <= 0 || c1 <= 0 || c2 <= 0) continue;
        const double a11 = both;
        const double a12 = within_c - both;
        const double a21 = within_d - both;
        const double a22 = (n - 2) - within_c - within_d + both;
        const double num = a12 * a21 - a11 * a22;
        terms.push_back((n - 2) * num * num /
                        (static_cast<double>(r1) * r2 * c1 * c2));
      }
      g = h;
    }
  }
  return stable_sum(terms);
}

}  // namespace dmgc
