#include "dmgc/simgen.hpp"

#include <cmath>
#include <string>

#include "dmgc/errors.hpp"

namespace dmgc {

namespace {

Eigen::MatrixXd bernoulli_graph(const Eigen::MatrixXd& probabilities, RandomSource& rng) {
  const int n = static_cast<int>(probabilities.rows());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(probabilities(i, j))) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  }
  return w;
}

}  // namespace

GraphSample sample_sbm_beta(int n, double beta, RandomSource& rng) {
  if (n < 3) {
    throw ParameterError("three-block model needs n >= 3, got n = " + std::to_string(n));
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParameterError("beta must lie in (0, 1), got " + std::to_string(beta));
  }

  Eigen::VectorXd labels(n);
  for (int i = 0; i < n; ++i) labels(i) = rng.uniform_int(1, 3);

  Eigen::MatrixXd probabilities(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int diff = static_cast<int>(std::abs(labels(i) - labels(j)));
      probabilities(i, j) = diff == 0 ? 0.5 : diff == 1 ? 0.2 : beta;
    }
  }

  GraphSample sample;
  sample.a = AdjacencyMatrix::from_weights(bernoulli_graph(probabilities, rng));
  sample.x.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    const int z = static_cast<int>(labels(i));
    if (rng.bernoulli(0.5)) {
      sample.x(i, 0) = z;
    } else {
      // Uniform over the two wrong labels.
      const int offset = rng.bernoulli(0.5) ? 1 : 2;
      sample.x(i, 0) = (z - 1 + offset) % 3 + 1;
    }
  }
  sample.z = labels;
  return sample;
}

GraphSample sample_sbm_3block(int n, RandomSource& rng) {
  return sample_sbm_beta(n, 0.4, rng);
}

GraphSample sample_dcsbm(int n, double tau, RandomSource& rng) {
  if (n < 2) {
    throw ParameterError("two-block model needs n >= 2, got n = " + std::to_string(n));
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ParameterError("tau must lie in [0, 1], got " + std::to_string(tau));
  }

  Eigen::VectorXd labels(n);
  Eigen::VectorXd degree_factor(n);
  for (int i = 0; i < n; ++i) labels(i) = rng.uniform_int(0, 1);
  for (int i = 0; i < n; ++i) degree_factor(i) = rng.uniform(1.0 - tau, 1.0 + tau);

  Eigen::MatrixXd probabilities(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double base = labels(i) == labels(j) ? 0.2 : 0.05;
      probabilities(i, j) = base * degree_factor(i) * degree_factor(j);
    }
  }

  GraphSample sample;
  sample.a = AdjacencyMatrix::from_weights(bernoulli_graph(probabilities, rng));
  sample.x.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    const double z = labels(i);
    sample.x(i, 0) = rng.bernoulli(0.6) ? z : 1.0 - z;
  }
  sample.z.resize(n, 2);
  sample.z.col(0) = labels;
  sample.z.col(1) = degree_factor;
  return sample;
}

RelationshipSample relationship(int id, int n, RandomSource& rng) {
  if (id < 1 || id > 20) {
    throw ParameterError("relationship id must lie in 1..20, got " + std::to_string(id));
  }
  if (n < 1) {
    throw ParameterError("relationship needs n >= 1");
  }

  RelationshipSample s;
  s.w.resize(n);
  s.x.resize(n);
  const double pi = M_PI;
  for (int i = 0; i < n; ++i) {
    double w = 0.0, x = 0.0;
    switch (id) {
      case 1: {  // linear
        w = rng.uniform(0.0, 1.0);
        x = w + rng.normal(0.0, 0.5);
        break;
      }
      case 2: {  // exponential
        w = rng.uniform(0.0, 3.0);
        x = std::exp(w) + rng.normal(0.0, 5.0);
        break;
      }
      case 3: {  // cubic
        w = rng.uniform(0.0, 1.0);
        const double u = w - 0.5;
        x = 20.0 * u * u * u + 2.0 * u * u - u + rng.normal(0.0, 0.5);
        break;
      }
      case 4: {  // joint normal, variance 0.7, covariance 0.5
        const double z1 = rng.normal(0.0, 1.0);
        const double z2 = rng.normal(0.0, 1.0);
        const double sd = std::sqrt(0.7);
        w = sd * z1;
        x = (0.5 / sd) * z1 + std::sqrt(0.7 - 0.25 / 0.7) * z2;
        break;
      }
      case 5: {  // step
        w = rng.uniform(-1.0, 1.0);
        x = (w > 0.0 ? 1.0 : 0.0) + rng.normal(0.0, 0.5);
        break;
      }
      case 6: {  // quadratic
        w = rng.uniform(-1.0, 1.0);
        x = w * w + rng.normal(0.0, 0.3);
        break;
      }
      case 7: {  // w shape
        w = rng.uniform(-1.0, 1.0);
        const double u = w * w - 0.5;
        x = 4.0 * u * u;
        break;
      }
      case 8: {  // spiral
        const double z = rng.uniform(0.0, 5.0);
        w = z * std::cos(z * pi);
        x = z * std::sin(z * pi) + rng.normal(0.0, 0.1);
        break;
      }
      case 9: {  // bernoulli
        w = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        x = sign * w + rng.normal(0.0, 1.0);
        break;
      }
      case 10: {  // logarithm
        w = rng.uniform(-1.0, 1.0);
        x = 5.0 * std::log2(std::abs(w)) + rng.normal(0.0, 5.0);
        break;
      }
      case 11: {  // fourth root
        w = rng.uniform(0.0, 1.0);
        x = std::pow(std::abs(w + rng.normal(0.0, 0.5)), 0.25);
        break;
      }
      case 12: {  // sine, period 4 pi
        w = rng.uniform(-1.0, 1.0);
        x = std::sin(4.0 * w * pi) + rng.normal(0.0, 0.01);
        break;
      }
      case 13: {  // sine, period 16 pi
        w = rng.uniform(-1.0, 1.0);
        x = std::sin(16.0 * w * pi) + rng.normal(0.0, 0.01);
        break;
      }
      case 14: {  // square (rotated by -pi/8)
        const double u1 = rng.uniform(-1.0, 1.0);
        const double u2 = rng.uniform(-1.0, 1.0);
        w = u1 * std::cos(-pi / 8.0) + u2 * std::sin(-pi / 8.0);
        x = -u1 * std::sin(-pi / 8.0) + u2 * std::cos(-pi / 8.0);
        break;
      }
      case 15: {  // two parabolas
        const double z = rng.bernoulli(0.3) ? 1.0 : 0.0;
        const double eps = rng.normal(0.5, 0.3);
        w = rng.uniform(0.0, 1.0);
        x = (w * w + eps) * (z - 0.5);
        break;
      }
      case 16: {  // circle
        const double u = rng.uniform(-1.0, 1.0);
        w = std::cos(u * pi);
        x = std::sin(u * pi) + rng.normal(0.0, 0.05);
        break;
      }
      case 17: {  // ellipse
        const double u = rng.uniform(-1.0, 1.0);
        w = 5.0 * std::cos(u * pi);
        x = std::sin(u * pi);
        break;
      }
      case 18: {  // diamond (rotated by -pi/4)
        const double u1 = rng.uniform(-1.0, 1.0);
        const double u2 = rng.uniform(-1.0, 1.0);
        w = u1 * std::cos(-pi / 4.0) + u2 * std::sin(-pi / 4.0);
        x = -u1 * std::sin(-pi / 4.0) + u2 * std::cos(-pi / 4.0);
        break;
      }
      case 19: {  // multiplicative noise
        w = rng.normal(0.5, 1.0);
        x = w * rng.normal(0.5, 1.0);
        break;
      }
      case 20: {  // independent marginals
        w = rng.normal(0.0, 1.0);
        x = rng.uniform(0.0, 1.0);
        break;
      }
      default:
        break;
    }
    s.w(i) = w;
    s.x(i) = x;
  }
  return s;
}

namespace {

Eigen::VectorXd min_max_scale(const Eigen::VectorXd& v, const char* what) {
  const double lo = v.minCoeff();
  const double hi = v.maxCoeff();
  if (!(hi > lo)) {
    throw DataError(std::string("degenerate min-max scaling of ") + what +
                    " (all values equal); draw again with a different seed");
  }
  return (v.array() - lo) / (hi - lo);
}

}  // namespace

GraphSample sample_rdpg(int n, int id, RandomSource& rng) {
  if (n < 4) {
    throw ParameterError("latent-position graph needs n >= 4, got n = " + std::to_string(n));
  }
  RelationshipSample rel = relationship(id, n, rng);
  Eigen::VectorXd latent = min_max_scale(rel.w, "latent positions");
  Eigen::VectorXd attribute = min_max_scale(rel.x, "attributes");

  Eigen::MatrixXd probabilities = latent * latent.transpose();
  GraphSample sample;
  sample.a = AdjacencyMatrix::from_weights(bernoulli_graph(probabilities, rng));
  sample.x = attribute;
  sample.z = latent;
  return sample;
}

GraphSample sample_nonpsd_sbm(int n, double eps, RandomSource& rng) {
  if (n < 2) {
    throw ParameterError("two-block model needs n >= 2, got n = " + std::to_string(n));
  }
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw ParameterError("eps must lie in [0, 0.5), got " + std::to_string(eps));
  }

  Eigen::VectorXd labels(n);
  for (int i = 0; i < n; ++i) labels(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;

  Eigen::MatrixXd probabilities(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      probabilities(i, j) = labels(i) == labels(j) ? 0.5 - eps : 0.3;
    }
  }

  GraphSample sample;
  sample.a = AdjacencyMatrix::from_weights(bernoulli_graph(probabilities, rng));
  sample.x.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    sample.x(i, 0) = rng.bernoulli(labels(i) / 3.0) ? 1.0 : 0.0;
  }
  sample.z = labels;
  return sample;
}

}  // namespace dmgc
