#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eprbm/random.hpp"

namespace eprbm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Binary unit states, each entry exactly 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// Restricted Boltzmann machine with m visible and n hidden binary units.
///
/// E(v, h) = -(c.v + d.h + v^T W h), sampled at kT = 1. The weight matrix is
/// m x n with rows indexing visible units.
struct RbmModel {
  Vector visible_bias;  // c, length m
  Vector hidden_bias;   // d, length n
  Matrix weights;       // W, m x n

  static RbmModel zeros(Eigen::Index num_visible, Eigen::Index num_hidden);

  Eigen::Index num_visible() const { return visible_bias.size(); }
  Eigen::Index num_hidden() const { return hidden_bias.size(); }

  bool all_finite() const;

  // Throws DimensionError on inconsistent shapes or empty layers and
  // std::domain_error on NaN/inf entries.
  void validate() const;

  bool operator==(const RbmModel& other) const;
};

struct Configuration {
  Bits visible;
  Bits hidden;

  bool operator==(const Configuration&) const = default;
};

double energy(const RbmModel& model, const Configuration& config);

/// Logistic function, evaluated without overflow for any finite input.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// P(h_j = 1 | v) for every hidden unit.
Vector hidden_activation_probs(const RbmModel& model,
                               std::span<const std::uint8_t> visible);

/// P(v_i = 1 | h) for every visible unit.
Vector visible_activation_probs(const RbmModel& model,
                                std::span<const std::uint8_t> hidden);

/// One block-Gibbs sweep: resample the whole hidden layer from the current
/// visible layer, then the whole visible layer from the new hidden layer.
Configuration gibbs_sweep(const RbmModel& model, const Configuration& config,
                          Rng& rng);

/// In-place variant used by the samplers in hot loops. Consumes exactly
/// n + m uniforms from `rng`, hidden units first, in index order.
void gibbs_sweep_inplace(const RbmModel& model, Configuration& config,
                         Rng& rng);

/// Configuration with uniformly random bits.
Configuration random_configuration(Eigen::Index num_visible,
                                   Eigen::Index num_hidden, Rng& rng);

}  // namespace eprbm
