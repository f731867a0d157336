#include "eprbm/rbm.hpp"

#include <stdexcept>
#include <string>

#include "eprbm/errors.hpp"

namespace eprbm {
namespace {

void check_bits(std::span<const std::uint8_t> bits, Eigen::Index expected,
                const char* what) {
  if (static_cast<Eigen::Index>(bits.size()) != expected) {
    throw DimensionError(std::string(what) + " has length " +
                         std::to_string(bits.size()) + ", expected " +
                         std::to_string(expected));
  }
  for (auto b : bits) {
    if (b > 1) {
      throw std::invalid_argument(std::string(what) +
                                  " contains a value other than 0 or 1");
    }
  }
}

}  // namespace

RbmModel RbmModel::zeros(Eigen::Index num_visible, Eigen::Index num_hidden) {
  RbmModel model{Vector::Zero(num_visible), Vector::Zero(num_hidden),
                 Matrix::Zero(num_visible, num_hidden)};
  model.validate();
  return model;
}

bool RbmModel::all_finite() const {
  return visible_bias.allFinite() && hidden_bias.allFinite() &&
         weights.allFinite();
}

void RbmModel::validate() const {
  if (num_visible() < 1 || num_hidden() < 1) {
    throw DimensionError("an RBM needs at least one visible and one hidden unit");
  }
  if (weights.rows() != num_visible() || weights.cols() != num_hidden()) {
    throw DimensionError("weight matrix is " + std::to_string(weights.rows()) +
                         "x" + std::to_string(weights.cols()) +
                         " but biases imply " + std::to_string(num_visible()) +
                         "x" + std::to_string(num_hidden()));
  }
  if (!all_finite()) {
    throw std::domain_error("RBM parameters contain NaN or infinity");
  }
}

bool RbmModel::operator==(const RbmModel& other) const {
  return visible_bias.size() == other.visible_bias.size() &&
         hidden_bias.size() == other.hidden_bias.size() &&
         visible_bias == other.visible_bias &&
         hidden_bias == other.hidden_bias && weights == other.weights;
}

double energy(const RbmModel& model, const Configuration& config) {
  check_bits(config.visible, model.num_visible(), "visible configuration");
  check_bits(config.hidden, model.num_hidden(), "hidden configuration");
  double e = 0.0;
  for (Eigen::Index i = 0; i < model.num_visible(); ++i) {
    if (config.visible[i] == 0) continue;
    e += model.visible_bias[i];
    for (Eigen::Index j = 0; j < model.num_hidden(); ++j) {
      if (config.hidden[j] != 0) e += model.weights(i, j);
    }
  }
  for (Eigen::Index j = 0; j < model.num_hidden(); ++j) {
    if (config.hidden[j] != 0) e += model.hidden_bias[j];
  }
  return -e;
}

Vector hidden_activation_probs(const RbmModel& model,
                               std::span<const std::uint8_t> visible) {
  check_bits(visible, model.num_visible(), "visible vector");
  Vector probs(model.num_hidden());
  for (Eigen::Index j = 0; j < model.num_hidden(); ++j) {
    double x = model.hidden_bias[j];
    for (Eigen::Index i = 0; i < model.num_visible(); ++i) {
      if (visible[i] != 0) x += model.weights(i, j);
    }
    probs[j] = sigmoid(x);
  }
  return probs;
}

Vector visible_activation_probs(const RbmModel& model,
                                std::span<const std::uint8_t> hidden) {
  check_bits(hidden, model.num_hidden(), "hidden vector");
  Vector probs(model.num_visible());
  for (Eigen::Index i = 0; i < model.num_visible(); ++i) {
    double x = model.visible_bias[i];
    for (Eigen::Index j = 0; j < model.num_hidden(); ++j) {
      if (hidden[j] != 0) x += model.weights(i, j);
    }
    probs[i] = sigmoid(x);
  }
  return probs;
}

void gibbs_sweep_inplace(const RbmModel& model, Configuration& config,
                         Rng& rng) {
  const Eigen::Index m = model.num_visible();
  const Eigen::Index n = model.num_hidden();
  if (static_cast<Eigen::Index>(config.visible.size()) != m ||
      static_cast<Eigen::Index>(config.hidden.size()) != n) {
    throw DimensionError("configuration does not match model dimensions");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    double x = model.hidden_bias[j];
    for (Eigen::Index i = 0; i < m; ++i) {
      if (config.visible[i] != 0) x += model.weights(i, j);
    }
    config.hidden[j] = bernoulli(rng, sigmoid(x)) ? 1 : 0;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    double x = model.visible_bias[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (config.hidden[j] != 0) x += model.weights(i, j);
    }
    config.visible[i] = bernoulli(rng, sigmoid(x)) ? 1 : 0;
  }
}

Configuration gibbs_sweep(const RbmModel& model, const Configuration& config,
                          Rng& rng) {
  check_bits(config.visible, model.num_visible(), "visible configuration");
  check_bits(config.hidden, model.num_hidden(), "hidden configuration");
  Configuration next = config;
  gibbs_sweep_inplace(model, next, rng);
  return next;
}

Configuration random_configuration(Eigen::Index num_visible,
                                   Eigen::Index num_hidden, Rng& rng) {
  Configuration config{Bits(num_visible), Bits(num_hidden)};
  for (auto& b : config.visible) b = bernoulli(rng, 0.5) ? 1 : 0;
  for (auto& b : config.hidden) b = bernoulli(rng, 0.5) ? 1 : 0;
  return config;
}

}  // namespace eprbm
