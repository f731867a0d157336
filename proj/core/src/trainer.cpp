#include "eprbm/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "eprbm/bell.hpp"
#include "eprbm/errors.hpp"

namespace eprbm {

void TrainerConfig::validate() const {
  // Zero rate and zero epochs are accepted: both leave the initial model as is.
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning_rate must be finite and >= 0");
  }
  if (n_epochs < 0) throw std::invalid_argument("n_epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (n_persistent_chains < 1) {
    throw std::invalid_argument("n_persistent_chains must be >= 1");
  }
  if (gibbs_steps_per_update < 1) {
    throw std::invalid_argument("gibbs_steps_per_update must be >= 1");
  }
  if (n_hidden < 1) throw std::invalid_argument("n_hidden must be >= 1");
  if (!(weight_init_scale >= 0.0) || !std::isfinite(weight_init_scale)) {
    throw std::invalid_argument("weight_init_scale must be finite and >= 0");
  }
  if (!(learning_rate_decay > 0.0 && learning_rate_decay <= 1.0)) {
    throw std::invalid_argument("learning_rate_decay must lie in (0, 1]");
  }
}

Expectations data_expectation(const RbmModel& model, const Matrix& batch) {
  if (batch.rows() == 0) {
    throw InsufficientDataError("data expectation of an empty batch");
  }
  if (batch.cols() != model.num_visible()) {
    throw DimensionError("batch width does not match model");
  }
  Matrix hidden = batch * model.weights;
  hidden.rowwise() += model.hidden_bias.transpose();
  hidden = hidden.unaryExpr([](double x) { return sigmoid(x); });
  const double inv = 1.0 / static_cast<double>(batch.rows());
  return {batch.transpose() * hidden * inv,
          batch.colwise().sum().transpose() * inv,
          hidden.colwise().sum().transpose() * inv};
}

Expectations model_expectation_exact(const RbmModel& model) {
  const ExactDistribution dist = enumerate(model);
  const int m = static_cast<int>(model.num_visible());
  const Eigen::Index n = model.num_hidden();
  const auto marginal = dist.visible_marginal();
  Expectations out{Matrix::Zero(m, n), Vector::Zero(m), Vector::Zero(n)};
  // Summing P(v) * P(h_j = 1 | v) over v is exact and avoids the 2^n inner loop.
  for (std::size_t v = 0; v < marginal.size(); ++v) {
    const Bits bits = index_bits(v, m);
    const Vector ph = hidden_activation_probs(model, bits);
    Vector vv(m);
    for (int i = 0; i < m; ++i) vv[i] = bits[i];
    out.vh.noalias() += marginal[v] * (vv * ph.transpose());
    out.v += marginal[v] * vv;
    out.h += marginal[v] * ph;
  }
  return out;
}

PersistentChains pcd_init(const RbmModel& model, int n_chains, Rng& rng) {
  if (n_chains < 1) throw std::invalid_argument("need at least one chain");
  PersistentChains chains;
  chains.states.reserve(static_cast<std::size_t>(n_chains));
  for (int c = 0; c < n_chains; ++c) {
    chains.states.push_back(
        random_configuration(model.num_visible(), model.num_hidden(), rng));
  }
  return chains;
}

Expectations model_expectation_pcd(const RbmModel& model,
                                   PersistentChains& chains, int k, Rng& rng) {
  if (chains.states.empty()) throw std::invalid_argument("no persistent chains");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const Eigen::Index m = model.num_visible();
  const Eigen::Index n = model.num_hidden();
  Expectations out{Matrix::Zero(m, n), Vector::Zero(m), Vector::Zero(n)};
  Vector ph(n);
  for (auto& state : chains.states) {
    for (int step = 0; step < k; ++step) gibbs_sweep_inplace(model, state, rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      double x = model.hidden_bias[j];
      for (Eigen::Index i = 0; i < m; ++i) {
        if (state.visible[i] != 0) x += model.weights(i, j);
      }
      ph[j] = sigmoid(x);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (state.visible[i] == 0) continue;
      out.v[i] += 1.0;
      out.vh.row(i) += ph.transpose();
    }
    out.h += ph;
  }
  const double inv = 1.0 / static_cast<double>(chains.states.size());
  out.vh *= inv;
  out.v *= inv;
  out.h *= inv;
  return out;
}

Expectations exact_gradient(const RbmModel& model, const Matrix& visibles) {
  return data_expectation(model, visibles) - model_expectation_exact(model);
}

RbmModel initial_model(int num_visible, const TrainerConfig& config) {
  config.validate();
  RbmModel model = RbmModel::zeros(num_visible, config.n_hidden);
  Rng rng = make_rng(config.seed, Stream::init);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Row-major fill order so the draw sequence does not depend on storage order.
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.weights.cols(); ++j) {
      model.weights(i, j) = config.weight_init_scale * normal(rng);
    }
  }
  return model;
}

namespace {

// Returns nullopt once the distribution is no longer finite.
std::optional<TraceRecord> trace_record(int epoch, const RbmModel& model,
                                        const Matrix& visibles) {
  const ExactDistribution dist = enumerate(model);
  const auto joint = dist.joint();
  if (!std::isfinite(dist.log_partition()) ||
      !std::all_of(joint.begin(), joint.end(),
                   [](double p) { return std::isfinite(p); })) {
    return std::nullopt;
  }
  TraceRecord rec{epoch, average_log_likelihood(dist, visibles), std::nullopt};
  if (!std::isfinite(rec.log_likelihood)) return std::nullopt;
  if (model.num_visible() == 4) {
    // S is undefined once a settings pair has lost all probability mass.
    const auto marginal = dist.visible_marginal();
    std::array<double, 4> settings{};
    for (std::size_t v = 0; v < marginal.size(); ++v) settings[v >> 2] += marginal[v];
    if (std::all_of(settings.begin(), settings.end(), [](double p) { return p > 0.0; })) {
      rec.chsh = model_correlations_exact(dist).s;
    }
  }
  return rec;
}

}  // namespace

TrainingResult train(const Matrix& visibles, const TrainerConfig& config,
                     const std::optional<RbmModel>& initial) {
  config.validate();
  if (visibles.rows() == 0) {
    throw InsufficientDataError("cannot train on an empty dataset");
  }
  RbmModel model = initial ? *initial
                           : initial_model(static_cast<int>(visibles.cols()),
                                           config);
  model.validate();
  if (model.num_visible() != visibles.cols()) {
    throw DimensionError("initial model width does not match the data");
  }

  Rng chain_rng = make_rng(config.seed, Stream::chains);
  Rng shuffle_rng = make_rng(config.seed, Stream::shuffle);
  PersistentChains chains;
  if (config.model_term == ModelTerm::pcd) {
    chains = pcd_init(model, config.n_persistent_chains, chain_rng);
  }

  const auto rows = static_cast<std::size_t>(visibles.rows());
  std::vector<Eigen::Index> order(rows);
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  TrainingTrace trace;
  trace.reserve(static_cast<std::size_t>(config.n_epochs));
  double rate = config.learning_rate;
  for (int epoch = 1; epoch <= config.n_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < rows;
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(rows, start + static_cast<std::size_t>(config.batch_size));
      const std::vector<Eigen::Index> idx(order.begin() + start,
                                          order.begin() + stop);
      const Matrix batch = visibles(idx, Eigen::all);

      const Expectations positive = data_expectation(model, batch);
      const Expectations negative =
          config.model_term == ModelTerm::pcd
              ? model_expectation_pcd(model, chains,
                                      config.gibbs_steps_per_update, chain_rng)
              : model_expectation_exact(model);
      model.weights += rate * (positive.vh - negative.vh);
      model.visible_bias += rate * (positive.v - negative.v);
      model.hidden_bias += rate * (positive.h - negative.h);
      if (!model.all_finite()) {
        throw DivergenceError("parameters became non-finite in epoch " +
                                  std::to_string(epoch),
                              std::move(trace));
      }
    }
    rate *= config.learning_rate_decay;
    auto rec = trace_record(epoch, model, visibles);
    if (!rec) {
      throw DivergenceError("model distribution became non-finite in epoch " +
                                std::to_string(epoch),
                            std::move(trace));
    }
    trace.push_back(*rec);
  }
  return {std::move(model), std::move(trace)};
}

TrainingResult train(const EprDataset& dataset, const TrainerConfig& config) {
  if (dataset.trials.empty()) {
    throw InsufficientDataError("cannot train on an empty dataset");
  }
  return train(encode_dataset(dataset.trials), config);
}

}  // namespace eprbm
