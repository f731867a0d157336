#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eprbm/epr.hpp"
#include "eprbm/exact.hpp"
#include "eprbm/rbm.hpp"

namespace eprbm {

/// Where the negative-phase statistics come from.
enum class ModelTerm {
  pcd,    // persistent contrastive divergence
  exact,  // full enumeration; small machines only
};

struct TrainerConfig {
  double learning_rate = 0.1;
  int n_epochs = 200;
  int batch_size = 100;
  int n_persistent_chains = 100;
  int gibbs_steps_per_update = 1;
  std::uint64_t seed = 0;
  double weight_init_scale = 0.01;
  double learning_rate_decay = 0.98;  // multiplies the rate after each epoch
  int n_hidden = 4;
  ModelTerm model_term = ModelTerm::pcd;

  void validate() const;
  bool operator==(const TrainerConfig&) const = default;
};

struct TraceRecord {
  int epoch = 0;
  double log_likelihood = 0.0;  // exact mean log P(v) over the training data
  std::optional<double> chsh;   // only for the 4-visible EPR layout
};

using TrainingTrace = std::vector<TraceRecord>;

/// Thrown when a parameter becomes NaN/inf. Carries the epochs completed so far.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, TrainingTrace partial)
      : std::runtime_error(what), partial_trace_(std::move(partial)) {}
  const TrainingTrace& partial_trace() const { return partial_trace_; }

 private:
  TrainingTrace partial_trace_;
};

/// <v_i h_j> together with the <v_i> and <h_j> terms the bias updates use.
struct Expectations {
  Matrix vh;
  Vector v;
  Vector h;

  Expectations operator-(const Expectations& other) const {
    return {vh - other.vh, v - other.v, h - other.h};
  }
};

/// Positive phase: mean over rows of v_i * P(h_j = 1 | v).
Expectations data_expectation(const RbmModel& model, const Matrix& batch);

/// Negative phase from the exact joint distribution.
Expectations model_expectation_exact(const RbmModel& model);

struct PersistentChains {
  std::vector<Configuration> states;
};

/// Chains started from uniformly random configurations.
PersistentChains pcd_init(const RbmModel& model, int n_chains, Rng& rng);

/// Advances every chain by `k` block-Gibbs sweeps, then averages
/// v_i * P(h_j = 1 | v) over the final visible states. Chains are updated in
/// place and never reset.
Expectations model_expectation_pcd(const RbmModel& model,
                                   PersistentChains& chains, int k, Rng& rng);

/// Gradient of the mean log-likelihood of `visibles`, exact in both phases.
Expectations exact_gradient(const RbmModel& model, const Matrix& visibles);

/// Weights ~ N(0, weight_init_scale^2) from the init stream, biases zero.
RbmModel initial_model(int num_visible, const TrainerConfig& config);

struct TrainingResult {
  RbmModel model;
  TrainingTrace trace;
};

/// Minibatch gradient ascent on the log-likelihood of the rows of `visibles`.
/// Starts from `initial` when given, otherwise from initial_model().
TrainingResult train(const Matrix& visibles, const TrainerConfig& config,
                     const std::optional<RbmModel>& initial = std::nullopt);

TrainingResult train(const EprDataset& dataset, const TrainerConfig& config);

}  // namespace eprbm
