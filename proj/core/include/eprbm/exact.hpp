#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "eprbm/rbm.hpp"

namespace eprbm {

/// Largest m + n accepted by enumerate(); 2^24 states.
inline constexpr int kMaxEnumeratedUnits = 24;

/// Full Boltzmann distribution P(v, h) of a small RBM.
///
/// States are indexed lexicographically over the bit string (v1..vm, h1..hn),
/// v1 most significant, so state = (visible_index << n) | hidden_index.
class ExactDistribution {
 public:
  const RbmModel& model() const { return model_; }
  double log_partition() const { return log_partition_; }
  std::span<const double> joint() const { return joint_; }

  std::size_t num_visible_states() const { return std::size_t{1} << m(); }
  std::size_t num_hidden_states() const { return std::size_t{1} << n(); }

  double probability(std::size_t visible_index, std::size_t hidden_index) const {
    return joint_[(visible_index << n()) | hidden_index];
  }

  /// P(v) for every visible index.
  std::vector<double> visible_marginal() const;

  /// log P(v) for every visible index, from the free energy rather than the
  /// (possibly underflowing) joint table.
  std::vector<double> visible_log_marginal() const;

  /// P(h | v) for every hidden index.
  std::vector<double> hidden_given_visible(std::size_t visible_index) const;

 private:
  friend ExactDistribution enumerate(const RbmModel& model);

  int m() const { return static_cast<int>(model_.num_visible()); }
  int n() const { return static_cast<int>(model_.num_hidden()); }

  RbmModel model_;
  double log_partition_ = 0.0;
  std::vector<double> joint_;
};

/// Bits of `index` as a width-long vector, most significant first.
Bits index_bits(std::size_t index, int width);
std::size_t bits_index(std::span<const std::uint8_t> bits);

/// Enumerates all 2^(m+n) configurations. Throws TooLargeError past
/// kMaxEnumeratedUnits.
ExactDistribution enumerate(const RbmModel& model);

/// Sum with a fixed pairwise reduction tree.
double pairwise_sum(std::span<const double> values);

// --- EPR layout: v1 = alpha, v2 = beta, v3 = x_alpha bit, v4 = x_beta bit.

/// P(v3, v4 | v1 = alpha, v2 = beta), indexed [v3][v4].
using OutcomeTable = std::array<std::array<double, 2>, 2>;

OutcomeTable conditional_outcomes(const ExactDistribution& dist, int alpha,
                                  int beta);

/// Largest |P(x_a, x_b | a, b, lambda) - P(x_a | a, lambda) P(x_b | b, lambda)|
/// over hidden states, setting pairs and outcome pairs.
double locality_check(const ExactDistribution& dist);

struct MeasurementIndependenceReport {
  /// P(lambda | alpha, beta), indexed [2 * alpha + beta][hidden_index].
  std::array<std::vector<double>, 4> hidden_given_settings;
  /// Uniform average of the four conditionals.
  std::vector<double> pooled;
  /// Total-variation distance of each conditional to `pooled`.
  std::array<double, 4> total_variation{};
  double max_total_variation = 0.0;
};

MeasurementIndependenceReport measurement_independence_check(
    const ExactDistribution& dist);

/// Mean of log P(v) over the rows of `visibles` (each row a 0/1 vector).
double average_log_likelihood(const ExactDistribution& dist,
                              const Matrix& visibles);

/// CSV dump: v1..vm,h1..hn,probability in state order.
void write_joint_csv(const ExactDistribution& dist, std::ostream& out);

void require_epr_layout(const RbmModel& model);

}  // namespace eprbm
