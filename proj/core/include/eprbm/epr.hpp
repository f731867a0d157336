#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "eprbm/correlation.hpp"
#include "eprbm/rbm.hpp"

namespace eprbm {

/// Analyzer orientations in radians. Defaults give S = 2*sqrt(2) for the singlet.
struct DetectorAngles {
  double a = 0.0;
  double a_prime = std::numbers::pi / 2;
  double b = std::numbers::pi / 4;
  double b_prime = -std::numbers::pi / 4;

  double alpha_angle(int alpha) const { return alpha == 0 ? a : a_prime; }
  double beta_angle(int beta) const { return beta == 0 ? b : b_prime; }

  bool operator==(const DetectorAngles&) const = default;
};

/// One run: setting indices (0 = unprimed) and +/-1 outcomes.
struct EprTrial {
  std::uint8_t alpha = 0;
  std::uint8_t beta = 0;
  int x_alpha = 1;
  int x_beta = 1;

  void validate() const;
  bool operator==(const EprTrial&) const = default;
};

struct EprDataset {
  std::vector<EprTrial> trials;
  std::uint64_t seed = 0;
  DetectorAngles angles;
};

/// (1 - x_a x_b cos(theta_a - theta_b)) / 4.
double singlet_joint_probability(double theta_alpha, double theta_beta,
                                 int x_alpha, int x_beta);

/// Uniform independent settings, outcomes from the singlet law. The stream is
/// derive_seed(seed, Stream::data).
EprDataset generate_dataset(const DetectorAngles& angles, std::size_t n_trials,
                            std::uint64_t seed);

/// Mean x_alpha * x_beta per setting pair. Throws InsufficientDataError naming
/// every absent pair.
CorrelationReport empirical_correlations(std::span<const EprTrial> trials);

inline CorrelationReport empirical_correlations(const EprDataset& dataset) {
  return empirical_correlations(dataset.trials);
}

/// (alpha, beta, x_alpha, x_beta) -> (v1, v2, v3, v4) with +1 <-> 1, -1 <-> 0.
std::array<std::uint8_t, 4> encode_trial(const EprTrial& trial);
EprTrial decode_trial(std::span<const std::uint8_t> visible);

/// Encoded dataset, one 0/1 row per trial.
Matrix encode_dataset(std::span<const EprTrial> trials);

// CSV: header alpha,beta,x_alpha,x_beta; settings 0/1, outcomes +1/-1.
void write_dataset_csv(const EprDataset& dataset, std::ostream& out);
std::vector<EprTrial> read_dataset_csv(std::istream& in);

// Sidecar: {"seed", "n_trials", "angles": {"a", "a_prime", "b", "b_prime"}}.
nlohmann::json dataset_sidecar(const EprDataset& dataset);
nlohmann::json angles_to_json(const DetectorAngles& angles);
DetectorAngles angles_from_json(const nlohmann::json& j);

}  // namespace eprbm
