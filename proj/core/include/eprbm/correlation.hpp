#pragma once

#include <string_view>

namespace eprbm {

enum class CorrelationSource { theory, empirical, model_exact, model_sampled };

std::string_view to_string(CorrelationSource source);

/// S = |C(a,b) + C(a,b') + C(a',b) - C(a',b')|. Inputs must lie in [-1, 1].
double chsh(double c_ab, double c_ab_prime, double c_a_prime_b,
            double c_a_prime_b_prime);

/// The four correlation coefficients of an EPR experiment and their CHSH
/// statistic. Build through make() so that `s` stays consistent.
struct CorrelationReport {
  double c_ab = 0.0;
  double c_ab_prime = 0.0;
  double c_a_prime_b = 0.0;
  double c_a_prime_b_prime = 0.0;
  double s = 0.0;
  CorrelationSource source = CorrelationSource::theory;

  static CorrelationReport make(double c_ab, double c_ab_prime,
                                double c_a_prime_b, double c_a_prime_b_prime,
                                CorrelationSource source);

  /// C for setting indices alpha, beta in {0, 1} (0 = unprimed).
  double at(int alpha, int beta) const;
};

}  // namespace eprbm
