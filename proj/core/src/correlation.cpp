#include "eprbm/correlation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eprbm {

std::string_view to_string(CorrelationSource source) {
  switch (source) {
    case CorrelationSource::theory:
      return "theory";
    case CorrelationSource::empirical:
      return "empirical";
    case CorrelationSource::model_exact:
      return "model-exact";
    case CorrelationSource::model_sampled:
      return "model-sampled";
  }
  return "unknown";
}

double chsh(double c_ab, double c_ab_prime, double c_a_prime_b,
            double c_a_prime_b_prime) {
  for (double c : {c_ab, c_ab_prime, c_a_prime_b, c_a_prime_b_prime}) {
    // A few ulps of slack for coefficients computed as P(same) - P(diff).
    if (!(c >= -1.0 - 1e-12 && c <= 1.0 + 1e-12)) {
      throw std::out_of_range("correlation coefficient " + std::to_string(c) +
                              " outside [-1, 1]");
    }
  }
  return std::abs(c_ab + c_ab_prime + c_a_prime_b - c_a_prime_b_prime);
}

CorrelationReport CorrelationReport::make(double c_ab, double c_ab_prime,
                                          double c_a_prime_b,
                                          double c_a_prime_b_prime,
                                          CorrelationSource source) {
  return CorrelationReport{c_ab,
                           c_ab_prime,
                           c_a_prime_b,
                           c_a_prime_b_prime,
                           chsh(c_ab, c_ab_prime, c_a_prime_b, c_a_prime_b_prime),
                           source};
}

double CorrelationReport::at(int alpha, int beta) const {
  if (alpha == 0 && beta == 0) return c_ab;
  if (alpha == 0 && beta == 1) return c_ab_prime;
  if (alpha == 1 && beta == 0) return c_a_prime_b;
  if (alpha == 1 && beta == 1) return c_a_prime_b_prime;
  throw std::out_of_range("setting indices must be 0 or 1");
}

}  // namespace eprbm
