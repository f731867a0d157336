#include "eprbm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "eprbm/errors.hpp"

namespace eprbm {
namespace {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// -F(v) for every visible state, and the per-visible hidden fields d + W^T v.
struct VisibleFields {
  std::vector<double> visible_term;  // c.v
  Matrix hidden_field;               // n x 2^m
};

VisibleFields visible_fields(const RbmModel& model) {
  const int m = static_cast<int>(model.num_visible());
  const std::size_t count = std::size_t{1} << m;
  VisibleFields f{std::vector<double>(count),
                  Matrix(model.num_hidden(), static_cast<Eigen::Index>(count))};
  for (std::size_t v = 0; v < count; ++v) {
    double cv = 0.0;
    Vector field = model.hidden_bias;
    for (int i = 0; i < m; ++i) {
      if ((v >> (m - 1 - i)) & 1U) {
        cv += model.visible_bias[i];
        field += model.weights.row(i).transpose();
      }
    }
    f.visible_term[v] = cv;
    f.hidden_field.col(static_cast<Eigen::Index>(v)) = field;
  }
  return f;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  double tv = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
  return 0.5 * tv;
}

}  // namespace

Bits index_bits(std::size_t index, int width) {
  Bits bits(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) {
    bits[k] = static_cast<std::uint8_t>((index >> (width - 1 - k)) & 1U);
  }
  return bits;
}

std::size_t bits_index(std::span<const std::uint8_t> bits) {
  std::size_t index = 0;
  for (auto b : bits) index = (index << 1) | (b & 1U);
  return index;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void require_epr_layout(const RbmModel& model) {
  if (model.num_visible() != 4) {
    throw DimensionError("EPR layout needs exactly 4 visible units, model has " +
                         std::to_string(model.num_visible()));
  }
}

ExactDistribution enumerate(const RbmModel& model) {
  model.validate();
  const int m = static_cast<int>(model.num_visible());
  const int n = static_cast<int>(model.num_hidden());
  if (m + n > kMaxEnumeratedUnits) {
    throw TooLargeError("model with " + std::to_string(m + n) +
                        " units is too large for exact inference (limit " +
                        std::to_string(kMaxEnumeratedUnits) + ")");
  }

  const VisibleFields fields = visible_fields(model);
  const std::size_t hidden_count = std::size_t{1} << n;
  const std::size_t total = (std::size_t{1} << m) * hidden_count;

  // log-weight = -E(v, h); filled in state order.
  std::vector<double> log_weight(total);
  for (std::size_t v = 0; v < (std::size_t{1} << m); ++v) {
    const auto field = fields.hidden_field.col(static_cast<Eigen::Index>(v));
    for (std::size_t h = 0; h < hidden_count; ++h) {
      double lw = fields.visible_term[v];
      for (int j = 0; j < n; ++j) {
        if ((h >> (n - 1 - j)) & 1U) lw += field[j];
      }
      log_weight[(v << n) | h] = lw;
    }
  }

  const double max_lw = *std::max_element(log_weight.begin(), log_weight.end());
  std::vector<double> scaled(total);
  for (std::size_t s = 0; s < total; ++s) {
    scaled[s] = std::exp(log_weight[s] - max_lw);
  }
  const double log_z = max_lw + std::log(pairwise_sum(scaled));

  ExactDistribution dist;
  dist.model_ = model;
  dist.log_partition_ = log_z;
  dist.joint_.resize(total);
  for (std::size_t s = 0; s < total; ++s) {
    dist.joint_[s] = std::exp(log_weight[s] - log_z);
  }
  return dist;
}

std::vector<double> ExactDistribution::visible_marginal() const {
  std::vector<double> marginal(num_visible_states());
  for (std::size_t v = 0; v < marginal.size(); ++v) {
    marginal[v] = pairwise_sum(
        std::span<const double>(joint_).subspan(v << n(), num_hidden_states()));
  }
  return marginal;
}

std::vector<double> ExactDistribution::visible_log_marginal() const {
  const VisibleFields fields = visible_fields(model_);
  std::vector<double> out(num_visible_states());
  for (std::size_t v = 0; v < out.size(); ++v) {
    double neg_free_energy = fields.visible_term[v];
    for (int j = 0; j < n(); ++j) {
      neg_free_energy +=
          softplus(fields.hidden_field(j, static_cast<Eigen::Index>(v)));
    }
    out[v] = neg_free_energy - log_partition_;
  }
  return out;
}

std::vector<double> ExactDistribution::hidden_given_visible(
    std::size_t visible_index) const {
  auto row = std::span<const double>(joint_).subspan(visible_index << n(),
                                                     num_hidden_states());
  const double norm = pairwise_sum(row);
  std::vector<double> out(row.begin(), row.end());
  for (double& p : out) p /= norm;
  return out;
}

OutcomeTable conditional_outcomes(const ExactDistribution& dist, int alpha,
                                  int beta) {
  require_epr_layout(dist.model());
  if ((alpha != 0 && alpha != 1) || (beta != 0 && beta != 1)) {
    throw std::invalid_argument("settings must be 0 or 1");
  }
  const auto marginal = dist.visible_marginal();
  OutcomeTable table{};
  double norm = 0.0;
  for (int x3 = 0; x3 < 2; ++x3) {
    for (int x4 = 0; x4 < 2; ++x4) {
      const std::size_t v = (alpha << 3) | (beta << 2) | (x3 << 1) | x4;
      table[x3][x4] = marginal[v];
      norm += marginal[v];
    }
  }
  for (auto& row : table) {
    for (double& p : row) p /= norm;
  }
  return table;
}

double locality_check(const ExactDistribution& dist) {
  require_epr_layout(dist.model());
  const std::size_t hidden_count = dist.num_hidden_states();
  double worst = 0.0;
  for (std::size_t lambda = 0; lambda < hidden_count; ++lambda) {
    // p[alpha][beta][x3][x4] = P(v, lambda)
    double p[2][2][2][2];
    for (std::size_t v = 0; v < 16; ++v) {
      p[(v >> 3) & 1][(v >> 2) & 1][(v >> 1) & 1][v & 1] =
          dist.probability(v, lambda);
    }
    // P(x_alpha | alpha, lambda) and P(x_beta | beta, lambda).
    double pa[2][2];
    double pb[2][2];
    for (int s = 0; s < 2; ++s) {
      double num_a[2] = {0.0, 0.0};
      double num_b[2] = {0.0, 0.0};
      for (int o = 0; o < 2; ++o) {
        for (int other = 0; other < 2; ++other) {
          for (int xo = 0; xo < 2; ++xo) {
            num_a[o] += p[s][other][o][xo];
            num_b[o] += p[other][s][xo][o];
          }
        }
      }
      for (int o = 0; o < 2; ++o) {
        pa[s][o] = num_a[o] / (num_a[0] + num_a[1]);
        pb[s][o] = num_b[o] / (num_b[0] + num_b[1]);
      }
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const double norm =
            p[a][b][0][0] + p[a][b][0][1] + p[a][b][1][0] + p[a][b][1][1];
        for (int xa = 0; xa < 2; ++xa) {
          for (int xb = 0; xb < 2; ++xb) {
            const double joint = p[a][b][xa][xb] / norm;
            worst = std::max(worst, std::abs(joint - pa[a][xa] * pb[b][xb]));
          }
        }
      }
    }
  }
  return worst;
}

MeasurementIndependenceReport measurement_independence_check(
    const ExactDistribution& dist) {
  require_epr_layout(dist.model());
  const std::size_t hidden_count = dist.num_hidden_states();
  MeasurementIndependenceReport report;
  report.pooled.assign(hidden_count, 0.0);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      auto& cond = report.hidden_given_settings[2 * a + b];
      cond.assign(hidden_count, 0.0);
      for (int xo = 0; xo < 4; ++xo) {
        const std::size_t v = (a << 3) | (b << 2) | xo;
        for (std::size_t h = 0; h < hidden_count; ++h) {
          cond[h] += dist.probability(v, h);
        }
      }
      const double norm = pairwise_sum(cond);
      for (double& q : cond) q /= norm;
      for (std::size_t h = 0; h < hidden_count; ++h) {
        report.pooled[h] += 0.25 * cond[h];
      }
    }
  }
  for (int k = 0; k < 4; ++k) {
    report.total_variation[k] =
        total_variation(report.hidden_given_settings[k], report.pooled);
    report.max_total_variation =
        std::max(report.max_total_variation, report.total_variation[k]);
  }
  return report;
}

double average_log_likelihood(const ExactDistribution& dist,
                              const Matrix& visibles) {
  if (visibles.cols() != dist.model().num_visible()) {
    throw DimensionError("visible rows do not match model width");
  }
  if (visibles.rows() == 0) {
    throw InsufficientDataError("log-likelihood of an empty dataset");
  }
  const auto log_p = dist.visible_log_marginal();
  std::vector<std::size_t> counts(log_p.size(), 0);
  for (Eigen::Index r = 0; r < visibles.rows(); ++r) {
    std::size_t v = 0;
    for (Eigen::Index i = 0; i < visibles.cols(); ++i) {
      v = (v << 1) | (visibles(r, i) != 0.0 ? 1U : 0U);
    }
    ++counts[v];
  }
  double total = 0.0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (counts[v] != 0) total += static_cast<double>(counts[v]) * log_p[v];
  }
  return total / static_cast<double>(visibles.rows());
}

void write_joint_csv(const ExactDistribution& dist, std::ostream& out) {
  const int m = static_cast<int>(dist.model().num_visible());
  const int n = static_cast<int>(dist.model().num_hidden());
  for (int i = 1; i <= m; ++i) out << 'v' << i << ',';
  for (int j = 1; j <= n; ++j) out << 'h' << j << ',';
  out << "probability\n";
  const auto old_precision = out.precision(17);
  for (std::size_t s = 0; s < dist.joint().size(); ++s) {
    for (auto b : index_bits(s, m + n)) out << int{b} << ',';
    out << dist.joint()[s] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace eprbm
