#include "eprbm/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "eprbm/errors.hpp"
#include "support/oracles.hpp"

using namespace eprbm;
using eprbm::oracle::published_model;

namespace {

double total(std::span<const double> p) {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

}  // namespace

TEST(Enumerate, ZeroModelIsUniform) {
  const ExactDistribution dist = enumerate(RbmModel::zeros(4, 4));
  ASSERT_EQ(dist.joint().size(), 256u);
  for (double p : dist.joint()) EXPECT_NEAR(p, 1.0 / 256.0, 1e-15);
  EXPECT_NEAR(dist.log_partition(), std::log(256.0), 1e-12);
}

TEST(Enumerate, OneByOneHandEnumeration) {
  RbmModel model = RbmModel::zeros(1, 1);
  model.weights(0, 0) = std::log(3.0);
  const ExactDistribution dist = enumerate(model);
  EXPECT_NEAR(dist.probability(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(dist.probability(0, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(dist.probability(0, 1), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(dist.probability(1, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(dist.log_partition(), std::log(6.0), 1e-15);
}

TEST(Enumerate, PublishedMachineNormalizedAndMatchesBruteForce) {
  const RbmModel model = published_model();
  const ExactDistribution dist = enumerate(model);
  EXPECT_NEAR(total(dist.joint()), 1.0, 1e-12);
  // numpy oracle: log Z = 4.742180784636155
  EXPECT_NEAR(dist.log_partition(), 4.742180784636155, 1e-12);
  const auto brute = oracle::brute_force_joint(model);
  for (std::size_t s = 0; s < brute.size(); ++s) {
    EXPECT_GT(dist.joint()[s], 0.0);
    EXPECT_NEAR(dist.joint()[s], brute[s], 1e-12);
    const Configuration c = oracle::config_from_state(s, 4, 4);
    EXPECT_NEAR(dist.joint()[s], std::exp(-energy(model, c) - dist.log_partition()),
                1e-12);
  }
}

TEST(Enumerate, RandomModelsMatchBruteForce) {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 1 + static_cast<int>(uniform01(rng) * 5);
    const int n = 1 + static_cast<int>(uniform01(rng) * 5);
    const RbmModel model = oracle::random_model(m, n, rng, 4.0);
    const ExactDistribution dist = enumerate(model);
    EXPECT_NEAR(dist.log_partition(), oracle::brute_force_log_partition(model), 1e-10);
    EXPECT_NEAR(total(dist.joint()), 1.0, 1e-12);
  }
}

TEST(Enumerate, GuardRejectsLargeMachines) {
  EXPECT_THROW(enumerate(RbmModel::zeros(13, 12)), TooLargeError);
  EXPECT_NO_THROW(enumerate(RbmModel::zeros(10, 6)));
}

TEST(Enumerate, HiddenRelabelingPermutesJoint) {
  Rng rng(4);
  const RbmModel model = oracle::random_model(4, 4, rng);
  const std::array<int, 4> perm = {2, 0, 3, 1};  // new unit j is old perm[j]
  RbmModel permuted = model;
  for (int j = 0; j < 4; ++j) {
    permuted.hidden_bias[j] = model.hidden_bias[perm[j]];
    permuted.weights.col(j) = model.weights.col(perm[j]);
  }
  const ExactDistribution a = enumerate(model);
  const ExactDistribution b = enumerate(permuted);
  for (std::size_t v = 0; v < 16; ++v) {
    for (std::size_t h_new = 0; h_new < 16; ++h_new) {
      const Bits bits = index_bits(h_new, 4);
      Bits old_bits(4);
      for (int j = 0; j < 4; ++j) old_bits[perm[j]] = bits[j];
      EXPECT_NEAR(b.probability(v, h_new), a.probability(v, bits_index(old_bits)),
                  1e-14);
    }
  }
}

TEST(Enumerate, HiddenConditionalIsProductOfActivations) {
  Rng rng(12);
  const RbmModel model = oracle::random_model(4, 3, rng);
  const ExactDistribution dist = enumerate(model);
  for (std::size_t v = 0; v < 16; ++v) {
    const Vector ph = hidden_activation_probs(model, index_bits(v, 4));
    const auto cond = dist.hidden_given_visible(v);
    for (std::size_t h = 0; h < cond.size(); ++h) {
      const Bits hb = index_bits(h, 3);
      double product = 1.0;
      for (int j = 0; j < 3; ++j) product *= hb[j] ? ph[j] : 1.0 - ph[j];
      EXPECT_NEAR(cond[h], product, 1e-12);
    }
  }
}

TEST(Enumerate, LogMarginalMatchesSummedJoint) {
  const ExactDistribution dist = enumerate(published_model());
  const auto marginal = dist.visible_marginal();
  const auto log_marginal = dist.visible_log_marginal();
  for (std::size_t v = 0; v < marginal.size(); ++v) {
    EXPECT_NEAR(std::log(marginal[v]), log_marginal[v], 1e-10);
  }
}

TEST(Enumerate, AverageLogLikelihoodMatchesBruteForce) {
  Rng rng(6);
  const RbmModel model = oracle::random_model(4, 4, rng);
  Matrix rows(50, 4);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index i = 0; i < 4; ++i) rows(r, i) = bernoulli(rng, 0.5);
  }
  EXPECT_NEAR(average_log_likelihood(enumerate(model), rows),
              oracle::brute_force_log_likelihood(model, rows), 1e-12);
  EXPECT_THROW(average_log_likelihood(enumerate(model), Matrix(0, 4)),
               InsufficientDataError);
  EXPECT_THROW(average_log_likelihood(enumerate(model), Matrix::Zero(3, 5)),
               DimensionError);
}

TEST(PairwiseSum, FixedOrderAndAccurate) {
  std::vector<double> values(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(values), 100.0, 1e-12);
  EXPECT_EQ(pairwise_sum(values), pairwise_sum(values));
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(ConditionalOutcomes, PublishedMachineSameOutcomeRate) {
  const ExactDistribution dist = enumerate(published_model());
  const OutcomeTable t = conditional_outcomes(dist, 0, 0);
  EXPECT_NEAR(t[0][0] + t[1][1], 0.145, 0.01);
  // numpy oracle on the published parameters
  EXPECT_NEAR(t[0][0] + t[1][1], 0.1445911961130656, 1e-12);
}

TEST(ConditionalOutcomes, ZeroModelIsUniform) {
  const ExactDistribution dist = enumerate(RbmModel::zeros(4, 4));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (const auto& row : conditional_outcomes(dist, a, b)) {
        for (double p : row) EXPECT_NEAR(p, 0.25, 1e-15);
      }
    }
  }
}

TEST(ConditionalOutcomes, CellsSumToOne) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ExactDistribution dist = enumerate(oracle::random_model(4, 3, rng, 5.0));
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const OutcomeTable t = conditional_outcomes(dist, a, b);
        EXPECT_NEAR(t[0][0] + t[0][1] + t[1][0] + t[1][1], 1.0, 1e-12);
      }
    }
  }
}

TEST(ConditionalOutcomes, RequiresEprLayout) {
  const ExactDistribution dist = enumerate(RbmModel::zeros(3, 2));
  EXPECT_THROW(conditional_outcomes(dist, 0, 0), DimensionError);
  EXPECT_THROW(locality_check(dist), DimensionError);
  EXPECT_THROW(measurement_independence_check(dist), DimensionError);
  EXPECT_THROW(conditional_outcomes(enumerate(RbmModel::zeros(4, 2)), 2, 0),
               std::invalid_argument);
}

TEST(LocalityCheck, PublishedAndZeroModels) {
  EXPECT_LE(locality_check(enumerate(published_model())), 1e-10);
  EXPECT_LE(locality_check(enumerate(RbmModel::zeros(4, 4))), 1e-15);
}

TEST(LocalityCheck, HoldsForRandomMachines) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 6);
    EXPECT_LE(locality_check(enumerate(oracle::random_model(4, n, rng, 6.0))), 1e-10);
  }
}

TEST(MeasurementIndependence, ZeroWeightsGiveNoViolation) {
  Rng rng(7);
  RbmModel model = oracle::random_model(4, 4, rng, 3.0);
  model.weights.setZero();
  const auto report = measurement_independence_check(enumerate(model));
  EXPECT_LT(report.max_total_variation, 1e-12);
}

TEST(MeasurementIndependence, PublishedMachineViolates) {
  const auto report = measurement_independence_check(enumerate(published_model()));
  // Frozen from an independent numpy enumeration of the published parameters.
  EXPECT_NEAR(report.total_variation[0], 0.3520248365356944, 1e-10);
  EXPECT_NEAR(report.total_variation[1], 0.5097421634704505, 1e-10);
  EXPECT_NEAR(report.total_variation[2], 0.5130066024725733, 1e-10);
  EXPECT_NEAR(report.total_variation[3], 0.6200240754510181, 1e-10);
  EXPECT_NEAR(report.max_total_variation, 0.6200240754510181, 1e-10);
  EXPECT_GT(report.max_total_variation, 0.05);
  for (const auto& cond : report.hidden_given_settings) {
    ASSERT_EQ(cond.size(), 16u);
    EXPECT_NEAR(total(cond), 1.0, 1e-12);
  }
  EXPECT_NEAR(total(report.pooled), 1.0, 1e-12);
}

TEST(JointCsv, HeaderAndLexicographicRows) {
  RbmModel model = RbmModel::zeros(4, 4);
  std::ostringstream out;
  write_joint_csv(enumerate(model), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "v1,v2,v3,v4,h1,h2,h3,h4,probability");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 16), "0,0,0,0,0,0,0,0,");
  EXPECT_NEAR(std::stod(line.substr(16)), 1.0 / 256, 1e-17);
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 16), "0,0,0,0,0,0,0,1,");
  int rows = 2;
  std::string last;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 256);
  EXPECT_EQ(last.substr(0, 16), "1,1,1,1,1,1,1,1,");
}
