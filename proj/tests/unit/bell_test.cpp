#include "eprbm/bell.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "eprbm/errors.hpp"
#include "support/oracles.hpp"

using namespace eprbm;
using eprbm::oracle::published_model;

namespace {

CorrelationReport published_data_column() {
  return CorrelationReport::make(-0.713, -0.701, -0.714, 0.709,
                                 CorrelationSource::empirical);
}

CorrelationReport published_model_column() {
  return CorrelationReport::make(-0.711, -0.699, -0.713, 0.704,
                                 CorrelationSource::model_exact);
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

TEST(Chsh, DocumentedValues) {
  EXPECT_NEAR(chsh(-0.707, -0.707, -0.707, 0.707), 2.828, 1e-12);
  EXPECT_EQ(chsh(0, 0, 0, 0), 0.0);
  EXPECT_EQ(chsh(1, 1, 1, -1), 4.0);
  EXPECT_THROW(chsh(1.5, 0, 0, 0), std::out_of_range);
  EXPECT_THROW(chsh(0, 0, 0, std::nan("")), std::out_of_range);
}

TEST(ModelCorrelationsExact, PublishedMachineReproducesModelColumn) {
  const CorrelationReport r = model_correlations_exact(published_model());
  EXPECT_EQ(r.source, CorrelationSource::model_exact);
  EXPECT_NEAR(r.c_ab, -0.711, 0.02);
  EXPECT_NEAR(r.c_ab_prime, -0.699, 0.02);
  EXPECT_NEAR(r.c_a_prime_b, -0.713, 0.02);
  EXPECT_NEAR(r.c_a_prime_b_prime, 0.704, 0.02);
  EXPECT_NEAR(r.s, 2.827, 0.04);
  // numpy enumeration of the same parameters
  EXPECT_NEAR(r.c_ab, -0.7108176077738688, 1e-12);
  EXPECT_NEAR(r.c_ab_prime, -0.6988451534994125, 1e-12);
  EXPECT_NEAR(r.c_a_prime_b, -0.7127762918042766, 1e-12);
  EXPECT_NEAR(r.c_a_prime_b_prime, 0.7037915575273738, 1e-12);
  EXPECT_NEAR(r.s, 2.8262306106049317, 1e-12);
}

TEST(ModelCorrelationsExact, ZeroModel) {
  const CorrelationReport r = model_correlations_exact(RbmModel::zeros(4, 4));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(r.at(a, b), 0.0, 1e-15);
  }
  EXPECT_NEAR(r.s, 0.0, 1e-15);
  EXPECT_THROW(model_correlations_exact(RbmModel::zeros(3, 4)), DimensionError);
}

TEST(ModelCorrelationsExact, InvariantUnderOutcomeBitFlip) {
  // Relabel v3 -> 1 - v3 and v4 -> 1 - v4; the energy is unchanged up to a
  // constant when c_i -> -c_i, w_i. -> -w_i, d_j -> d_j + w_ij.
  const RbmModel model = published_model();
  RbmModel flipped = model;
  for (int i : {2, 3}) {
    flipped.visible_bias[i] = -model.visible_bias[i];
    flipped.weights.row(i) = -model.weights.row(i);
    flipped.hidden_bias += model.weights.row(i).transpose();
  }
  const CorrelationReport a = model_correlations_exact(model);
  const CorrelationReport b = model_correlations_exact(flipped);
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) EXPECT_NEAR(a.at(s, t), b.at(s, t), 1e-12);
  }
}

TEST(ModelCorrelationsExact, ChshStaysInRangeForRandomModels) {
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const CorrelationReport r =
        model_correlations_exact(oracle::random_model(4, 4, rng, 8.0));
    EXPECT_GE(r.s, 0.0);
    EXPECT_LE(r.s, 4.0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        EXPECT_LE(std::abs(r.at(a, b)), 1.0 + 1e-12);
      }
    }
  }
}

TEST(ModelCorrelationsExact, AgreesWithGibbsSamples) {
  const RbmModel model = published_model();
  Rng rng(77);
  Configuration c = random_configuration(4, 4, rng);
  for (int s = 0; s < 1000; ++s) gibbs_sweep_inplace(model, c, rng);
  std::array<double, 4> same{};
  std::array<double, 4> count{};
  for (int s = 0; s < 1000000; ++s) {
    gibbs_sweep_inplace(model, c, rng);
    const int k = 2 * c.visible[0] + c.visible[1];
    count[k] += 1;
    same[k] += c.visible[2] == c.visible[3] ? 1.0 : -1.0;
  }
  const CorrelationReport sampled = CorrelationReport::make(
      same[0] / count[0], same[1] / count[1], same[2] / count[2], same[3] / count[3],
      CorrelationSource::model_sampled);
  const CorrelationReport exact = model_correlations_exact(model);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(sampled.at(a, b), exact.at(a, b), 0.01);
  }
}

TEST(TheoryCorrelations, DefaultAngles) {
  const CorrelationReport r = theory_correlations({});
  EXPECT_NEAR(r.c_ab, -std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(r.c_ab_prime, -std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(r.c_a_prime_b, -std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(r.c_a_prime_b_prime, std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(r.s, 2.828, 0.001);
  EXPECT_GT(r.s, 2.8);
  EXPECT_EQ(r.source, CorrelationSource::theory);
}

TEST(TheoryCorrelations, DegenerateAngles) {
  const CorrelationReport equal = theory_correlations({0.4, 0.4, 0.4, 0.4});
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) EXPECT_NEAR(equal.at(a, b), -1.0, 1e-15);
  }
  EXPECT_NEAR(equal.s, 2.0, 1e-15);

  // a = b, a' = b', a perpendicular to a'. With C(a',b') = -1 entering with a
  // minus sign, the combination cancels: |-1 + 0 + 0 + 1| = 0.
  const double half_pi = std::numbers::pi / 2;
  const CorrelationReport aligned = theory_correlations({0.0, half_pi, 0.0, half_pi});
  EXPECT_NEAR(aligned.c_ab, -1.0, 1e-15);
  EXPECT_NEAR(aligned.c_a_prime_b_prime, -1.0, 1e-15);
  EXPECT_NEAR(aligned.c_ab_prime, 0.0, 1e-15);
  EXPECT_NEAR(aligned.c_a_prime_b, 0.0, 1e-15);
  EXPECT_NEAR(aligned.s, 0.0, 1e-15);
}

TEST(ComparisonTable, RendersPublishedValues) {
  const ComparisonTable table =
      comparison_table(theory_correlations({}), published_data_column(), published_model_column());
  std::ostringstream text;
  render_text(table, text);
  const std::string expected =
      "             Theory     Data    Model\n"
      "C(a,b)       -0.707   -0.713   -0.711\n"
      "C(a,b')      -0.707   -0.701   -0.699\n"
      "C(a',b)      -0.707   -0.714   -0.713\n"
      "C(a',b')      0.707    0.709    0.704\n"
      "S             2.828    2.837    2.827\n";
  EXPECT_EQ(text.str(), expected);
}

TEST(ComparisonTable, MissingDataRendersDash) {
  const ComparisonTable table =
      comparison_table(theory_correlations({}), std::nullopt, published_model_column());
  std::ostringstream text;
  render_text(table, text);
  EXPECT_NE(text.str().find("—"), std::string::npos);
  std::ostringstream csv;
  render_csv(table, csv);
  EXPECT_NE(csv.str().find("\"C(a,b)\",-0.707,,-0.711"), std::string::npos);
}

TEST(ComparisonTable, IdenticalColumnsHaveNoDifference) {
  const CorrelationReport r = published_model_column();
  CorrelationReport theory = r;
  theory.source = CorrelationSource::theory;
  CorrelationReport data = r;
  data.source = CorrelationSource::empirical;
  EXPECT_EQ(max_column_difference(comparison_table(theory, data, r)), 0.0);
  EXPECT_GT(max_column_difference(comparison_table(theory_correlations({}),
                                                   published_data_column(), r)),
            0.0);
}

TEST(ComparisonTable, RequiresDistinctSources) {
  EXPECT_THROW(comparison_table(published_model_column(), std::nullopt, published_model_column()),
               std::invalid_argument);
  EXPECT_THROW(comparison_table(theory_correlations({}), theory_correlations({}),
                                published_model_column()),
               std::invalid_argument);
}

TEST(ComparisonTable, CsvRoundTripAtThreeDecimals) {
  Rng rng(90);
  for (int trial = 0; trial < 100; ++trial) {
    auto draw = [&] { return 2.0 * uniform01(rng) - 1.0; };
    const auto model = CorrelationReport::make(draw(), draw(), draw(), draw(),
                                               CorrelationSource::model_exact);
    std::optional<CorrelationReport> data;
    if (trial % 3 != 0) {
      data = CorrelationReport::make(draw(), draw(), draw(), draw(),
                                     CorrelationSource::empirical);
    }
    const ComparisonTable table = comparison_table(theory_correlations({}), data, model);
    std::stringstream csv;
    render_csv(table, csv);
    const ComparisonTable parsed = parse_comparison_csv(csv);
    for (std::size_t r = 0; r < 5; ++r) {
      EXPECT_DOUBLE_EQ(parsed.theory[r], round3(table.theory[r]) + 0.0);
      EXPECT_DOUBLE_EQ(parsed.model[r], round3(table.model[r]) + 0.0);
      ASSERT_EQ(parsed.data.has_value(), table.data.has_value());
      if (table.data) EXPECT_DOUBLE_EQ((*parsed.data)[r], round3((*table.data)[r]) + 0.0);
    }
  }
}

TEST(ComparisonTable, CsvQuotesLabelsContainingCommas) {
  std::ostringstream out;
  render_csv(comparison_table(theory_correlations({}), std::nullopt,
                              model_correlations_exact(published_model())),
             out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line, "\"C(a,b)\",-0.707,,-0.711");
}

TEST(ComparisonTable, ParseRejectsMalformedCsv) {
  std::istringstream bad_header("quantity,theory,model\n");
  EXPECT_THROW(parse_comparison_csv(bad_header), ParseError);
  std::istringstream short_table("quantity,theory,data,model\nC(a,b),1,,1\n");
  EXPECT_THROW(parse_comparison_csv(short_table), ParseError);
}

TEST(BellVerdict, Wording) {
  EXPECT_EQ(bell_verdict(2.8262), "S = 2.826 (> 2: violates CHSH bound)");
  EXPECT_EQ(bell_verdict(0.0), "S = 0.000 (<= 2: does not violate CHSH bound)");
}
