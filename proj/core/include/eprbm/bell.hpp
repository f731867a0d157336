#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "eprbm/correlation.hpp"
#include "eprbm/epr.hpp"
#include "eprbm/exact.hpp"
#include "eprbm/rbm.hpp"

namespace eprbm {

/// C(alpha, beta) = sum over outcome bits of (+1 if equal else -1) times
/// P(v3, v4 | v1 = alpha, v2 = beta).
CorrelationReport model_correlations_exact(const ExactDistribution& dist);
CorrelationReport model_correlations_exact(const RbmModel& model);

/// Singlet prediction C = -cos(theta_alpha - theta_beta).
CorrelationReport theory_correlations(const DetectorAngles& angles);

/// Rows C(a,b), C(a,b'), C(a',b), C(a',b'), S.
using TableColumn = std::array<double, 5>;

inline constexpr std::array<std::string_view, 5> kComparisonRows = {
    "C(a,b)", "C(a,b')", "C(a',b)", "C(a',b')", "S"};

struct ComparisonTable {
  TableColumn theory{};
  std::optional<TableColumn> data;
  TableColumn model{};

  bool operator==(const ComparisonTable&) const = default;
};

/// Throws std::invalid_argument if two of the reports share a source tag.
ComparisonTable comparison_table(const CorrelationReport& theory,
                                 const std::optional<CorrelationReport>& data,
                                 const CorrelationReport& model);

/// Largest absolute difference between any two present columns.
double max_column_difference(const ComparisonTable& table);

/// Aligned Theory/Data/Model text, 3 decimals, absent data shown as an em dash.
void render_text(const ComparisonTable& table, std::ostream& out);

/// CSV with header quantity,theory,data,model; absent data is an empty field.
void render_csv(const ComparisonTable& table, std::ostream& out);
ComparisonTable parse_comparison_csv(std::istream& in);

/// "S = x.xxx (> 2: violates CHSH bound)" or the non-violating variant.
std::string bell_verdict(double s);

}  // namespace eprbm
