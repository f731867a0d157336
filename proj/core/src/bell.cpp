#include "eprbm/bell.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eprbm/errors.hpp"

namespace eprbm {
namespace {

TableColumn column(const CorrelationReport& r) {
  return {r.c_ab, r.c_ab_prime, r.c_a_prime_b, r.c_a_prime_b_prime, r.s};
}

std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string pad_left(const std::string& s, std::size_t width,
                     std::size_t display_width) {
  return display_width >= width ? s
                                : std::string(width - display_width, ' ') + s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (const char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) throw ParseError("comparison table: unterminated quote in '" + line + "'");
  return fields;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size()) {
    throw ParseError("comparison table: not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

CorrelationReport model_correlations_exact(const ExactDistribution& dist) {
  require_epr_layout(dist.model());
  double c[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const OutcomeTable t = conditional_outcomes(dist, a, b);
      c[a][b] = t[0][0] + t[1][1] - t[0][1] - t[1][0];
    }
  }
  return CorrelationReport::make(c[0][0], c[0][1], c[1][0], c[1][1],
                                 CorrelationSource::model_exact);
}

CorrelationReport model_correlations_exact(const RbmModel& model) {
  require_epr_layout(model);
  return model_correlations_exact(enumerate(model));
}

CorrelationReport theory_correlations(const DetectorAngles& angles) {
  auto c = [&](int a, int b) {
    return -std::cos(angles.alpha_angle(a) - angles.beta_angle(b));
  };
  return CorrelationReport::make(c(0, 0), c(0, 1), c(1, 0), c(1, 1),
                                 CorrelationSource::theory);
}

ComparisonTable comparison_table(const CorrelationReport& theory,
                                 const std::optional<CorrelationReport>& data,
                                 const CorrelationReport& model) {
  if (theory.source == model.source ||
      (data && (data->source == theory.source || data->source == model.source))) {
    throw std::invalid_argument("comparison columns must come from distinct sources");
  }
  ComparisonTable table{column(theory), std::nullopt, column(model)};
  if (data) table.data = column(*data);
  return table;
}

double max_column_difference(const ComparisonTable& table) {
  std::vector<const TableColumn*> cols{&table.theory, &table.model};
  if (table.data) cols.push_back(&*table.data);
  double worst = 0.0;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    for (std::size_t q = p + 1; q < cols.size(); ++q) {
      for (std::size_t r = 0; r < kComparisonRows.size(); ++r) {
        worst = std::max(worst, std::abs((*cols[p])[r] - (*cols[q])[r]));
      }
    }
  }
  return worst;
}

void render_text(const ComparisonTable& table, std::ostream& out) {
  constexpr std::size_t kLabel = 10;
  constexpr std::size_t kCell = 9;
  auto label = [&](std::string_view s) {
    out << s << std::string(kLabel - s.size(), ' ');
  };
  label("");
  out << pad_left("Theory", kCell, 6) << pad_left("Data", kCell, 4)
      << pad_left("Model", kCell, 5) << '\n';
  for (std::size_t r = 0; r < kComparisonRows.size(); ++r) {
    label(kComparisonRows[r]);
    const std::string t = fixed3(table.theory[r]);
    out << pad_left(t, kCell, t.size());
    if (table.data) {
      const std::string d = fixed3((*table.data)[r]);
      out << pad_left(d, kCell, d.size());
    } else {
      out << pad_left("—", kCell, 1);
    }
    const std::string m = fixed3(table.model[r]);
    out << pad_left(m, kCell, m.size()) << '\n';
  }
}

void render_csv(const ComparisonTable& table, std::ostream& out) {
  out << "quantity,theory,data,model\n";
  for (std::size_t r = 0; r < kComparisonRows.size(); ++r) {
    out << '"' << kComparisonRows[r] << "\"," << fixed3(table.theory[r]) << ','
        << (table.data ? fixed3((*table.data)[r]) : std::string{}) << ','
        << fixed3(table.model[r]) << '\n';
  }
}

ComparisonTable parse_comparison_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "quantity,theory,data,model") {
    throw ParseError("comparison table: bad header");
  }
  ComparisonTable table;
  TableColumn data{};
  int data_present = -1;
  for (std::size_t r = 0; r < kComparisonRows.size(); ++r) {
    if (!std::getline(in, line)) {
      throw ParseError("comparison table: missing rows");
    }
    const auto fields = split_csv(line);
    if (fields.size() != 4 || fields[0] != kComparisonRows[r]) {
      throw ParseError("comparison table: bad row '" + line + "'");
    }
    table.theory[r] = parse_double(fields[1]);
    table.model[r] = parse_double(fields[3]);
    const int has_data = fields[2].empty() ? 0 : 1;
    if (data_present >= 0 && has_data != data_present) {
      throw ParseError("comparison table: data column partially empty");
    }
    data_present = has_data;
    if (has_data) data[r] = parse_double(fields[2]);
  }
  if (data_present == 1) table.data = data;
  return table;
}

std::string bell_verdict(double s) {
  return "S = " + fixed3(s) +
         (s > 2.0 ? " (> 2: violates CHSH bound)"
                  : " (<= 2: does not violate CHSH bound)");
}

}  // namespace eprbm
