#include "eprbm/epr.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "eprbm/errors.hpp"
#include "eprbm/random.hpp"

namespace eprbm {
namespace {

bool is_outcome(int x) { return x == 1 || x == -1; }

int parse_int_field(const std::string& field, std::size_t line) {
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(field, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (field.empty() || pos != field.size()) {
    throw ParseError("dataset line " + std::to_string(line) +
                     ": not an integer: '" + field + "'");
  }
  return value;
}

}  // namespace

void EprTrial::validate() const {
  if (alpha > 1 || beta > 1) {
    throw std::invalid_argument("setting index must be 0 or 1");
  }
  if (!is_outcome(x_alpha) || !is_outcome(x_beta)) {
    throw std::invalid_argument("outcome must be +1 or -1");
  }
}

double singlet_joint_probability(double theta_alpha, double theta_beta,
                                 int x_alpha, int x_beta) {
  if (!is_outcome(x_alpha) || !is_outcome(x_beta)) {
    throw std::invalid_argument("outcome must be +1 or -1");
  }
  return (1.0 - x_alpha * x_beta * std::cos(theta_alpha - theta_beta)) / 4.0;
}

EprDataset generate_dataset(const DetectorAngles& angles, std::size_t n_trials,
                            std::uint64_t seed) {
  if (n_trials == 0) {
    throw std::invalid_argument("n_trials must be at least 1");
  }
  constexpr int kOutcomes[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  Rng rng = make_rng(seed, Stream::data);
  EprDataset dataset{{}, seed, angles};
  dataset.trials.reserve(n_trials);
  for (std::size_t t = 0; t < n_trials; ++t) {
    EprTrial trial;
    trial.alpha = bernoulli(rng, 0.5) ? 1 : 0;
    trial.beta = bernoulli(rng, 0.5) ? 1 : 0;
    const double ta = angles.alpha_angle(trial.alpha);
    const double tb = angles.beta_angle(trial.beta);
    const double u = uniform01(rng);
    double cumulative = 0.0;
    int pick = 3;
    for (int k = 0; k < 3; ++k) {
      cumulative +=
          singlet_joint_probability(ta, tb, kOutcomes[k][0], kOutcomes[k][1]);
      if (u < cumulative) {
        pick = k;
        break;
      }
    }
    trial.x_alpha = kOutcomes[pick][0];
    trial.x_beta = kOutcomes[pick][1];
    dataset.trials.push_back(trial);
  }
  return dataset;
}

CorrelationReport empirical_correlations(std::span<const EprTrial> trials) {
  std::array<long long, 4> sum{};
  std::array<long long, 4> count{};
  for (const auto& t : trials) {
    t.validate();
    const int k = 2 * t.alpha + t.beta;
    sum[k] += t.x_alpha * t.x_beta;
    ++count[k];
  }
  static constexpr const char* kNames[4] = {"(a,b)", "(a,b')", "(a',b)",
                                            "(a',b')"};
  std::string missing;
  for (int k = 0; k < 4; ++k) {
    if (count[k] == 0) {
      missing += missing.empty() ? "" : ", ";
      missing += kNames[k];
    }
  }
  if (!missing.empty()) {
    throw InsufficientDataError("no trials for setting pair(s) " + missing);
  }
  auto c = [&](int k) {
    return static_cast<double>(sum[k]) / static_cast<double>(count[k]);
  };
  return CorrelationReport::make(c(0), c(1), c(2), c(3),
                                 CorrelationSource::empirical);
}

std::array<std::uint8_t, 4> encode_trial(const EprTrial& trial) {
  trial.validate();
  return {trial.alpha, trial.beta,
          static_cast<std::uint8_t>(trial.x_alpha > 0 ? 1 : 0),
          static_cast<std::uint8_t>(trial.x_beta > 0 ? 1 : 0)};
}

EprTrial decode_trial(std::span<const std::uint8_t> visible) {
  if (visible.size() != 4) {
    throw DimensionError("an encoded trial has exactly 4 visible units");
  }
  for (auto b : visible) {
    if (b > 1) throw std::invalid_argument("encoded trial must be binary");
  }
  return EprTrial{visible[0], visible[1], visible[2] ? 1 : -1,
                  visible[3] ? 1 : -1};
}

Matrix encode_dataset(std::span<const EprTrial> trials) {
  Matrix out(static_cast<Eigen::Index>(trials.size()), 4);
  for (std::size_t r = 0; r < trials.size(); ++r) {
    const auto v = encode_trial(trials[r]);
    for (int i = 0; i < 4; ++i) out(static_cast<Eigen::Index>(r), i) = v[i];
  }
  return out;
}

void write_dataset_csv(const EprDataset& dataset, std::ostream& out) {
  out << "alpha,beta,x_alpha,x_beta\n";
  for (const auto& t : dataset.trials) {
    t.validate();
    out << int{t.alpha} << ',' << int{t.beta} << ','
        << (t.x_alpha > 0 ? "+1" : "-1") << ','
        << (t.x_beta > 0 ? "+1" : "-1") << '\n';
  }
}

std::vector<EprTrial> read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("dataset is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "alpha,beta,x_alpha,x_beta") {
    throw ParseError("unexpected dataset header: '" + line + "'");
  }
  std::vector<EprTrial> trials;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    int values[4];
    int k = 0;
    while (std::getline(row, field, ',')) {
      if (k == 4) {
        throw ParseError("dataset line " + std::to_string(line_no) +
                         ": too many fields");
      }
      values[k++] = parse_int_field(field, line_no);
    }
    if (k != 4) {
      throw ParseError("dataset line " + std::to_string(line_no) +
                       ": expected 4 fields");
    }
    if ((values[0] != 0 && values[0] != 1) ||
        (values[1] != 0 && values[1] != 1) || !is_outcome(values[2]) ||
        !is_outcome(values[3])) {
      throw ParseError("dataset line " + std::to_string(line_no) +
                       ": value out of range");
    }
    trials.push_back(EprTrial{static_cast<std::uint8_t>(values[0]),
                              static_cast<std::uint8_t>(values[1]), values[2],
                              values[3]});
  }
  return trials;
}

nlohmann::json angles_to_json(const DetectorAngles& angles) {
  return {{"a", angles.a},
          {"a_prime", angles.a_prime},
          {"b", angles.b},
          {"b_prime", angles.b_prime}};
}

DetectorAngles angles_from_json(const nlohmann::json& j) {
  try {
    return DetectorAngles{j.at("a").get<double>(), j.at("a_prime").get<double>(),
                          j.at("b").get<double>(), j.at("b_prime").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad angles object: ") + e.what());
  }
}

nlohmann::json dataset_sidecar(const EprDataset& dataset) {
  return {{"seed", dataset.seed},
          {"n_trials", dataset.trials.size()},
          {"angles", angles_to_json(dataset.angles)}};
}

}  // namespace eprbm
