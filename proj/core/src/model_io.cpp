#include "eprbm/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "eprbm/errors.hpp"

namespace eprbm {
namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

Vector vector_from(const json& arr, Eigen::Index expected, const char* what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != expected) {
    throw ParseError(std::string(what) + " must be an array of length " +
                     std::to_string(expected));
  }
  Vector v(expected);
  for (Eigen::Index k = 0; k < expected; ++k) v[k] = arr[k].get<double>();
  return v;
}

std::string model_term_name(ModelTerm term) {
  return term == ModelTerm::pcd ? "pcd" : "exact";
}

}  // namespace

json trainer_config_to_json(const TrainerConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"n_epochs", c.n_epochs},
          {"batch_size", c.batch_size},
          {"n_persistent_chains", c.n_persistent_chains},
          {"gibbs_steps_per_update", c.gibbs_steps_per_update},
          {"seed", c.seed},
          {"weight_init_scale", c.weight_init_scale},
          {"learning_rate_decay", c.learning_rate_decay},
          {"n_hidden", c.n_hidden},
          {"model_term", model_term_name(c.model_term)}};
}

TrainerConfig trainer_config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("trainer config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "learning_rate",     "n_epochs",           "batch_size",
      "n_persistent_chains", "gibbs_steps_per_update", "seed",
      "weight_init_scale", "learning_rate_decay", "n_hidden",
      "model_term"};
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.contains(key)) {
      throw ParseError("unknown trainer config key '" + key + "'");
    }
  }
  TrainerConfig c;
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.n_epochs = j.value("n_epochs", c.n_epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.n_persistent_chains = j.value("n_persistent_chains", c.n_persistent_chains);
    c.gibbs_steps_per_update =
        j.value("gibbs_steps_per_update", c.gibbs_steps_per_update);
    c.seed = j.value("seed", c.seed);
    c.weight_init_scale = j.value("weight_init_scale", c.weight_init_scale);
    c.learning_rate_decay = j.value("learning_rate_decay", c.learning_rate_decay);
    c.n_hidden = j.value("n_hidden", c.n_hidden);
    const std::string term = j.value("model_term", std::string("pcd"));
    if (term == "pcd") {
      c.model_term = ModelTerm::pcd;
    } else if (term == "exact") {
      c.model_term = ModelTerm::exact;
    } else {
      throw ParseError("model_term must be \"pcd\" or \"exact\"");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad trainer config: ") + e.what());
  }
  return c;
}

json model_file_to_json(const ModelFile& file) {
  const RbmModel& model = file.model;
  json weights = json::array();
  for (Eigen::Index i = 0; i < model.num_visible(); ++i) {
    weights.push_back(vector_json(model.weights.row(i).transpose()));
  }
  json j = {
      {"m", model.num_visible()},
      {"n", model.num_hidden()},
      {"visible_bias", vector_json(model.visible_bias)},
      {"hidden_bias", vector_json(model.hidden_bias)},
      {"weights", weights},
      {"trainer", file.trainer ? trainer_config_to_json(*file.trainer) : json()},
      {"dataset_seed", file.dataset_seed ? json(*file.dataset_seed) : json()},
  };
  if (model.num_visible() == 4) {
    j["encoding"] = {{"v1", "alpha"},
                     {"v2", "beta"},
                     {"v3", "x_alpha(+1↔1)"},
                     {"v4", "x_beta(+1↔1)"}};
  }
  if (file.angles) j["angles"] = angles_to_json(*file.angles);
  return j;
}

ModelFile model_file_from_json(const json& j) {
  ModelFile file;
  try {
    const auto m = j.at("m").get<Eigen::Index>();
    const auto n = j.at("n").get<Eigen::Index>();
    if (m < 1 || n < 1) throw ParseError("m and n must be positive");
    file.model.visible_bias = vector_from(j.at("visible_bias"), m, "visible_bias");
    file.model.hidden_bias = vector_from(j.at("hidden_bias"), n, "hidden_bias");
    const json& w = j.at("weights");
    file.model.weights.resize(m, n);
    if (w.is_array() && static_cast<Eigen::Index>(w.size()) == m * n &&
        !w.empty() && w[0].is_number()) {
      for (Eigen::Index k = 0; k < m * n; ++k) {
        file.model.weights(k / n, k % n) = w[k].get<double>();
      }
    } else if (w.is_array() && static_cast<Eigen::Index>(w.size()) == m) {
      for (Eigen::Index i = 0; i < m; ++i) {
        file.model.weights.row(i) = vector_from(w[i], n, "weights row").transpose();
      }
    } else {
      throw ParseError("weights must be m rows of n numbers or a flat m*n array");
    }
    if (j.contains("trainer") && !j["trainer"].is_null()) {
      file.trainer = trainer_config_from_json(j["trainer"]);
    }
    if (j.contains("dataset_seed") && !j["dataset_seed"].is_null()) {
      file.dataset_seed = j["dataset_seed"].get<std::uint64_t>();
    }
    if (j.contains("angles") && !j["angles"].is_null()) {
      file.angles = angles_from_json(j["angles"]);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model file: ") + e.what());
  }
  try {
    file.model.validate();
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad model file: ") + e.what());
  }
  return file;
}

void write_model_json(const ModelFile& file, std::ostream& out) {
  out << model_file_to_json(file).dump(2) << '\n';
}

ModelFile read_model_json(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_file_from_json(j);
}

ModelFile load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  return read_model_json(in);
}

}  // namespace eprbm
