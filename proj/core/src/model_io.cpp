#include <fstream>

#include "json.hpp"
#include "problex/fsio.hpp"
#include "problex/model.hpp"

namespace problex {

namespace {

nlohmann::json word_map(const std::vector<std::string>& words,
                        const std::vector<double>& values) {
  nlohmann::json obj = nlohmann::json::object();
  for (std::size_t i = 0; i < words.size(); ++i) obj[words[i]] = values[i];
  return obj;
}

std::vector<double> lookup_all(const nlohmann::json& obj,
                               const std::vector<std::string>& words,
                               const std::string& field) {
  std::vector<double> out;
  out.reserve(words.size());
  for (const std::string& w : words) {
    if (!obj.contains(w))
      fail_validation("model field '" + field + "' is missing word '" + w +
                      "'");
    out.push_back(obj[w].get<double>());
  }
  return out;
}

}  // namespace

std::string model_to_json(const PredictivenessModel& model) {
  model.check();
  nlohmann::json j;
  nlohmann::json mu = nlohmann::json::object();
  for (std::size_t i = 0; i < model.words0.size(); ++i)
    mu[model.words0[i]] = model.mu0[i];
  for (std::size_t i = 0; i < model.words1.size(); ++i)
    mu[model.words1[i]] = model.mu1[i];
  j["mu"] = mu;
  j["gamma0"] = word_map(model.words0, model.g0);
  j["gamma1"] = word_map(model.words1, model.g1);
  if (model.global_gamma) j["global_gamma"] = *model.global_gamma;
  if (model.tau) j["tau"] = *model.tau;
  j["prior_logodds"] = model.prior_logodds;
  j["lexicons"] = {
      {"lex0", {{"name", model.name0}, {"words", model.words0}}},
      {"lex1", {{"name", model.name1}, {"words", model.words1}}},
  };
  j["meta"] = {
      {"corpus_fingerprint", model.meta.corpus_fingerprint},
      {"solver",
       {{"iterations", model.meta.solver_iterations},
        {"objective", model.meta.solver_objective},
        {"constraint_residual", model.meta.solver_constraint_residual},
        {"converged", model.meta.solver_converged}}},
  };
  return j.dump(2);
}

PredictivenessModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail_io(std::string("bad model JSON: ") + e.what());
  }

  PredictivenessModel model;
  try {
    const auto& lex = j.at("lexicons");
    model.words0 = lex.at("lex0").at("words").get<std::vector<std::string>>();
    model.words1 = lex.at("lex1").at("words").get<std::vector<std::string>>();
    model.name0 = lex.at("lex0").value("name", "lex0");
    model.name1 = lex.at("lex1").value("name", "lex1");
    model.mu0 = lookup_all(j.at("mu"), model.words0, "mu");
    model.mu1 = lookup_all(j.at("mu"), model.words1, "mu");
    model.g0 = lookup_all(j.at("gamma0"), model.words0, "gamma0");
    model.g1 = lookup_all(j.at("gamma1"), model.words1, "gamma1");
    if (j.contains("global_gamma") && !j["global_gamma"].is_null())
      model.global_gamma = j["global_gamma"].get<double>();
    if (j.contains("tau") && !j["tau"].is_null())
      model.tau = j["tau"].get<double>();
    model.prior_logodds = j.value("prior_logodds", 0.0);
    if (j.contains("meta")) {
      const auto& meta = j["meta"];
      model.meta.corpus_fingerprint = meta.value("corpus_fingerprint", "");
      if (meta.contains("solver")) {
        const auto& s = meta["solver"];
        model.meta.solver_iterations = s.value("iterations", 0);
        model.meta.solver_objective = s.value("objective", 0.0);
        model.meta.solver_constraint_residual =
            s.value("constraint_residual", 0.0);
        model.meta.solver_converged = s.value("converged", true);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("model JSON schema error: ") + e.what());
  }
  model.check();
  return model;
}

void write_model(const std::string& path, const PredictivenessModel& model) {
  write_file_atomic(path, model_to_json(model) + "\n");
}

PredictivenessModel read_model(const std::string& path) {
  return model_from_json(read_file(path));
}

}  // namespace problex
