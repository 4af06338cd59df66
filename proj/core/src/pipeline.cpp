#include "problex/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "problex/evaluation.hpp"
#include "problex/fsio.hpp"
#include "problex/lexicon.hpp"
#include "problex/model.hpp"
#include "problex/moments.hpp"

namespace problex {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() +
                                               ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot write file: " + tmp.string());
    out << content;
    if (!out.flush()) fail_io("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail_io("rename failed for " + path + ": " + ec.message());
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail_io(std::string("bad pipeline config JSON: ") + e.what());
  }
  PipelineConfig cfg;
  try {
    const auto& corpus = j.at("corpus");
    cfg.corpus_path = corpus.at("path").get<std::string>();
    cfg.corpus_format = corpus.value("format", "jsonl");
    cfg.ingest.tokenizer.lowercase = corpus.value("lowercase", true);
    if (corpus.value("ratings", false))
      cfg.ingest.ratings = RatingPolicy::stars_1to5;
    cfg.lex0_path = j.at("lex0").get<std::string>();
    cfg.lex1_path = j.at("lex1").get<std::string>();
    if (j.contains("rules"))
      cfg.rules = j["rules"].get<std::vector<std::string>>();
    cfg.prune = j.value("prune", true);
    cfg.estimate_tau = j.value("estimate_tau", false);
    cfg.prior_logodds = j.value("prior_logodds", 0.0);
    cfg.out_dir = j.at("out_dir").get<std::string>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      cfg.solver.rho_init = s.value("rho", cfg.solver.rho_init);
      cfg.solver.rho2_init = s.value("rho2", cfg.solver.rho2_init);
      cfg.solver.abs_tol = s.value("abs_tol", cfg.solver.abs_tol);
      cfg.solver.rel_tol = s.value("rel_tol", cfg.solver.rel_tol);
      cfg.solver.max_outer = s.value("max_outer", cfg.solver.max_outer);
      cfg.solver.max_inner = s.value("max_inner", cfg.solver.max_inner);
    }
  } catch (const nlohmann::json::exception& e) {
    fail_validation(std::string("pipeline config schema error: ") + e.what());
  }
  return cfg;
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorKind::validation,
                std::string(name) + ": " + e.what());
  }
}

}  // namespace

PipelineOutputs run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  if (config.out_dir.empty()) fail_validation("pipeline needs an out_dir");
  fs::create_directories(config.out_dir);

  std::ostringstream trace;

  Corpus corpus = stage("ingest", [&] {
    return config.corpus_format == "text"
               ? read_corpus_text(config.corpus_path, config.ingest)
               : read_corpus_jsonl(config.corpus_path, config.ingest);
  });
  trace << "ingest: documents=" << corpus.size()
        << " vocab=" << corpus.vocab.size() << "\n";

  CorpusStats stats = stage("stats", [&] { return corpus_stats(corpus); });
  std::vector<double> mu =
      stage("baseline", [&] { return estimate_baseline(corpus); });

  LexiconPair pair = stage("lexicons", [&] {
    LexiconLoad l0 = load_lexicon(config.lex0_path, corpus.vocab,
                                  config.ingest.tokenizer);
    LexiconLoad l1 = load_lexicon(config.lex1_path, corpus.vocab,
                                  config.ingest.tokenizer);
    trace << "lexicons: side0=" << l0.ids.size() << " (" << l0.out_of_vocab.size()
          << " oov), side1=" << l1.ids.size() << " (" << l1.out_of_vocab.size()
          << " oov)\n";
    return validate_pair(std::move(l0.ids), std::move(l1.ids), nullptr,
                         "lex0", "lex1");
  });

  if (config.prune) {
    pair = stage("prune", [&] {
      PruneReport report;
      LexiconPair pruned = prune_lexicons(corpus, pair, stats, mu, &report);
      trace << "prune: removed " << report.removed0.size() << "+"
            << report.zero_mu0.size() << " from side 0, "
            << report.removed1.size() << "+" << report.zero_mu1.size()
            << " from side 1\n";
      return pruned;
    });
  }

  MomentStats moments = stage(
      "moments", [&] { return compute_moments(corpus, pair, mu, stats); });

  SolverResult solved =
      stage("fit", [&] { return problex::fit(moments, config.solver); });
  for (const TraceRow& row : solved.history) {
    trace << "fit: iter=" << row.iteration << " J=" << row.objective
          << " primal=" << row.primal << " dual=" << row.dual
          << " rho=" << row.rho << "\n";
  }
  trace << "fit: converged=" << (solved.converged ? "yes" : "no")
        << " constraint_residual=" << solved.constraint_residual << "\n";
  if (!solved.converged)
    fail_convergence("fit: solver did not converge within max_outer");

  PredictivenessModel model;
  for (WordId id : pair.lex0) model.words0.push_back(corpus.vocab.word(id));
  for (WordId id : pair.lex1) model.words1.push_back(corpus.vocab.word(id));
  model.mu0 = moments.mu0;
  model.mu1 = moments.mu1;
  model.g0 = solved.g0;
  model.g1 = solved.g1;
  model.prior_logodds = config.prior_logodds;
  model.name0 = pair.name0;
  model.name1 = pair.name1;
  model.meta.corpus_fingerprint = corpus_fingerprint(corpus);
  model.meta.solver_iterations = solved.outer_iterations;
  model.meta.solver_objective = solved.objective;
  model.meta.solver_constraint_residual = solved.constraint_residual;
  model.meta.solver_converged = solved.converged;

  if (config.estimate_tau) {
    TauEstimate tau = stage("tau", [&] {
      return estimate_concentration(corpus, pair, mu);
    });
    model.tau = tau.tau;
    trace << "tau: estimate=" << tau.tau
          << (tau.low_confidence ? " (low confidence)" : "") << "\n";
  }

  PipelineOutputs outputs;
  outputs.model_path = (fs::path(config.out_dir) / "model.json").string();
  stage("write-model", [&] {
    write_model(outputs.model_path, model);
    return 0;
  });

  const std::string primary_rule = model.tau ? "dcm" : "mult";
  outputs.scores_path = (fs::path(config.out_dir) / "scores.jsonl").string();
  stage("classify", [&] {
    Scorer scorer(model, corpus.vocab);
    std::ostringstream lines;
    for (std::size_t t = 0; t < corpus.docs.size(); ++t) {
      const double s = scorer.score(primary_rule, corpus.docs[t]);
      nlohmann::json row;
      row["id"] = t < corpus.ids.size() ? corpus.ids[t] : std::to_string(t);
      row["score"] = s;
      row["label"] = decide(s);
      lines << row.dump() << "\n";
    }
    write_file_atomic(outputs.scores_path, lines.str());
    return 0;
  });
  trace << "classify: rule=" << primary_rule << " documents=" << corpus.size()
        << "\n";

  if (corpus.has_labels()) {
    outputs.report_path = (fs::path(config.out_dir) / "report.json").string();
    stage("evaluate", [&] {
      EvalReport report = evaluate(corpus, model, config.rules);
      write_file_atomic(outputs.report_path, report_to_json(report) + "\n");
      return 0;
    });
    trace << "evaluate: rules=" << config.rules.size() << "\n";
  }

  outputs.trace_path = (fs::path(config.out_dir) / "trace.log").string();
  write_file_atomic(outputs.trace_path, trace.str());
  return outputs;
}

}  // namespace problex
