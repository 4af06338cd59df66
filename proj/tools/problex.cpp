// problex: lexicon-based text classification with unsupervised per-word
// predictiveness weights.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "problex/analysis.hpp"
#include "problex/corpus.hpp"
#include "problex/evaluation.hpp"
#include "problex/fsio.hpp"
#include "problex/lexicon.hpp"
#include "problex/model.hpp"
#include "problex/moments.hpp"
#include "problex/pipeline.hpp"
#include "problex/solver.hpp"

namespace {

using namespace problex;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("PROBLEX_SEED");
  if (!raw || !*raw) return std::nullopt;
  return std::strtoull(raw, nullptr, 10);
}

Corpus load_corpus(const std::string& path, const std::string& format,
                   const IngestOptions& opt) {
  if (format == "text") return read_corpus_text(path, opt);
  if (format == "jsonl") return read_corpus_jsonl(path, opt);
  fail_validation("unknown corpus format: " + format);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    write_file_atomic(out_path, content);
}

struct CorpusArgs {
  std::string path;
  std::string format = "jsonl";
  bool no_lowercase = false;
  bool ratings = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", path, "corpus file")->required();
    cmd->add_option("--format", format, "corpus format: jsonl or text");
    cmd->add_flag("--no-lowercase", no_lowercase, "keep token case");
    cmd->add_flag("--ratings", ratings,
                  "map a 1-5 'rating' field to labels (>=4 pos, <=2 neg, "
                  "3 dropped)");
  }
  IngestOptions options() const {
    IngestOptions opt;
    opt.tokenizer.lowercase = !no_lowercase;
    opt.ratings = ratings ? RatingPolicy::stars_1to5 : RatingPolicy::none;
    return opt;
  }
};

struct FitArgs {
  CorpusArgs corpus;
  std::string lex0, lex1, out = "model.json", trace, vocab_out;
  bool no_prune = false, estimate_tau = false;
  double prior = 0;
  SolverConfig solver;
};

int run_fit(const FitArgs& args) {
  Corpus corpus =
      load_corpus(args.corpus.path, args.corpus.format, args.corpus.options());
  if (!args.vocab_out.empty()) write_vocabulary(args.vocab_out, corpus.vocab);
  CorpusStats stats = corpus_stats(corpus);
  std::vector<double> mu = estimate_baseline(corpus);
  const TokenizerRules rules = args.corpus.options().tokenizer;

  LexiconLoad l0 = load_lexicon(args.lex0, corpus.vocab, rules);
  LexiconLoad l1 = load_lexicon(args.lex1, corpus.vocab, rules);
  for (const std::string& w : l0.out_of_vocab)
    std::cerr << "lex0: out of vocabulary: " << w << "\n";
  for (const std::string& w : l1.out_of_vocab)
    std::cerr << "lex1: out of vocabulary: " << w << "\n";
  LexiconPair pair =
      validate_pair(std::move(l0.ids), std::move(l1.ids), nullptr);

  if (!args.no_prune) {
    PruneReport report;
    pair = prune_lexicons(corpus, pair, stats, mu, &report);
    std::cerr << "prune: removed "
              << report.removed0.size() + report.zero_mu0.size()
              << " words from side 0, "
              << report.removed1.size() + report.zero_mu1.size()
              << " from side 1\n";
  }

  MomentStats moments = compute_moments(corpus, pair, mu, stats);
  SolverResult solved = fit(moments, args.solver);

  std::ostringstream trace;
  for (const TraceRow& row : solved.history)
    trace << row.iteration << " J=" << row.objective
          << " primal=" << row.primal << " dual=" << row.dual
          << " rho=" << row.rho << "\n";
  if (args.trace.empty())
    std::cerr << trace.str();
  else
    write_file_atomic(args.trace, trace.str());

  PredictivenessModel model;
  for (WordId id : pair.lex0) model.words0.push_back(corpus.vocab.word(id));
  for (WordId id : pair.lex1) model.words1.push_back(corpus.vocab.word(id));
  model.mu0 = moments.mu0;
  model.mu1 = moments.mu1;
  model.g0 = solved.g0;
  model.g1 = solved.g1;
  model.prior_logodds = args.prior;
  model.meta.corpus_fingerprint = corpus_fingerprint(corpus);
  model.meta.solver_iterations = solved.outer_iterations;
  model.meta.solver_objective = solved.objective;
  model.meta.solver_constraint_residual = solved.constraint_residual;
  model.meta.solver_converged = solved.converged;
  if (args.estimate_tau) {
    TauEstimate tau = estimate_concentration(corpus, pair, mu);
    model.tau = tau.tau;
    if (tau.low_confidence)
      std::cerr << "tau: low confidence (too few informative documents)\n";
  }
  write_model(args.out, model);
  std::cerr << "fit: wrote " << args.out << " (J=" << solved.objective
            << ", " << solved.outer_iterations << " outer iterations)\n";
  if (!solved.converged) {
    std::cerr << "fit: solver did not converge\n";
    return 3;
  }
  return 0;
}

int run_classify(const CorpusArgs& corpus_args, const std::string& model_path,
                 const std::string& rule, const std::string& out) {
  Corpus corpus =
      load_corpus(corpus_args.path, corpus_args.format, corpus_args.options());
  PredictivenessModel model = read_model(model_path);

  std::optional<PmiTable> pmi;
  if (rule == "pmi") {
    LexiconPair pair;
    for (const std::string& w : model.words0)
      if (auto id = corpus.vocab.find(w)) pair.lex0.push_back(*id);
    for (const std::string& w : model.words1)
      if (auto id = corpus.vocab.find(w)) pair.lex1.push_back(*id);
    std::sort(pair.lex0.begin(), pair.lex0.end());
    std::sort(pair.lex1.begin(), pair.lex1.end());
    pmi = pmi_fit(corpus, pair);
  }
  Scorer scorer(model, corpus.vocab);

  std::ostringstream lines;
  for (std::size_t t = 0; t < corpus.docs.size(); ++t) {
    const double s = pmi ? pmi_score(corpus.docs[t], *pmi)
                         : scorer.score(rule, corpus.docs[t]);
    nlohmann::json row;
    row["id"] = t < corpus.ids.size() ? corpus.ids[t] : std::to_string(t);
    row["score"] = s;
    row["label"] = decide(s);
    lines << row.dump() << "\n";
  }
  emit(out, lines.str());
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& out,
              const std::string& lex0_out, const std::string& lex1_out,
              const std::string& truth_out) {
  SyntheticSpec spec = synthetic_spec_from_json(read_file(spec_path));
  if (auto seed = env_seed()) spec.seed = *seed;
  SyntheticCorpus synth =
      spec.tau ? gen_dcm_corpus(spec) : gen_multinomial_corpus(spec);

  std::ostringstream lines;
  for (std::size_t t = 0; t < synth.corpus.docs.size(); ++t) {
    nlohmann::json row;
    row["id"] = synth.corpus.ids[t];
    std::ostringstream text;
    bool first = true;
    for (const auto& [id, n] : synth.corpus.docs[t].entries())
      for (Count k = 0; k < n; ++k) {
        if (!first) text << ' ';
        text << synth.corpus.vocab.word(id);
        first = false;
      }
    row["text"] = text.str();
    row["label"] = static_cast<int>(synth.corpus.labels[t]);
    lines << row.dump() << "\n";
  }
  emit(out, lines.str());

  auto dump_lexicon = [&](const std::vector<WordId>& lex,
                          const std::string& path) {
    if (path.empty()) return;
    std::ostringstream words;
    for (WordId id : lex) words << synth.corpus.vocab.word(id) << "\n";
    write_file_atomic(path, words.str());
  };
  dump_lexicon(synth.pair.lex0, lex0_out);
  dump_lexicon(synth.pair.lex1, lex1_out);

  if (!truth_out.empty()) {
    nlohmann::json truth;
    nlohmann::json g0 = nlohmann::json::object(), g1 = nlohmann::json::object();
    for (std::size_t i = 0; i < synth.pair.lex0.size(); ++i)
      g0[synth.corpus.vocab.word(synth.pair.lex0[i])] = synth.gamma0[i];
    for (std::size_t j = 0; j < synth.pair.lex1.size(); ++j)
      g1[synth.corpus.vocab.word(synth.pair.lex1[j])] = synth.gamma1[j];
    truth["gamma0"] = g0;
    truth["gamma1"] = g1;
    truth["mu"] = synth.mu;
    write_file_atomic(truth_out, truth.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "problex: probabilistic lexicon-based classification.\n"
      "Learns per-word predictiveness weights from cross-lexicon "
      "co-occurrence statistics, without labels."};
  app.require_subcommand(1);

  // fit ------------------------------------------------------------------
  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "fit per-word predictiveness weights on an unlabeled corpus");
  fit_args.corpus.attach(fit_cmd);
  fit_cmd->add_option("--lex0", fit_args.lex0, "label-0 lexicon file")
      ->required();
  fit_cmd->add_option("--lex1", fit_args.lex1, "label-1 lexicon file")
      ->required();
  fit_cmd->add_option("--out", fit_args.out, "output model path");
  fit_cmd->add_option("--trace", fit_args.trace,
                      "write the convergence trace to this file");
  fit_cmd->add_option("--vocab-out", fit_args.vocab_out,
                      "export the corpus vocabulary, one word per line");
  fit_cmd->add_flag("--no-prune", fit_args.no_prune,
                    "skip above-chance co-occurrence pruning");
  fit_cmd->add_flag("--estimate-tau", fit_args.estimate_tau,
                    "estimate the DCM concentration from out-of-lexicon "
                    "words");
  fit_cmd->add_option("--prior", fit_args.prior, "prior log odds for label 1");
  fit_cmd->add_option("--tol", fit_args.solver.abs_tol, "absolute tolerance");
  fit_cmd->add_option("--rel-tol", fit_args.solver.rel_tol,
                      "relative tolerance");
  fit_cmd->add_option("--max-iter", fit_args.solver.max_outer,
                      "maximum outer iterations");
  fit_cmd->add_option("--max-inner", fit_args.solver.max_inner,
                      "maximum inner iterations");

  // classify ---------------------------------------------------------------
  CorpusArgs classify_corpus;
  std::string classify_model, classify_rule = "mult", classify_out;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "score documents with a fitted model");
  classify_corpus.attach(classify_cmd);
  classify_cmd->add_option("--model", classify_model, "model.json path")
      ->required();
  classify_cmd
      ->add_option("--rule", classify_rule,
                   "count | presence | pmi | mult | dcm")
      ->check(CLI::IsMember({"count", "presence", "pmi", "mult", "dcm"}));
  classify_cmd->add_option("--out", classify_out,
                           "output JSONL path (default stdout)");

  // evaluate ---------------------------------------------------------------
  CorpusArgs eval_corpus;
  std::string eval_model, eval_out;
  std::vector<std::string> eval_rules = {"count", "presence", "mult"};
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "AUC evaluation of classification rules on labeled data");
  eval_corpus.attach(eval_cmd);
  eval_cmd->add_option("--model", eval_model, "model.json path")->required();
  eval_cmd->add_option("--rules", eval_rules, "rules to evaluate");
  eval_cmd->add_option("--out", eval_out, "report path (default stdout)");

  // moments ----------------------------------------------------------------
  CorpusArgs moments_corpus;
  std::string moments_lex0, moments_lex1, moments_out;
  bool moments_prune = false;
  CLI::App* moments_cmd = app.add_subcommand(
      "moments", "dump cross-lexicon moment statistics as JSON");
  moments_corpus.attach(moments_cmd);
  moments_cmd->add_option("--lex0", moments_lex0, "")->required();
  moments_cmd->add_option("--lex1", moments_lex1, "")->required();
  moments_cmd->add_flag("--prune", moments_prune, "prune before dumping");
  moments_cmd->add_option("--out", moments_out, "output path (default stdout)");

  // analyze ----------------------------------------------------------------
  double an_gamma = 0.5, an_smu = 0.02;
  std::int64_t an_n = 100;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "expected margin moments and accuracy lower bound");
  analyze_cmd->add_option("--gamma", an_gamma, "predictiveness")->required();
  analyze_cmd->add_option("--n", an_n, "document length in tokens")
      ->required();
  analyze_cmd->add_option("--smu", an_smu, "lexicon coverage")->required();

  // synth ------------------------------------------------------------------
  std::string synth_spec, synth_out, synth_lex0, synth_lex1, synth_truth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate a labeled synthetic corpus");
  synth_cmd->add_option("--spec", synth_spec, "generator spec JSON")
      ->required();
  synth_cmd->add_option("--out", synth_out, "output corpus JSONL")->required();
  synth_cmd->add_option("--lex0-out", synth_lex0, "write lexicon 0 here");
  synth_cmd->add_option("--lex1-out", synth_lex1, "write lexicon 1 here");
  synth_cmd->add_option("--truth-out", synth_truth,
                        "write the generating parameters here");

  // effcount ---------------------------------------------------------------
  double ec_tau = 1000, ec_mu = 1e-3, ec_gamma = 0.5;
  std::int64_t ec_xmax = 20;
  std::string ec_out;
  CLI::App* effcount_cmd = app.add_subcommand(
      "effcount", "CSV curve of DCM effective counts against raw counts");
  effcount_cmd->add_option("--tau", ec_tau, "concentration")->required();
  effcount_cmd->add_option("--mu", ec_mu, "baseline word probability")
      ->required();
  effcount_cmd->add_option("--gamma", ec_gamma, "predictiveness")->required();
  effcount_cmd->add_option("--xmax", ec_xmax, "largest count");
  effcount_cmd->add_option("--out", ec_out, "output path (default stdout)");

  // pipeline ---------------------------------------------------------------
  std::string pipeline_config;
  CLI::App* pipeline_cmd = app.add_subcommand(
      "pipeline", "run ingest -> prune -> fit -> classify -> evaluate");
  pipeline_cmd->add_option("--config", pipeline_config, "config JSON path")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return run_fit(fit_args);

    if (classify_cmd->parsed())
      return run_classify(classify_corpus, classify_model, classify_rule,
                          classify_out);

    if (eval_cmd->parsed()) {
      Corpus corpus = load_corpus(eval_corpus.path, eval_corpus.format,
                                  eval_corpus.options());
      PredictivenessModel model = read_model(eval_model);
      EvalReport report = evaluate(corpus, model, eval_rules);
      emit(eval_out, report_to_json(report) + "\n");
      return 0;
    }

    if (moments_cmd->parsed()) {
      Corpus corpus = load_corpus(moments_corpus.path, moments_corpus.format,
                                  moments_corpus.options());
      CorpusStats stats = corpus_stats(corpus);
      std::vector<double> mu = estimate_baseline(corpus);
      const TokenizerRules rules = moments_corpus.options().tokenizer;
      LexiconLoad l0 = load_lexicon(moments_lex0, corpus.vocab, rules);
      LexiconLoad l1 = load_lexicon(moments_lex1, corpus.vocab, rules);
      LexiconPair pair =
          validate_pair(std::move(l0.ids), std::move(l1.ids), nullptr);
      if (moments_prune) pair = prune_lexicons(corpus, pair, stats, mu);
      MomentStats moments = compute_moments(corpus, pair, mu, stats);
      emit(moments_out, moments_to_json(moments, pair, corpus.vocab) + "\n");
      return 0;
    }

    if (analyze_cmd->parsed()) {
      MarginMoments m = margin_moments(an_gamma, an_n, an_smu);
      std::cout << "margin_mean " << m.mean << "\n"
                << "variance_bound " << m.variance_bound << "\n"
                << "z_lower " << m.z_lower << "\n"
                << "accuracy_lower_bound " << normal_cdf(m.z_lower) << "\n";
      return 0;
    }

    if (synth_cmd->parsed())
      return run_synth(synth_spec, synth_out, synth_lex0, synth_lex1,
                       synth_truth);

    if (effcount_cmd->parsed()) {
      std::ostringstream csv;
      csv << "x,effective_count\n";
      for (std::int64_t x = 0; x <= ec_xmax; ++x)
        csv << x << "," << effective_count(x, ec_tau, ec_mu, ec_gamma) << "\n";
      emit(ec_out, csv.str());
      return 0;
    }

    if (pipeline_cmd->parsed()) {
      PipelineConfig cfg = pipeline_config_from_json(read_file(pipeline_config));
      if (auto seed = env_seed()) cfg.seed = *seed;
      PipelineOutputs outputs = run_pipeline(cfg);
      std::cerr << "pipeline: wrote " << outputs.model_path << ", "
                << outputs.scores_path;
      if (!outputs.report_path.empty())
        std::cerr << ", " << outputs.report_path;
      std::cerr << ", " << outputs.trace_path << "\n";
      return 0;
    }
  } catch (const problex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::convergence:
        return 3;
      case ErrorKind::validation:
      case ErrorKind::io:
        return 2;
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
