#pragma once

#include <optional>
#include <string>
#include <vector>

#include "problex/corpus.hpp"
#include "problex/solver.hpp"

namespace problex {

struct PipelineConfig {
  std::string corpus_path;
  std::string corpus_format = "jsonl";  // jsonl | text
  std::string lex0_path, lex1_path;
  std::vector<std::string> rules = {"count", "presence", "mult"};
  bool prune = true;
  bool estimate_tau = false;
  double prior_logodds = 0;
  IngestOptions ingest;
  SolverConfig solver;
  std::string out_dir;
  std::uint64_t seed = 0;
};

PipelineConfig pipeline_config_from_json(const std::string& text);

struct PipelineOutputs {
  std::string model_path;   // model.json
  std::string scores_path;  // scores.jsonl, primary rule (dcm if tau else mult)
  std::string report_path;  // report.json, empty when corpus is unlabeled
  std::string trace_path;   // trace.log
};

/// ingest -> prune -> moments -> fit -> (optional tau) -> classify ->
/// evaluate. Errors are rethrown with the failing stage name attached.
/// All outputs are written atomically and are byte-identical across reruns
/// with the same config.
PipelineOutputs run_pipeline(const PipelineConfig& config);

}  // namespace problex
