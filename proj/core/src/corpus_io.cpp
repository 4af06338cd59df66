#include <fstream>
#include <sstream>

#include "json.hpp"
#include "problex/corpus.hpp"

namespace problex {

namespace {

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open file: " + path);
  return in;
}

void append_doc(Corpus& corpus, const TokenizerRules& rules,
                const std::string& text, std::string id, std::int8_t label) {
  auto tokens = tokenize(text, rules);
  corpus.docs.push_back(
      count_vector(tokens, corpus.vocab, VocabMode::grow).counts);
  corpus.ids.push_back(std::move(id));
  corpus.labels.push_back(label);
}

// Returns true when all labels are missing, so the label list can be dropped.
bool all_unlabeled(const std::vector<std::int8_t>& labels) {
  for (std::int8_t y : labels)
    if (y >= 0) return false;
  return true;
}

}  // namespace

Corpus read_corpus_text(const std::string& path, const IngestOptions& opt) {
  std::ifstream in = open_or_fail(path);
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    append_doc(corpus, opt.tokenizer, line, std::to_string(lineno), kNoLabel);
    ++lineno;
  }
  if (all_unlabeled(corpus.labels)) corpus.labels.clear();
  corpus.check();
  return corpus;
}

Corpus read_corpus_jsonl(const std::string& path, const IngestOptions& opt) {
  std::ifstream in = open_or_fail(path);
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_io(path + ":" + std::to_string(lineno) + ": bad JSON: " + e.what());
    }
    if (!j.contains("text") || !j["text"].is_string())
      fail_validation(path + ":" + std::to_string(lineno) +
                      ": missing string field 'text'");
    std::string id = j.contains("id") && j["id"].is_string()
                         ? j["id"].get<std::string>()
                         : std::to_string(lineno - 1);
    std::int8_t label = kNoLabel;
    bool dropped = false;
    try {
      if (j.contains("label") && !j["label"].is_null()) {
        const int y = j["label"].get<int>();
        if (y != 0 && y != 1)
          fail_validation(path + ":" + std::to_string(lineno) +
                          ": label must be 0 or 1");
        label = static_cast<std::int8_t>(y);
      } else if (opt.ratings == RatingPolicy::stars_1to5 &&
                 j.contains("rating") && !j["rating"].is_null()) {
        const double stars = j["rating"].get<double>();
        if (stars >= 4)
          label = 1;
        else if (stars <= 2)
          label = 0;
        else
          dropped = true;  // a middling rating drops the document
      }
    } catch (const nlohmann::json::exception& e) {
      fail_validation(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (dropped) continue;
    append_doc(corpus, opt.tokenizer, j["text"].get<std::string>(),
               std::move(id), label);
  }
  if (all_unlabeled(corpus.labels)) corpus.labels.clear();
  corpus.check();
  return corpus;
}

void write_vocabulary(const std::string& path, const Vocabulary& vocab) {
  std::ofstream out(path);
  if (!out) fail_io("cannot write file: " + path);
  for (std::size_t i = 0; i < vocab.size(); ++i)
    out << vocab.word(static_cast<WordId>(i)) << '\n';
}

}  // namespace problex
