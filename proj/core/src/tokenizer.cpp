#include "problex/tokenizer.hpp"

namespace problex {

namespace {

inline bool is_word_byte(unsigned char c) {
  if (c >= 0x80) return true;  // UTF-8 multibyte
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

inline char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerRules& rules) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    if (is_word_byte(static_cast<unsigned char>(ch))) {
      current.push_back(rules.lowercase ? lower_ascii(ch) : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace problex
