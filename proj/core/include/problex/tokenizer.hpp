#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace problex {

struct TokenizerRules {
  bool lowercase = true;  // ASCII lowercasing; multibyte UTF-8 left as-is
};

/// Splits on runs of non-alphanumeric bytes; bytes >= 0x80 (UTF-8
/// continuations and multibyte starts) are treated as word characters so
/// accented words survive intact. Empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerRules& rules = {});

}  // namespace problex
