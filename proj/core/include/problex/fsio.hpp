#pragma once

#include <string>

namespace problex {

/// Whole-file read; throws on failure.
std::string read_file(const std::string& path);

/// Atomic text-file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace problex
