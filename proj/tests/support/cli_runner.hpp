#pragma once

#include <filesystem>
#include <string>

namespace cli {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

/// Runs the fadm executable with `args` (shell-quoted by the caller).
Run fadm(const std::string& args);

std::string read_file(const std::filesystem::path& p);

/// True when both trees hold the same relative paths with identical bytes.
bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b, std::string* diff = nullptr);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch(const std::string& name);

}  // namespace cli
