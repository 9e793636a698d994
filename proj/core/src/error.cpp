#include "biphoton/error.hpp"

namespace biphoton {
namespace {

std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string out = std::to_string(issues.size()) + " configuration problem(s):";
  for (const auto& issue : issues) {
    out += "\n  ";
    if (issue.line > 0) out += "line " + std::to_string(issue.line) + ": ";
    if (!issue.key.empty()) out += issue.key + ": ";
    out += issue.message;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

}  // namespace biphoton
