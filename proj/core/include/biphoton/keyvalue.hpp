#pragma once

// Sectioned plain-text key-value documents:
//
//   # comment
//   seed = 42
//   [crystal]
//   length_um = 6.7      # trailing comment
//
// Keys are addressed as "section.key". Duplicate keys are an error.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/error.hpp"

namespace biphoton {

struct KeyValueEntry {
  std::string key;
  std::string value;
  int line = 0;
};

class KeyValueDocument {
 public:
  // Throws ConfigError listing every syntax problem and duplicate key.
  static KeyValueDocument parse(std::string_view text);

  const KeyValueEntry* find(std::string_view key) const;
  const std::vector<KeyValueEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<KeyValueEntry> entries_;
};

// Typed, strict access to a document. Problems accumulate instead of throwing
// so that callers can report every issue at once via finish().
class KeyValueReader {
 public:
  explicit KeyValueReader(const KeyValueDocument& doc) : doc_(&doc) {}

  std::optional<double> number(std::string_view key);
  std::optional<std::int64_t> integer(std::string_view key);
  std::optional<std::uint64_t> unsigned_integer(std::string_view key);
  std::optional<bool> boolean(std::string_view key);
  std::optional<std::string> text(std::string_view key);
  // Comma separated numbers, or "start:stop:step" (inclusive of stop within step/1e6).
  std::optional<std::vector<double>> number_list(std::string_view key);

  // Marks a required key as missing when the lookup produced nothing.
  template <typename T>
  std::optional<T> require(std::string_view key, std::optional<T> value) {
    if (!value && !doc_->find(key)) issue(key, "missing required key");
    return value;
  }

  void issue(std::string_view key, std::string message);
  int line_of(std::string_view key) const;

  // Flags unknown keys (everything not looked up), then throws if any issue exists.
  void finish();

  bool ok() const noexcept { return issues_.empty(); }
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  const KeyValueEntry* lookup(std::string_view key);

  const KeyValueDocument* doc_;
  std::vector<std::string> consumed_;
  std::vector<ConfigIssue> issues_;
};

std::vector<double> parse_number_list(std::string_view text);  // throws ArgumentError

}  // namespace biphoton
