#include "biphoton/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace biphoton {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  // '#' starts a comment at line start or after whitespace.
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) return line.substr(0, i);
  }
  return line;
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

KeyValueDocument KeyValueDocument::parse(std::string_view text) {
  KeyValueDocument doc;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int, std::less<>> first_seen;
  std::string section;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto line = trim(strip_comment(raw));
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({"", line_no, "unterminated section header"});
      } else {
        const auto name = trim(line.substr(1, line.size() - 2));
        if (!valid_identifier(name)) {
          issues.push_back({"", line_no, "invalid section name '" + std::string(name) + "'"});
        }
        section = std::string(name);
      }
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        issues.push_back({"", line_no, "expected 'key = value'"});
      } else {
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!valid_identifier(key)) {
          issues.push_back({std::string(key), line_no, "invalid key name"});
        } else {
          std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
          if (auto it = first_seen.find(full); it != first_seen.end()) {
            issues.push_back({full, line_no,
                              "duplicate key (first defined at line " + std::to_string(it->second) +
                                  ", again at line " + std::to_string(line_no) + ")"});
          } else {
            first_seen.emplace(full, line_no);
            doc.entries_.push_back({std::move(full), std::string(value), line_no});
          }
        }
      }
    }
    if (nl == text.size()) break;
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return doc;
}

const KeyValueEntry* KeyValueDocument::find(std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const KeyValueEntry* KeyValueReader::lookup(std::string_view key) {
  const auto* e = doc_->find(key);
  if (e && std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end()) {
    consumed_.emplace_back(key);
  }
  return e;
}

void KeyValueReader::issue(std::string_view key, std::string message) {
  issues_.push_back({std::string(key), line_of(key), std::move(message)});
}

int KeyValueReader::line_of(std::string_view key) const {
  const auto* e = doc_->find(key);
  return e ? e->line : 0;
}

std::optional<double> KeyValueReader::number(std::string_view key) {
  const auto* e = lookup(key);
  if (!e) return std::nullopt;
  auto v = to_double(e->value);
  if (!v) issue(key, "expected a finite number, got '" + e->value + "'");
  return v;
}

std::optional<std::int64_t> KeyValueReader::integer(std::string_view key) {
  const auto* e = lookup(key);
  if (!e) return std::nullopt;
  std::int64_t value = 0;
  const auto s = trim(e->value);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    issue(key, "expected an integer, got '" + e->value + "'");
    return std::nullopt;
  }
  return value;
}

std::optional<std::uint64_t> KeyValueReader::unsigned_integer(std::string_view key) {
  const auto* e = lookup(key);
  if (!e) return std::nullopt;
  std::uint64_t value = 0;
  const auto s = trim(e->value);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    issue(key, "expected a non-negative integer, got '" + e->value + "'");
    return std::nullopt;
  }
  return value;
}

std::optional<bool> KeyValueReader::boolean(std::string_view key) {
  const auto* e = lookup(key);
  if (!e) return std::nullopt;
  if (e->value == "true" || e->value == "on" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "off" || e->value == "no") return false;
  issue(key, "expected true/false, got '" + e->value + "'");
  return std::nullopt;
}

std::optional<std::string> KeyValueReader::text(std::string_view key) {
  const auto* e = lookup(key);
  if (!e) return std::nullopt;
  return e->value;
}

std::optional<std::vector<double>> KeyValueReader::number_list(std::string_view key) {
  const auto* e = lookup(key);
  if (!e) return std::nullopt;
  try {
    return parse_number_list(e->value);
  } catch (const ArgumentError& err) {
    issue(key, err.what());
    return std::nullopt;
  }
}

void KeyValueReader::finish() {
  for (const auto& e : doc_->entries()) {
    if (std::find(consumed_.begin(), consumed_.end(), e.key) == consumed_.end()) {
      issues_.push_back({e.key, e.line, "unknown key"});
    }
  }
  std::stable_sort(issues_.begin(), issues_.end(),
                   [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
  if (!issues_.empty()) throw ConfigError(issues_);
}

std::vector<double> parse_number_list(std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.empty()) return out;

  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    // Points are rounded to the most decimals written in the range, so 0.1 steps stay exact decimals.
    int decimals = 0;
    bool plain = true;
    std::size_t start = 0;
    while (true) {
      const auto colon = text.find(':', start);
      const auto piece = trim(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
      auto v = to_double(piece);
      if (!v) throw ArgumentError("malformed range '" + std::string(text) + "'");
      if (piece.find_first_of("eE") != std::string_view::npos) plain = false;
      if (const auto dot = piece.find('.'); dot != std::string_view::npos) {
        decimals = std::max(decimals, static_cast<int>(piece.size() - dot - 1));
      }
      parts.push_back(*v);
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0]) {
      throw ArgumentError("range must be start:stop:step with step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-6)) + 1;
    if (count > 1000000) throw ArgumentError("range has too many points");
    out.reserve(static_cast<std::size_t>(count));
    const double scale = std::pow(10.0, decimals);
    for (long k = 0; k < count; ++k) {
      const double v = parts[0] + static_cast<double>(k) * parts[2];
      out.push_back(plain && decimals <= 12 ? std::round(v * scale) / scale : v);
    }
    return out;
  }

  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto v = to_double(piece);
    if (!v) throw ArgumentError("malformed number list '" + std::string(text) + "'");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace biphoton
