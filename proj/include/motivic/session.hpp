#pragma once

#include <optional>
#include <string>
#include <vector>

#include "motivic/script.hpp"

namespace motivic {

struct Config {
  std::optional<Field> field;  // overrides the script's field declaration
  std::size_t horizon = 8;
  std::size_t window = 3;
  std::size_t battery_size = 2;  // jets k[t]/(t^n) for n = 1..battery_size
  std::uint64_t seed = 0;
  std::uint64_t max_candidates = std::uint64_t{1} << 20;
  std::size_t skeletal_level = 3;
};

/// "Q", "F2", "F 2" or a bare prime.
Field parse_field(std::string_view text);

struct Record {
  std::vector<std::pair<std::string, std::string>> fields;
  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  std::string get(const std::string& key) const;
};

enum class ExitCode { Ok = 0, CheckFailure = 1, EvaluationError = 2, ParseError = 3 };

struct Report {
  std::vector<Record> records;
  ExitCode exit = ExitCode::Ok;
  /// key=value lines, records separated by blank lines.
  std::string text() const;
};

/// Evaluates statements in order. A failing statement is recorded and the
/// names it would have declared stay undefined for later statements.
Report run(const Script& script, const Config& config = {});

/// Parses and runs; a parse error yields a single record and exit code 3.
Report run_text(std::string_view text, const Config& config = {});

}  // namespace motivic
