#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdbp/simulator.hpp"

namespace rdbp {

/// Rejection of a scenario file, naming the offending line and key.
class ScenarioError : public std::invalid_argument {
 public:
  ScenarioError(std::size_t line, std::string key, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

struct ParsedScenario {
  ScenarioSpec spec;
  /// Non-fatal findings, e.g. a violated scarcity condition.
  std::vector<std::string> warnings;
};

/// Strict parser: unknown sections or keys, malformed numbers and invariant
/// violations throw ScenarioError.
ParsedScenario parse_scenario(std::string_view text);

/// Canonical text; parse_scenario(serialize_scenario(s)).spec == s.
std::string serialize_scenario(const ScenarioSpec& spec);

std::string read_text_file(const std::string& path);

}  // namespace rdbp
