#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "saucer/random.hpp"

namespace saucer {

struct Check {
  std::string id;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Reference statement that the computation contradicts; reported, not gated.
struct Note {
  std::string id;
  std::string statement;
  double residual = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  std::vector<Note> notes;
  nlohmann::json details = nlohmann::json::object();
  std::uint64_t seed = 0;
  bool pass = true;
  std::map<std::string, double> overrides;

  /// residual <= threshold; the threshold may be overridden by id.
  void add(std::string id, double residual, double threshold);
  /// Exact match of integers.
  void add_equal(std::string id, long long value, long long expected);
  void note(std::string id, std::string statement, double residual);

  nlohmann::json to_json(bool with_timestamp = true) const;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  /// Restricts the symmetry suite to one catalog (attacking | landing | g2).
  std::optional<std::string> catalog;
  std::map<std::string, double> thresholds;
};

const std::vector<std::string>& suite_names();

/// Runs one suite; throws std::invalid_argument on an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt);

/// Runs every suite in order and merges the results.
std::vector<SuiteReport> run_all(const SuiteOptions& opt);

nlohmann::json combined_report(const std::vector<SuiteReport>& reports, std::uint64_t seed, bool with_timestamp = true);

}  // namespace saucer
