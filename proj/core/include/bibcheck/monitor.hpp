#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bibcheck/rules_config.hpp"

namespace bibcheck {

enum class Collection { Meta, Index };
enum class TestMode { Ask, Count };

std::string_view to_string(Collection collection);
std::string_view to_string(TestMode mode);

struct TestSpec {
  std::string label;
  std::string description;
  bool enabled = true;
  std::string query;
  TestMode mode = TestMode::Ask;
  /// Overrides the config-wide endpoint for this test only.
  std::optional<std::string> endpoint;
  /// Collection size the count is reported against.
  std::optional<std::int64_t> baseline;

  bool operator==(const TestSpec&) const = default;
};

struct MonitorConfig {
  std::string endpoint;
  Collection collection = Collection::Meta;
  std::vector<TestSpec> tests;
};

/// Throws ConfigError naming the offending test and field.
MonitorConfig parse_monitor_config(std::string_view json_text);
MonitorConfig load_monitor_config(const std::filesystem::path& path);

/// Replaces the config-wide endpoint with $BIBCHECK_SPARQL_ENDPOINT when set.
void apply_monitor_environment(MonitorConfig& config);

struct TestRun {
  std::optional<bool> got_result;
  double running_time = 0;  // seconds
  std::optional<std::string> error;

  bool operator==(const TestRun&) const = default;
};

struct TestResult {
  std::string label;
  std::string description;
  std::string query;
  TestRun run;
  /// Null when the query could not be executed.
  std::optional<bool> passed;
  TestMode mode = TestMode::Ask;
  std::optional<std::int64_t> count;
  std::optional<std::int64_t> baseline;

  bool operator==(const TestResult&) const = default;
};

struct MonitorReport {
  std::string endpoint;
  Collection collection = Collection::Meta;
  std::string executed_at;
  double total_running_time = 0;  // seconds
  std::string config_path;
  std::vector<TestResult> results;

  bool operator==(const MonitorReport&) const = default;

  std::size_t failed_count() const;
  std::size_t indeterminate_count() const;
};

struct MonitorOptions {
  std::chrono::seconds timeout{600};
  /// Count-mode tests are skipped unless enabled.
  bool run_count = true;
  bool run_ask = true;
  std::string config_path;
};

/// Executes each enabled test of the selected modes sequentially, in config
/// order. Transport and HTTP failures are recorded per test, never thrown.
MonitorReport run_tests(const MonitorConfig& config, const MonitorOptions& options = {});
MonitorReport run_count_tests(const MonitorConfig& config, MonitorOptions options = {});

/// `count` as a percentage of `baseline`, one decimal, half rounded up.
std::string format_ratio(std::int64_t count, std::int64_t baseline);

std::string emit_monitor_json(const MonitorReport& report);
MonitorReport parse_monitor_json(std::string_view json_text);
std::string emit_monitor_html(const MonitorReport& report);

}  // namespace bibcheck
