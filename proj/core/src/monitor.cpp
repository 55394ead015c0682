#include "bibcheck/monitor.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "bibcheck/report.hpp"
#include "html_text.hpp"
#include "httplib.h"
#include "json.hpp"

namespace bibcheck {

namespace {

using ojson = nlohmann::ordered_json;
using detail::html_escape;
using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

struct Outcome {
  std::optional<bool> got_result;
  std::optional<std::int64_t> count;
  std::optional<std::string> error;
};

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

Outcome interpret(const std::string& body, TestMode mode) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const std::exception& e) {
    return {std::nullopt, std::nullopt, std::string("unparseable SPARQL results: ") + e.what()};
  }
  if (mode == TestMode::Ask) {
    if (!doc.contains("boolean") || !doc["boolean"].is_boolean()) {
      return {std::nullopt, std::nullopt, "SPARQL results carry no boolean answer"};
    }
    return {doc["boolean"].get<bool>(), std::nullopt, std::nullopt};
  }

  const auto* bindings = doc.contains("results") ? &doc["results"]["bindings"] : nullptr;
  if (bindings == nullptr || !bindings->is_array() || bindings->size() != 1 || !(*bindings)[0].is_object() ||
      (*bindings)[0].size() != 1) {
    return {std::nullopt, std::nullopt, "count query must return exactly one binding"};
  }
  const auto& term = (*bindings)[0].begin().value();
  const auto value = term.is_object() ? term.value("value", "") : std::string();
  const auto count = parse_int(value);
  if (!count || *count < 0) return {std::nullopt, std::nullopt, "count query returned a non-integer: " + value};
  return {*count > 0, count, std::nullopt};
}

Outcome execute(const std::string& endpoint, const std::string& query, TestMode mode, std::chrono::seconds timeout) {
  const auto scheme_end = endpoint.find("://");
  const auto path_start = endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string base = path_start == std::string::npos ? endpoint : endpoint.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
  try {
    httplib::Client client(base);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_follow_location(true);
    const httplib::Headers headers{{"Accept", "application/sparql-results+json"},
                                   {"User-Agent", "bibcheck-monitor/1.0"}};
    const httplib::Params form{{"query", query}};
    auto res = client.Post(path, headers, form);
    if (!res) return {std::nullopt, std::nullopt, "transport error: " + httplib::to_string(res.error())};
    if (res->status < 200 || res->status >= 300) {
      return {std::nullopt, std::nullopt, fmt::format("HTTP {} from {}", res->status, endpoint)};
    }
    return interpret(res->body, mode);
  } catch (const std::exception& e) {
    return {std::nullopt, std::nullopt, e.what()};
  }
}

TestMode mode_from_string(std::string_view s, const std::string& label) {
  if (s == "ask") return TestMode::Ask;
  if (s == "count") return TestMode::Count;
  throw ConfigError("test '" + label + "': mode must be \"ask\" or \"count\"");
}

Collection collection_from_string(std::string_view s) {
  if (s == "meta") return Collection::Meta;
  if (s == "index") return Collection::Index;
  throw ConfigError("collection must be \"meta\" or \"index\"");
}

template <typename T>
ojson nullable(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> optional_of(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

std::string_view to_string(Collection collection) { return collection == Collection::Meta ? "meta" : "index"; }

std::string_view to_string(TestMode mode) { return mode == TestMode::Ask ? "ask" : "count"; }

MonitorConfig parse_monitor_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("monitor config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("monitor config must be a JSON object");

  MonitorConfig config;
  if (!doc.contains("endpoint") || !doc["endpoint"].is_string() || doc["endpoint"].get<std::string>().empty()) {
    throw ConfigError("monitor config needs a non-empty \"endpoint\"");
  }
  config.endpoint = doc["endpoint"].get<std::string>();
  if (doc.contains("collection")) {
    if (!doc["collection"].is_string()) throw ConfigError("collection must be a string");
    config.collection = collection_from_string(doc["collection"].get<std::string>());
  }
  if (!doc.contains("tests") || !doc["tests"].is_array()) throw ConfigError("monitor config needs a \"tests\" list");

  static const std::set<std::string> known{"label",    "description", "enabled", "query",
                                           "mode",     "endpoint",    "baseline"};
  std::set<std::string> labels;
  std::size_t position = 0;
  for (const auto& t : doc["tests"]) {
    const auto where = "test #" + std::to_string(position++);
    if (!t.is_object()) throw ConfigError(where + " is not an object");
    TestSpec spec;
    if (!t.contains("label") || !t["label"].is_string() || t["label"].get<std::string>().empty()) {
      throw ConfigError(where + ": missing \"label\"");
    }
    spec.label = t["label"].get<std::string>();
    const auto named = "test '" + spec.label + "'";
    for (const auto& [key, value] : t.items()) {
      if (known.count(key) == 0) throw ConfigError(named + ": unknown field \"" + key + "\"");
    }
    if (!labels.insert(spec.label).second) throw ConfigError(named + ": duplicate label");
    if (!t.contains("query") || !t["query"].is_string() || t["query"].get<std::string>().empty()) {
      throw ConfigError(named + ": missing \"query\"");
    }
    spec.query = t["query"].get<std::string>();
    if (t.contains("description")) {
      if (!t["description"].is_string()) throw ConfigError(named + ": \"description\" must be a string");
      spec.description = t["description"].get<std::string>();
    }
    if (t.contains("enabled")) {
      if (!t["enabled"].is_boolean()) throw ConfigError(named + ": \"enabled\" must be true or false");
      spec.enabled = t["enabled"].get<bool>();
    }
    if (t.contains("mode")) {
      if (!t["mode"].is_string()) throw ConfigError(named + ": \"mode\" must be a string");
      spec.mode = mode_from_string(t["mode"].get<std::string>(), spec.label);
    }
    if (t.contains("endpoint")) {
      if (!t["endpoint"].is_string() || t["endpoint"].get<std::string>().empty()) {
        throw ConfigError(named + ": \"endpoint\" must be a non-empty string");
      }
      spec.endpoint = t["endpoint"].get<std::string>();
    }
    if (t.contains("baseline")) {
      if (!t["baseline"].is_number_integer() || t["baseline"].get<std::int64_t>() <= 0) {
        throw ConfigError(named + ": \"baseline\" must be a positive integer");
      }
      if (spec.mode != TestMode::Count) throw ConfigError(named + ": \"baseline\" only applies to count mode");
      spec.baseline = t["baseline"].get<std::int64_t>();
    }
    config.tests.push_back(std::move(spec));
  }
  return config;
}

MonitorConfig load_monitor_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read monitor config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_monitor_config(buf.str());
}

void apply_monitor_environment(MonitorConfig& config) {
  if (const char* url = std::getenv("BIBCHECK_SPARQL_ENDPOINT"); url != nullptr && *url != '\0') {
    config.endpoint = url;
  }
}

std::size_t MonitorReport::failed_count() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.passed == false ? 1 : 0;
  return n;
}

std::size_t MonitorReport::indeterminate_count() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.passed.has_value() ? 0 : 1;
  return n;
}

MonitorReport run_tests(const MonitorConfig& config, const MonitorOptions& options) {
  MonitorReport report;
  report.endpoint = config.endpoint;
  report.collection = config.collection;
  report.config_path = options.config_path;
  report.executed_at = format_timestamp(Clock::now());
  const auto start = SteadyClock::now();

  for (const auto& spec : config.tests) {
    if (!spec.enabled) continue;
    if (spec.mode == TestMode::Ask ? !options.run_ask : !options.run_count) continue;
    TestResult result;
    result.label = spec.label;
    result.description = spec.description;
    result.query = spec.query;
    result.mode = spec.mode;
    result.baseline = spec.baseline;

    const auto test_start = SteadyClock::now();
    auto outcome = execute(spec.endpoint.value_or(config.endpoint), spec.query, spec.mode, options.timeout);
    result.run.running_time = seconds_since(test_start);
    result.run.error = std::move(outcome.error);
    if (!result.run.error) {
      result.run.got_result = outcome.got_result;
      result.count = outcome.count;
      result.passed = !*outcome.got_result;
    }
    report.results.push_back(std::move(result));
  }
  report.total_running_time = seconds_since(start);
  return report;
}

MonitorReport run_count_tests(const MonitorConfig& config, MonitorOptions options) {
  options.run_ask = false;
  options.run_count = true;
  return run_tests(config, options);
}

std::string format_ratio(std::int64_t count, std::int64_t baseline) {
  if (baseline <= 0 || count < 0) return {};
  // Tenths of a percent, rounded half up, in exact integer arithmetic.
  const auto num = static_cast<unsigned __int128>(count) * 2000;
  const auto den = static_cast<unsigned __int128>(baseline) * 2;
  const auto tenths = static_cast<std::uint64_t>((num + baseline) / den);
  return fmt::format("{}.{}%", tenths / 10, tenths % 10);
}

std::string emit_monitor_json(const MonitorReport& report) {
  ojson doc;
  doc["endpoint"] = report.endpoint;
  doc["collection"] = to_string(report.collection);
  doc["executed_at"] = report.executed_at;
  doc["total_running_time"] = report.total_running_time;
  doc["config_path"] = report.config_path;
  auto results = ojson::array();
  for (const auto& r : report.results) {
    ojson o;
    o["label"] = r.label;
    o["description"] = r.description;
    o["query"] = r.query;
    o["run"] = {{"got_result", nullable(r.run.got_result)},
                {"running_time", r.run.running_time},
                {"error", nullable(r.run.error)}};
    o["passed"] = nullable(r.passed);
    o["mode"] = to_string(r.mode);
    if (r.mode == TestMode::Count) {
      o["count"] = nullable(r.count);
      o["baseline"] = nullable(r.baseline);
      o["ratio"] = r.count && r.baseline ? ojson(format_ratio(*r.count, *r.baseline)) : ojson(nullptr);
    }
    results.push_back(std::move(o));
  }
  doc["results"] = std::move(results);
  return doc.dump(4) + "\n";
}

MonitorReport parse_monitor_json(std::string_view json_text) {
  const auto doc = nlohmann::json::parse(json_text);
  MonitorReport report;
  report.endpoint = doc.at("endpoint").get<std::string>();
  report.collection = collection_from_string(doc.at("collection").get<std::string>());
  report.executed_at = doc.at("executed_at").get<std::string>();
  report.total_running_time = doc.at("total_running_time").get<double>();
  report.config_path = doc.at("config_path").get<std::string>();
  for (const auto& o : doc.at("results")) {
    TestResult r;
    r.label = o.at("label").get<std::string>();
    r.description = o.at("description").get<std::string>();
    r.query = o.at("query").get<std::string>();
    const auto& run = o.at("run");
    r.run.got_result = optional_of<bool>(run, "got_result");
    r.run.running_time = run.at("running_time").get<double>();
    r.run.error = optional_of<std::string>(run, "error");
    r.passed = optional_of<bool>(o, "passed");
    r.mode = mode_from_string(o.value("mode", "ask"), r.label);
    r.count = optional_of<std::int64_t>(o, "count");
    r.baseline = optional_of<std::int64_t>(o, "baseline");
    report.results.push_back(std::move(r));
  }
  return report;
}

std::string emit_monitor_html(const MonitorReport& report) {
  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += fmt::format("<title>Data quality monitor: {}</title>\n", html_escape(to_string(report.collection)));
  out += R"(<style>
body{font-family:system-ui,sans-serif;margin:2rem;color:#222}
.test{border:1px solid #ccc;border-radius:6px;padding:1rem;margin:1rem 0}
.badge{display:inline-block;padding:.1rem .6rem;border-radius:1rem;color:#fff;font-weight:600;font-size:.85rem}
.badge.passed{background:#2e7d32}.badge.failed{background:#c62828}.badge.indeterminate{background:#757575}
pre{background:#f5f5f5;padding:.6rem;overflow-x:auto}
.error{color:#c62828}
dt{font-weight:600}
</style>
</head>
<body>
)";
  out += "<h1>Data quality monitor</h1>\n<dl class=\"run\">\n";
  out += fmt::format("<dt>Endpoint</dt><dd>{}</dd>\n", html_escape(report.endpoint));
  out += fmt::format("<dt>Collection</dt><dd>{}</dd>\n", html_escape(to_string(report.collection)));
  out += fmt::format("<dt>Executed at</dt><dd>{}</dd>\n", html_escape(report.executed_at));
  out += fmt::format("<dt>Total running time</dt><dd>{:.3f} s</dd>\n", report.total_running_time);
  out += fmt::format("<dt>Configuration</dt><dd>{}</dd>\n</dl>\n", html_escape(report.config_path));

  for (const auto& r : report.results) {
    const char* badge = !r.passed ? "indeterminate" : (*r.passed ? "passed" : "failed");
    out += fmt::format("<section class=\"test\" id=\"test-{}\">\n", html_escape(r.label));
    out += fmt::format("<h2>{} <span class=\"badge {}\">{}</span></h2>\n", html_escape(r.label), badge, badge);
    out += fmt::format("<p>{}</p>\n", html_escape(r.description));
    out += fmt::format("<p>Mode: {}. Running time: {:.3f} s.</p>\n", to_string(r.mode), r.run.running_time);
    if (r.count) {
      out += fmt::format("<p>Count: {}", *r.count);
      if (r.baseline) out += fmt::format(" of {} ({})", *r.baseline, format_ratio(*r.count, *r.baseline));
      out += "</p>\n";
    }
    if (r.run.error) out += fmt::format("<p class=\"error\">Error: {}</p>\n", html_escape(*r.run.error));
    out += fmt::format("<pre><code>{}</code></pre>\n</section>\n", html_escape(r.query));
  }
  out += "</body>\n</html>\n";
  return out;
}

}  // namespace bibcheck
