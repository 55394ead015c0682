#include <string>

#include "bibcheck/monitor.hpp"
#include "bibcheck/rules_config.hpp"
#include "doctest.h"
#include "json.hpp"
#include "sparql_mock.hpp"

using namespace bibcheck;
using testsupport::MockSparqlEndpoint;
using testsupport::TripleStore;

namespace {

void add_expression(TripleStore& s, const std::string& n, const std::string& doi) {
  const auto br = "<http://example.org/br/" + n + ">";
  const auto id = "<http://example.org/id/" + n + ">";
  s.add(br, "a", "fabio:Expression");
  s.add(br, "datacite:hasIdentifier", id);
  s.add(id, "a", "datacite:Identifier");
  s.add(id, "datacite:usesIdentifierScheme", "datacite:doi");
  s.add(id, "literal:hasLiteralValue", "\"" + doi + "\"");
}

const TestResult& result(const MonitorReport& r, const std::string& label) {
  for (const auto& t : r.results) {
    if (t.label == label) return t;
  }
  throw std::runtime_error("no result for " + label);
}

MonitorConfig shipped(const char* name, const std::string& endpoint) {
  auto c = load_monitor_config(std::string(BIBCHECK_SOURCE_DIR "/configs/") + name);
  c.endpoint = endpoint;
  return c;
}

}  // namespace

TEST_CASE("monitor configuration parsing") {
  auto c = parse_monitor_config(R"({
    "endpoint": "http://x/sparql",
    "collection": "index",
    "tests": [
      {"label": "a", "description": "d", "enabled": false, "query": "ASK {}"},
      {"label": "b", "description": "d", "query": "SELECT", "mode": "count", "baseline": 10}
    ]})");
  CHECK(c.collection == Collection::Index);
  REQUIRE(c.tests.size() == 2);
  CHECK_FALSE(c.tests[0].enabled);
  CHECK(c.tests[1].mode == TestMode::Count);
  CHECK(c.tests[1].baseline == 10);
}

TEST_CASE("monitor configuration errors name the problem") {
  auto message = [](const char* text) {
    try {
      parse_monitor_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"tests": []})").find("endpoint") != std::string::npos);
  CHECK(message(R"({"endpoint": "e", "tests": [{"label": "x", "query": "q", "querry": 1}]})").find("x") !=
        std::string::npos);
  CHECK_FALSE(message(R"({"endpoint": "e", "tests": [{"label": "x", "query": "q"}, {"label": "x", "query": "q"}]})")
                  .empty());
  CHECK_FALSE(message(R"({"endpoint": "e", "tests": [{"label": "x"}]})").empty());
  CHECK_FALSE(message(R"({"endpoint": "e", "tests": [{"label": "x", "query": "q", "mode": "list"}]})").empty());
  CHECK_FALSE(
      message(R"({"endpoint": "e", "tests": [{"label": "x", "query": "q", "mode": "count", "baseline": 0}]})").empty());
  CHECK_FALSE(message(R"({"endpoint": "e", "tests": [{"label": "x", "query": "q", "baseline": 5}]})").empty());
}

TEST_CASE("shipped monitor configurations parse") {
  auto meta = load_monitor_config(BIBCHECK_SOURCE_DIR "/configs/meta_monitor.json");
  auto index = load_monitor_config(BIBCHECK_SOURCE_DIR "/configs/index_monitor.json");
  CHECK(meta.collection == Collection::Meta);
  CHECK(index.collection == Collection::Index);
  CHECK(meta.tests.front().label == "duplicate_br");
}

TEST_CASE("every shipped query runs on the mock store") {
  MockSparqlEndpoint endpoint;
  endpoint.edit([](TripleStore& s) {
    add_expression(s, "1", "10.1/a");
    add_expression(s, "2", "10.1/b");
    s.add("<http://example.org/br/3>", "cito:cites", "<http://example.org/br/3>");
  });
  for (const char* name : {"meta_monitor.json", "index_monitor.json"}) {
    auto report = run_tests(shipped(name, endpoint.url()));
    for (const auto& t : report.results) {
      CAPTURE(t.label);
      CHECK_FALSE(t.run.error.has_value());
      CHECK(t.passed.has_value());
    }
  }
  CHECK(endpoint.last_accept().find("application/sparql-results+json") != std::string::npos);
  CHECK(endpoint.last_content_type().find("application/x-www-form-urlencoded") != std::string::npos);
}

TEST_CASE("ask and count results against the mock endpoint") {
  MockSparqlEndpoint endpoint;
  endpoint.edit([](TripleStore& s) {
    add_expression(s, "1", "10.1/dup");
    add_expression(s, "2", "10.1/dup");
    add_expression(s, "3", "10.1/other");
  });
  auto config = shipped("meta_monitor.json", endpoint.url());
  auto before = run_tests(config);
  CHECK(result(before, "duplicate_br").run.got_result == true);
  CHECK(result(before, "duplicate_br").passed == false);
  CHECK(result(before, "duplicate_br_count").count == 2);
  CHECK(result(before, "multiple_manifestations").passed == true);

  endpoint.edit([](TripleStore& s) { s.remove_subject("<http://example.org/br/2>"); });
  auto after = run_tests(config);
  CHECK(result(after, "duplicate_br").passed == true);
  CHECK(result(after, "duplicate_br_count").count == 0);
  CHECK(result(after, "duplicate_br_count").passed == true);
}

TEST_CASE("count tests can be left out") {
  MockSparqlEndpoint endpoint;
  MonitorOptions options;
  options.run_count = false;
  auto report = run_tests(shipped("meta_monitor.json", endpoint.url()), options);
  for (const auto& t : report.results) CHECK(t.mode == TestMode::Ask);
  CHECK(report.results.size() == 6);
  auto counts = run_count_tests(shipped("meta_monitor.json", endpoint.url()));
  for (const auto& t : counts.results) CHECK(t.mode == TestMode::Count);
  CHECK(counts.results.size() == 6);
}

TEST_CASE("failing endpoints are recorded per test") {
  MockSparqlEndpoint good;
  MockSparqlEndpoint bad;
  bad.fail_with(500);
  auto config = shipped("meta_monitor.json", good.url());
  config.tests[1].endpoint = bad.url();
  MonitorOptions options;
  options.config_path = "cfg.json";
  auto report = run_tests(config, options);
  CHECK(report.results.size() == config.tests.size());
  const auto& broken = report.results[1];
  REQUIRE(broken.run.error.has_value());
  CHECK(broken.run.error->find("500") != std::string::npos);
  CHECK_FALSE(broken.passed.has_value());
  CHECK_FALSE(broken.run.got_result.has_value());
  CHECK(report.indeterminate_count() == 1);
  CHECK(report.failed_count() == 0);

  auto json = nlohmann::json::parse(emit_monitor_json(report));
  CHECK(json["endpoint"] == good.url());
  CHECK(json["config_path"] == "cfg.json");
  CHECK(json["results"][1]["passed"].is_null());
  CHECK(json["results"][1]["run"]["got_result"].is_null());
}

TEST_CASE("unreachable endpoints do not throw") {
  TestSpec spec;
  spec.label = "t";
  spec.query = "ASK {}";
  MonitorConfig config{"http://127.0.0.1:1/sparql", Collection::Meta, {spec}};
  MonitorOptions options;
  options.timeout = std::chrono::seconds(2);
  auto report = run_tests(config, options);
  REQUIRE(report.results.size() == 1);
  CHECK(report.results[0].run.error.has_value());
}

TEST_CASE("ratios round half up to one decimal") {
  CHECK(format_ratio(1388761, 121302680) == "1.1%");
  CHECK(format_ratio(2544914, 333356609) == "0.8%");
  CHECK(format_ratio(1, 20) == "5.0%");
  CHECK(format_ratio(1, 2000) == "0.1%");
  CHECK(format_ratio(1, 2001) == "0.0%");
  CHECK(format_ratio(0, 5) == "0.0%");
  CHECK(format_ratio(5, 5) == "100.0%");
}

TEST_CASE("monitor json round trip and html") {
  MonitorReport r;
  r.endpoint = "http://x/sparql";
  r.executed_at = "2024-01-01T00:00:00Z";
  r.total_running_time = 1.5;
  r.config_path = "c.json";
  TestResult a;
  a.label = "duplicate_br";
  a.description = "<dup>";
  a.query = "ASK {}";
  a.run.got_result = true;
  a.run.running_time = 0.25;
  a.passed = false;
  TestResult b = a;
  b.label = "duplicate_br_count";
  b.mode = TestMode::Count;
  b.count = 1388761;
  b.baseline = 121302680;
  r.results = {a, b};
  const auto text = emit_monitor_json(r);
  CHECK(parse_monitor_json(text) == r);
  auto doc = nlohmann::json::parse(text);
  CHECK(doc["results"][1]["ratio"] == "1.1%");
  CHECK_FALSE(doc["results"][0].contains("count"));
  const auto html = emit_monitor_html(r);
  CHECK(html.find("1.1%") != std::string::npos);
  CHECK(html.find("<dup>") == std::string::npos);
}
