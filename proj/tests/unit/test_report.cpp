#include <string>
#include <vector>

#include "bibcheck/catalog.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/table.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bibcheck;
using ojson = nlohmann::ordered_json;

namespace {

const std::string kMeta = "id,title,author,pub_date,venue,volume,issue,page,type,publisher,editor\n";

TableDocument sample() {
  return parse_table(kMeta +
                     "doi:10.1/a,A,,,,,,,,,\n"
                     "doi:10.1/b,B,\"Doe, J; Roe, R\",,,,,30-20-10,,,\n"
                     "doi:10.1/c pmid:1,C,,,,,,,,,\n"
                     "doi:10.1/c pmid:1,D,,,,,,,,,\n");
}

ValidationError page_error(std::size_t row) {
  auto e = make_error("page_format", ValidationLevel::Wellformedness, LocatedIn::Item, {});
  add_position(e.position.table, row, "page", 0);
  return e;
}

ValidationError duplicate_rows() {
  auto e = make_error("duplicate_br", ValidationLevel::Wellformedness, LocatedIn::Row, {});
  for (std::size_t r : {3, 2}) {
    add_position(e.position.table, r, "id", 1);
    add_position(e.position.table, r, "id", 0);
  }
  return e;
}

}  // namespace

TEST_CASE("error objects carry six keys in a fixed order") {
  const std::vector<ValidationError> errors{duplicate_rows()};
  auto doc = ojson::parse(emit_json(errors));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 1);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc[0].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"validation_level", "error_type", "error_label", "valid", "message",
                                         "position"});
  CHECK(doc[0]["validation_level"] == "csv_wellformedness");
  CHECK(doc[0]["error_type"] == "error");
  CHECK(doc[0]["valid"] == false);
  CHECK(doc[0]["position"]["located_in"] == "row");
}

TEST_CASE("positions are canonicalized before emission") {
  std::vector<ValidationError> errors{duplicate_rows()};
  sort_canonically(errors, meta_header());
  auto doc = ojson::parse(emit_json(errors));
  CHECK(doc[0]["position"]["table"] == ojson::parse(R"({"2": {"id": [0, 1]}, "3": {"id": [0, 1]}})"));
}

TEST_CASE("canonical order is row, field in header order, item, then label") {
  std::vector<ValidationError> errors{page_error(1), duplicate_rows()};
  auto title = make_error("uppercase_title", ValidationLevel::Wellformedness, LocatedIn::Item, {});
  add_position(title.position.table, 1, "title", 0);
  errors.push_back(title);
  sort_canonically(errors, meta_header());
  CHECK(errors[0].label == "uppercase_title");
  CHECK(errors[1].label == "page_format");
  CHECK(errors[2].label == "duplicate_br");
}

TEST_CASE("json round trip") {
  std::vector<ValidationError> errors{page_error(1), duplicate_rows()};
  auto cross = make_error("date_mismatch", ValidationLevel::Semantics, LocatedIn::Field, {});
  add_position(cross.position.table, 0, "cited_publication_date", 0);
  add_position(cross.position.meta_table, 2, "pub_date", 0);
  errors.push_back(cross);
  sort_canonically(errors, meta_header());
  const auto text = emit_json(errors);
  const auto back = parse_errors_json(text);
  CHECK(back == errors);
  CHECK(emit_json(back) == text);
}

TEST_CASE("malformed reports are rejected") {
  CHECK_THROWS_AS(parse_errors_json("{"), ReportSchemaError);
  CHECK_THROWS_AS(parse_errors_json("{}"), ReportSchemaError);
  CHECK_THROWS_AS(parse_errors_json(R"([{"error_label": "x"}])"), ReportSchemaError);
}

TEST_CASE("text summary groups errors before warnings") {
  std::vector<ValidationError> errors{page_error(1)};
  auto warn = make_error("uppercase_title", ValidationLevel::Wellformedness, LocatedIn::Item, {});
  add_position(warn.position.table, 0, "title", 0);
  errors.insert(errors.begin(), warn);
  const auto txt = emit_txt_summary(errors);
  CHECK(txt.rfind("2 finding(s): 1 error(s), 1 warning(s)", 0) == 0);
  CHECK(txt.find("page_format") < txt.find("uppercase_title  warning"));
  CHECK(emit_txt_summary(std::vector<ValidationError>{}) == "No errors detected.\n");
}

TEST_CASE("html report shows only rows with findings") {
  const auto doc = sample();
  std::vector<ValidationError> errors{page_error(1), duplicate_rows()};
  sort_canonically(errors, meta_header());
  const auto html = emit_html(errors, doc, stub_viewer_asset());
  CHECK(html.find("id=\"report-data\"") != std::string::npos);
  CHECK(html.find("data-row=\"0\"") == std::string::npos);
  CHECK(html.find("data-row=\"1\"") != std::string::npos);
  CHECK(html.find("data-row=\"2\"") != std::string::npos);
  CHECK(html.find("data-row=\"3\"") != std::string::npos);
  CHECK(html.find("<script src") == std::string::npos);
  CHECK(html.find("http://") == std::string::npos);
}

TEST_CASE("html escapes cell content and the data island") {
  const auto doc = parse_table(kMeta + "doi:10.1/a,\"<b>&</script>\",,,,,,7,,,\n");
  std::vector<ValidationError> errors{page_error(0)};
  const auto html = emit_html(errors, doc, stub_viewer_asset());
  CHECK(html.find("<b>&</script>") == std::string::npos);
}

TEST_CASE("unresolvable positions are reported") {
  const auto doc = sample();
  std::vector<ValidationError> errors{page_error(9)};
  CHECK(find_unresolved_position(errors, doc).has_value());
  CHECK_THROWS_AS(emit_html(errors, doc, stub_viewer_asset()), ReportSchemaError);
  auto bad_item = make_error("duplicate_ra", ValidationLevel::Wellformedness, LocatedIn::Item, {});
  add_position(bad_item.position.table, 1, "author", 5);
  CHECK(find_unresolved_position(std::vector{bad_item}, doc).has_value());
  CHECK_FALSE(find_unresolved_position(std::vector{page_error(1)}, doc).has_value());
}

TEST_CASE("run metadata lives beside the error list") {
  ValidationReport report;
  report.errors = {page_error(1)};
  report.input_path = "x.csv";
  report.levels_run = {ValidationLevel::Wellformedness};
  auto meta = ojson::parse(emit_run_metadata(report));
  CHECK(meta["input_path"] == "x.csv");
  CHECK(meta["error_count"] == 1);
  CHECK(meta["levels_run"] == ojson::array({"csv_wellformedness"}));
  CHECK(format_timestamp(Clock::time_point{}) == "1970-01-01T00:00:00Z");
}
