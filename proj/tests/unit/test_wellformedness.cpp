#include <algorithm>
#include <string>
#include <vector>

#include "bibcheck/table.hpp"
#include "bibcheck/wellformedness.hpp"
#include "doctest.h"

using namespace bibcheck;

namespace {

std::string meta_csv(const std::vector<std::string>& rows) {
  std::string out = "id,title,author,pub_date,venue,volume,issue,page,type,publisher,editor\n";
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::vector<std::string> labels(const std::vector<ValidationError>& errors) {
  std::vector<std::string> out;
  for (const auto& e : errors) out.push_back(e.label);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ValidationError> run(const std::string& csv) {
  return run_wellformedness(parse_table(csv), RuleConfig::defaults());
}

}  // namespace

TEST_CASE("dates") {
  CHECK(is_well_formed_date("2020"));
  CHECK(is_well_formed_date("2020-02"));
  CHECK(is_well_formed_date("2020-02-29"));
  CHECK_FALSE(is_well_formed_date("2019-02-29"));
  CHECK(is_well_formed_date("2000-02-29"));
  CHECK_FALSE(is_well_formed_date("1900-02-29"));
  CHECK_FALSE(is_well_formed_date("2020-13"));
  CHECK_FALSE(is_well_formed_date("2020-00"));
  CHECK_FALSE(is_well_formed_date("2020-04-31"));
  CHECK_FALSE(is_well_formed_date("20"));
  CHECK_FALSE(is_well_formed_date("2020/01/01"));
  CHECK_FALSE(is_well_formed_date("2020-1-1"));
}

TEST_CASE("pages") {
  CHECK(is_well_formed_page("1-10"));
  CHECK(is_well_formed_page("15-15"));
  CHECK(is_well_formed_page("e12-e20"));
  CHECK_FALSE(is_well_formed_page("15"));
  CHECK_FALSE(is_well_formed_page("30-20-10"));
  CHECK_FALSE(is_well_formed_page("1 - 10"));
  CHECK_FALSE(is_well_formed_page("-10"));
}

TEST_CASE("agent items") {
  CHECK(is_well_formed_agent_item("Doe, Jane"));
  CHECK(is_well_formed_agent_item("Doe, Jane [orcid:0000-0002-1825-0097]"));
  CHECK(is_well_formed_agent_item("Doe, Jane [orcid:0000-0002-1825-0097 viaf:12345]"));
  CHECK(is_well_formed_agent_item("Crossref [crossref:297]"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane[orcid:0000-0002-1825-0097]"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane  [orcid:0000-0002-1825-0097]"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane [orcid:0000-0002-1825-0097"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane [orcid:0000-0002-1825-0097  viaf:1]"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane [ orcid:0000-0002-1825-0097]"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane []"));
  CHECK_FALSE(is_well_formed_agent_item("[orcid:0000-0002-1825-0097]"));
  CHECK_FALSE(is_well_formed_agent_item(", Jane"));
  CHECK_FALSE(is_well_formed_agent_item("Doe, Jane [a] [b]"));
}

TEST_CASE("uppercase titles") {
  CHECK(is_all_uppercase_title("A STUDY OF THINGS"));
  CHECK(is_all_uppercase_title("ÉTUDE 2"));
  CHECK_FALSE(is_all_uppercase_title("A Study"));
  CHECK_FALSE(is_all_uppercase_title("ÉTUDE é"));
  CHECK_FALSE(is_all_uppercase_title("1234"));
  CHECK_FALSE(is_all_uppercase_title(""));
}

TEST_CASE("identifier cells flag unsupported schemes and broken items") {
  auto doc = parse_table(meta_csv({R"("doi:10.1/x viaf:123 doi nocolon",Title,,,,,,,journal article,,)"}));
  auto errors = check_id_wellformedness(doc.cell(0, "id"), RuleConfig::defaults());
  REQUIRE(errors.size() == 3);
  for (const auto& e : errors) {
    CHECK(e.label == "br_id_format");
    CHECK(e.level == ValidationLevel::Wellformedness);
    CHECK(e.position.located_in == LocatedIn::Item);
  }
  CHECK(errors[0].position.table.at(0).at(0).second == std::vector<std::size_t>{1});
  CHECK(errors[1].position.table.at(0).at(0).second == std::vector<std::size_t>{2});
  CHECK(errors[2].position.table.at(0).at(0).second == std::vector<std::size_t>{3});
}

TEST_CASE("agent identifiers must use responsible agent schemes") {
  auto doc = parse_table(meta_csv({R"(doi:10.1/x,Title,"A, B [doi:10.1/y]; C, D [orcid:0000-0002-1825-0097]",,,,,,,,)"}));
  auto errors = check_id_wellformedness(doc.cell(0, "author"), RuleConfig::defaults());
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].label == "ra_id_format");
  CHECK(errors[0].position.table.at(0).at(0).second == std::vector<std::size_t>{0});
}

TEST_CASE("grammar failures are not double reported as identifier problems") {
  auto errors = run(meta_csv({R"(doi:10.1/x,Title,"A, B[viaf:1 orcid:]",,,,,,,,)"}));
  CHECK(labels(errors) == std::vector<std::string>{"people_item_format"});
}

TEST_CASE("row level checks") {
  auto errors = run(meta_csv({
      R"(,,"A, B",2020,,,,,journal article,,)",
      R"(doi:10.1/x,Title,,2020-02-30,,,,7,novel,,)",
  }));
  CHECK(labels(errors) == std::vector<std::string>{"date_format", "page_format", "required_field", "type_vocab"});
}

TEST_CASE("duplicate resources are grouped transitively") {
  auto doc = parse_table(meta_csv({
      "doi:10.1/a pmid:1,Title one,,,,,,,,,",
      "pmid:1 doi:10.1/b,Title two,,,,,,,,,",
      "DOI:10.1/B,Title three,,,,,,,,,",
      "doi:10.1/c,Title four,,,,,,,,,",
  }));
  auto errors = check_duplicates(doc);
  REQUIRE(errors.size() == 1);
  const auto& e = errors[0];
  CHECK(e.label == "duplicate_br");
  CHECK(e.position.located_in == LocatedIn::Row);
  std::vector<std::size_t> rows;
  for (const auto& [r, f] : e.position.table) rows.push_back(r);
  CHECK(rows == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("duplicate agents match on name or shared identifier") {
  auto doc = parse_table(meta_csv({
      R"(doi:10.1/a,Title,"Doe, Jane; doe,  jane; Roe, R [orcid:0000-0002-1825-0097]; Roe, Rick [orcid:0000-0002-1825-0097]; Poe, P",,,,,,,,)",
  }));
  auto errors = check_duplicates(doc);
  REQUIRE(errors.size() == 2);
  for (const auto& e : errors) CHECK(e.label == "duplicate_ra");
  CHECK(errors[0].position.table.at(0).at(0).second == std::vector<std::size_t>{0, 1});
  CHECK(errors[1].position.table.at(0).at(0).second == std::vector<std::size_t>{2, 3});
}

TEST_CASE("citation rows need both identifiers") {
  auto doc = parse_table("citing_id,citing_publication_date,cited_id,cited_publication_date\n"
                         ",2020,doi:10.1/a,2019\n"
                         "doi:10.1/b,2020-1,doi:10.1/a,\n");
  auto errors = run_wellformedness(doc, RuleConfig::defaults());
  CHECK(labels(errors) == std::vector<std::string>{"date_format", "required_field"});
}

TEST_CASE("venues") {
  auto errors = run(meta_csv({
      R"(doi:10.1/a,Title,,,Journal [issn:0138-9130],,,,,,)",
      R"(doi:10.1/b,Title,,,Journal [issn:0138-9130,,,,,,)",
      R"(doi:10.1/c,Title,,,Journal [orcid:0000-0002-1825-0097],,,,,,)",
  }));
  CHECK(labels(errors) == std::vector<std::string>{"br_id_format", "venue_format"});
}
