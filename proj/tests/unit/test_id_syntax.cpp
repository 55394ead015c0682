#include <random>
#include <string>

#include "bibcheck/id_syntax.hpp"
#include "corpus.hpp"
#include "doctest.h"

using namespace bibcheck;

namespace {

bool valid(std::string_view scheme, std::string_view value) { return validate_id_syntax(scheme, value).valid; }

}  // namespace

TEST_CASE("doi pattern") {
  CHECK(valid("doi", "10.1000/182"));
  CHECK(valid("doi", "10.1002/ASI.24123"));
  CHECK(valid("doi", "10.1000.10/xyz"));
  CHECK_FALSE(valid("doi", "10.12/abc"));
  CHECK_FALSE(valid("doi", "11.1000/abc"));
  CHECK_FALSE(valid("doi", "10.1000/"));
  CHECK_FALSE(valid("doi", "10.1000/has space"));
}

TEST_CASE("pmid and pmcid patterns") {
  CHECK(valid("pmid", "31415926"));
  CHECK_FALSE(valid("pmid", "0051"));
  CHECK_FALSE(valid("pmid", "12a"));
  CHECK(valid("pmcid", "PMC1234"));
  CHECK_FALSE(valid("pmcid", "1234"));
}

TEST_CASE("orcid values from published examples") {
  CHECK(valid("orcid", "0000-0003-0530-4305"));
  CHECK(valid("orcid", "0000-0002-1825-0097"));
  CHECK(valid("orcid", "0000-0002-1694-233X"));
  // Appears in a sample row of the META-CSV documentation with a check
  // character that does not match its digits.
  CHECK_FALSE(testsupport::mod11_2_valid("000000515506523X"));
  CHECK_FALSE(valid("orcid", "0000-0051-5506-523X"));
  CHECK_FALSE(valid("orcid", "0000-0002-1825-009"));
  CHECK_FALSE(valid("orcid", "0000000218250097"));
}

TEST_CASE("mod 11-2 check character agrees with the defining congruence") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> digit(0, 9);
  for (int n = 0; n < 2000; ++n) {
    std::string base;
    for (int i = 0; i < 15; ++i) base += static_cast<char>('0' + digit(rng));
    const char c = mod11_2_check_char(base);
    CHECK(testsupport::mod11_2_valid(base + c));
  }
}

TEST_CASE("issn check digit") {
  CHECK(valid("issn", "0317-8471"));
  CHECK(valid("issn", "2049-3630"));
  CHECK(valid("issn", "1050-124X"));
  CHECK_FALSE(valid("issn", "0317-8472"));
  CHECK_FALSE(valid("issn", "03178471"));
}

TEST_CASE("isbn check digits") {
  CHECK(valid("isbn", "9780306406157"));
  CHECK(valid("isbn", "978-0-306-40615-7"));
  CHECK(valid("isbn", "0306406152"));
  CHECK(valid("isbn", "080442957X"));
  CHECK_FALSE(valid("isbn", "9780306406158"));
  CHECK_FALSE(valid("isbn", "9770306406156"));
  CHECK_FALSE(valid("isbn", "0306406153"));
}

TEST_CASE("verdicts carry a reason") {
  const auto v = validate_id_syntax("orcid", "0000-0002-1825-0098");
  CHECK_FALSE(v.valid);
  CHECK(v.reason.find("check") != std::string::npos);
}

TEST_CASE("unknown scheme throws") {
  CHECK_THROWS_AS(validate_id_syntax("nope", "1"), UnknownScheme);
  CHECK(find_scheme_spec("nope") == nullptr);
  CHECK(find_scheme_spec("doi") != nullptr);
}

TEST_CASE("agent scheme rules") {
  CHECK(valid("viaf", "309649450"));
  CHECK(valid("ror", "02mhbdp94"));
  CHECK_FALSE(valid("ror", "12mhbdp94"));
  CHECK(valid("wikidata", "Q42"));
  CHECK_FALSE(valid("wikidata", "42"));
}
