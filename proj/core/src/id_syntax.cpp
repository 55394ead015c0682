#include "bibcheck/id_syntax.hpp"

#include <algorithm>
#include <cctype>

#include "bibcheck/catalog.hpp"

namespace bibcheck {

namespace {

using R = EntityRole;

std::string strip_hyphens(std::string_view value) {
  std::string out;
  for (char c : value) {
    if (c != '-') out += c;
  }
  return out;
}

std::vector<SchemeSpec> build_specs() {
  const auto icase = std::regex::ECMAScript | std::regex::icase;
  std::vector<SchemeSpec> s;
  s.push_back({"doi", std::regex(R"(^10\.\d{4,9}(\.\d+)*/\S+$)", icase), {}, {R::BibliographicResource, R::Venue}});
  s.push_back({"pmid", std::regex(R"(^[1-9]\d*$)"), {}, {R::BibliographicResource}});
  s.push_back({"pmcid", std::regex(R"(^PMC[1-9]\d*$)"), {}, {R::BibliographicResource}});
  s.push_back({"issn", std::regex(R"(^\d{4}-\d{3}[\dX]$)"), issn_checksum_ok, {R::Venue, R::BibliographicResource}});
  s.push_back({"isbn", std::regex(R"(^(?:\d[\d-]{8,15}[\dX])$)"), isbn_checksum_ok,
               {R::BibliographicResource, R::Venue}});
  s.push_back({"wikidata", std::regex(R"(^Q[1-9]\d*$)"), {},
               {R::BibliographicResource, R::ResponsibleAgent, R::Venue}});
  s.push_back({"openalex", std::regex(R"(^[WSAIPFC][1-9]\d*$)"), {}, {R::BibliographicResource, R::Venue}});
  s.push_back({"url", std::regex(R"(^(?:https?://)?[^\s/:]+\.[^\s/:]+(?::\d+)?(?:/\S*)?$)", icase), {},
               {R::BibliographicResource, R::Venue}});
  s.push_back({"jid", std::regex(R"(^[A-Za-z0-9][A-Za-z0-9._-]*$)"), {}, {R::Venue, R::BibliographicResource}});
  s.push_back({"arxiv",
               std::regex(R"(^(?:\d{4}\.\d{4,5}|[a-z-]+(?:\.[A-Z]{2})?/\d{7})(?:v\d+)?$)"),
               {},
               {R::BibliographicResource}});
  s.push_back({"orcid", std::regex(R"(^\d{4}-\d{4}-\d{4}-\d{3}[\dX]$)"), orcid_checksum_ok, {R::ResponsibleAgent}});
  s.push_back({"viaf", std::regex(R"(^[1-9]\d*$)"), {}, {R::ResponsibleAgent}});
  s.push_back({"crossref", std::regex(R"(^\d+$)"), {}, {R::ResponsibleAgent}});
  s.push_back({"ror", std::regex(R"(^0[a-hj-km-np-tv-z0-9]{6}\d{2}$)"), {}, {R::ResponsibleAgent}});
  return s;
}

ValidationError syntax_error(std::string_view label, std::size_t row, std::string_view field, std::size_t item) {
  PositionTable table;
  add_position(table, row, field, item);
  return make_error(label, ValidationLevel::ExternalSyntax, LocatedIn::Item, std::move(table));
}

// Identifiers without a syntax rule (added through configuration) pass.
bool passes(const Component& id) {
  if (find_scheme_spec(id.scheme) == nullptr) return true;
  return validate_id_syntax(id.scheme, id.value).valid;
}

}  // namespace

const std::vector<SchemeSpec>& scheme_specs() {
  static const auto specs = build_specs();
  return specs;
}

const SchemeSpec* find_scheme_spec(std::string_view scheme) {
  const auto& specs = scheme_specs();
  auto it = std::find_if(specs.begin(), specs.end(), [&](const SchemeSpec& s) { return s.scheme == scheme; });
  return it == specs.end() ? nullptr : &*it;
}

SyntaxVerdict validate_id_syntax(std::string_view scheme, std::string_view value) {
  const SchemeSpec* spec = find_scheme_spec(scheme);
  if (spec == nullptr) throw UnknownScheme(scheme);
  if (!std::regex_match(value.begin(), value.end(), spec->pattern)) {
    return {false, "value does not match the " + spec->scheme + " pattern"};
  }
  if (spec->checksum && !spec->checksum(value)) return {false, "wrong " + spec->scheme + " check digit"};
  return {};
}

char mod11_2_check_char(std::string_view digits) {
  int total = 0;
  for (char c : digits) total = (total + (c - '0')) * 2;
  const int result = (12 - total % 11) % 11;
  return result == 10 ? 'X' : static_cast<char>('0' + result);
}

bool orcid_checksum_ok(std::string_view value) {
  const auto plain = strip_hyphens(value);
  if (plain.size() != 16) return false;
  if (!std::all_of(plain.begin(), plain.end() - 1, [](unsigned char c) { return std::isdigit(c); })) return false;
  return mod11_2_check_char(std::string_view(plain).substr(0, 15)) == plain.back();
}

bool issn_checksum_ok(std::string_view value) {
  const auto plain = strip_hyphens(value);
  if (plain.size() != 8) return false;
  int sum = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(plain[i]))) return false;
    sum += (plain[i] - '0') * static_cast<int>(8 - i);
  }
  const int check = (11 - sum % 11) % 11;
  return plain[7] == (check == 10 ? 'X' : static_cast<char>('0' + check));
}

bool isbn_checksum_ok(std::string_view value) {
  const auto plain = strip_hyphens(value);
  if (plain.size() == 10) {
    int sum = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      int d = 0;
      if (std::isdigit(static_cast<unsigned char>(plain[i]))) {
        d = plain[i] - '0';
      } else if (i == 9 && plain[i] == 'X') {
        d = 10;
      } else {
        return false;
      }
      sum += d * static_cast<int>(10 - i);
    }
    return sum % 11 == 0;
  }
  if (plain.size() == 13) {
    if (plain.compare(0, 3, "978") != 0 && plain.compare(0, 3, "979") != 0) return false;
    int sum = 0;
    for (std::size_t i = 0; i < 13; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(plain[i]))) return false;
      sum += (plain[i] - '0') * (i % 2 == 0 ? 1 : 3);
    }
    return sum % 10 == 0;
  }
  return false;
}

std::vector<ValidationError> run_external_syntax(const TableDocument& document, const ItemStatus& status,
                                                 std::vector<ItemRef>* failed) {
  std::vector<ValidationError> out;
  for (const auto& row : document.rows()) {
    for (const auto& cell : row.cells) {
      const auto role = field_role(cell.field);
      if (role == FieldRole::Single) continue;
      for (const auto& item : cell.items) {
        const ItemRef ref{row.index, cell.field, item.index, -1};
        if (should_skip(ref, Rule::IdSyntax, status)) continue;

        if (role == FieldRole::Identifiers) {
          auto parsed = parse_id_item(item.raw);
          if (!std::holds_alternative<Component>(parsed)) continue;
          if (!passes(std::get<Component>(parsed))) {
            out.push_back(syntax_error("br_id_format", row.index, cell.field, item.index));
            if (failed != nullptr) failed->push_back(ref);
          }
          continue;
        }

        const char* label = role == FieldRole::Venue ? "br_id_format" : "ra_id_format";
        const auto ids = bracketed_ids(item.raw);
        for (std::size_t k = 0; k < ids.size(); ++k) {
          auto parsed = parse_id_item(ids[k]);
          if (!std::holds_alternative<Component>(parsed)) continue;
          if (!passes(std::get<Component>(parsed))) {
            out.push_back(syntax_error(label, row.index, cell.field, item.index));
            if (failed != nullptr) failed->push_back({row.index, cell.field, item.index, static_cast<int>(k)});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace bibcheck
