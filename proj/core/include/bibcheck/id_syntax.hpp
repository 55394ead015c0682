#pragma once

#include <functional>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bibcheck/item_status.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/rules_config.hpp"
#include "bibcheck/table.hpp"

namespace bibcheck {

enum class EntityRole { BibliographicResource, ResponsibleAgent, Venue };

/// Syntax rules of one identifier scheme as published by its issuer.
struct SchemeSpec {
  std::string scheme;
  std::regex pattern;                                   // matched against the whole value
  std::function<bool(std::string_view)> checksum;      // empty when the scheme has none
  std::vector<EntityRole> applies_to;
};

class UnknownScheme : public std::invalid_argument {
 public:
  explicit UnknownScheme(std::string_view scheme)
      : std::invalid_argument("no syntax rule for identifier scheme '" + std::string(scheme) + "'") {}
};

const std::vector<SchemeSpec>& scheme_specs();
const SchemeSpec* find_scheme_spec(std::string_view scheme);

struct SyntaxVerdict {
  bool valid = true;
  std::string reason;  // set when !valid
};

/// Pure function of (scheme, value). Throws UnknownScheme if no rule exists.
SyntaxVerdict validate_id_syntax(std::string_view scheme, std::string_view value);

/// ISO 7064 MOD 11-2 check character for the given digits ('0'-'9' or 'X').
char mod11_2_check_char(std::string_view digits);
/// 16-character ORCID with or without hyphens; verifies the last character.
bool orcid_checksum_ok(std::string_view value);
bool issn_checksum_ok(std::string_view value);
bool isbn_checksum_ok(std::string_view value);

/// Level 2 over a whole document. Items failing a prerequisite in `status`
/// are skipped. Bracketed identifiers that fail mark their component in
/// `failed`, so level 3 can skip just that identifier.
std::vector<ValidationError> run_external_syntax(const TableDocument& document, const ItemStatus& status,
                                                 std::vector<ItemRef>* failed = nullptr);

}  // namespace bibcheck
