#pragma once

#include <string_view>
#include <vector>

#include "bibcheck/report.hpp"
#include "bibcheck/rules_config.hpp"
#include "bibcheck/table.hpp"

namespace bibcheck {

// Level 1: compliance with the META-CSV / CITS-CSV syntax. Every function
// returns the findings for its scope; none of them consult earlier results.

/// Identifier cells (id, citing_id, cited_id) and the bracketed identifier
/// lists of agent and venue items. Agent/venue items that violate the
/// item grammar are left to check_people_item_format / check_venue_format.
std::vector<ValidationError> check_id_wellformedness(const Cell& cell, const RuleConfig& config);

std::vector<ValidationError> check_date_wellformedness(const Cell& cell);
std::vector<ValidationError> check_page_format(const Cell& cell);
std::vector<ValidationError> check_people_item_format(const Cell& cell);
std::vector<ValidationError> check_venue_format(const Cell& cell);
std::vector<ValidationError> check_uppercase_title(const Cell& cell);

/// duplicate_br across rows (META only) and duplicate_ra within agent cells.
std::vector<ValidationError> check_duplicates(const TableDocument& document);

/// META row: required_field (no id and no title) and type_vocab.
std::vector<ValidationError> check_required_and_vocab(const Row& row, const RuleConfig& config);

/// CITS row: both identifier cells must be non-empty.
std::vector<ValidationError> check_cits_required(const Row& row);

std::vector<ValidationError> run_wellformedness(const TableDocument& document, const RuleConfig& config);

bool is_well_formed_date(std::string_view value);
bool is_well_formed_page(std::string_view value);
/// "Name" or "Name [scheme:value scheme:value]" with single spaces.
bool is_well_formed_agent_item(std::string_view item);
bool is_all_uppercase_title(std::string_view title);

}  // namespace bibcheck
