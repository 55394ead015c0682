#pragma once

#include <string_view>
#include <vector>

#include "bibcheck/item_status.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/rules_config.hpp"
#include "bibcheck/table.hpp"

namespace bibcheck {

// Level 4. Each check consults `status` and ignores items that failed a
// level the rule depends on; an empty status checks everything.

std::vector<ValidationError> check_type_id_compatibility(const Row& row, const RuleConfig& config,
                                                         const ItemStatus& status = {});
std::vector<ValidationError> check_page_interval(const Row& row, const ItemStatus& status = {});
std::vector<ValidationError> check_container_consistency(const Row& row, const RuleConfig& config,
                                                         const ItemStatus& status = {});
std::vector<ValidationError> check_self_citation(const Row& row, const ItemStatus& status = {});

std::vector<ValidationError> run_semantics(const TableDocument& document, const RuleConfig& config,
                                           const ItemStatus& status = {});

/// Findings address the CITS-CSV rows through `position.table` and the
/// META-CSV rows through `position.meta_table`.
std::vector<ValidationError> cross_validate(const TableDocument& meta, const TableDocument& cits,
                                            const ItemStatus& meta_status = {}, const ItemStatus& cits_status = {});

/// True when one date is the other, or a prefix of it ending at a hyphen
/// boundary ("2020" vs "2020-05-01").
bool dates_compatible(std::string_view a, std::string_view b);

}  // namespace bibcheck
