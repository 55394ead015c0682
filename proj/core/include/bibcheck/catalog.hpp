#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bibcheck/report.hpp"

namespace bibcheck {

struct CatalogEntry {
  Severity severity;
  std::vector<ValidationLevel> levels;  // levels allowed to emit the label
  std::string message;
  bool extension = false;  // label not part of the original validator's catalog
};

/// Every error label the validator can emit.
const std::map<std::string, CatalogEntry, std::less<>>& error_catalog();

const CatalogEntry& catalog_entry(std::string_view label);

/// Builds an error with the catalog severity and message. Throws
/// std::logic_error if `level` may not emit `label`.
ValidationError make_error(std::string_view label, ValidationLevel level, LocatedIn located_in, PositionTable table);

}  // namespace bibcheck
