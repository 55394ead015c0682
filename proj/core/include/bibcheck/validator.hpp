#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bibcheck/existence.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/rules_config.hpp"
#include "bibcheck/table.hpp"

namespace bibcheck {

struct ValidateOptions {
  RuleConfig config = RuleConfig::defaults();
  bool offline = false;
  /// When set, the document must be of this kind.
  std::optional<TableKind> expected_kind;
  /// Defaults to an HTTP resolver built from `config.resolvers`.
  std::shared_ptr<Resolver> resolver;
  /// Defaults to a throwaway in-memory cache.
  LookupCache* cache = nullptr;
  ResolveLimits limits;
};

class TableKindMismatch : public TableError {
 public:
  TableKindMismatch(TableKind expected, TableKind actual);
};

/// Runs the four levels in order. Later levels skip items that failed a
/// level they depend on. Errors come back canonically sorted.
ValidationReport validate_document(const TableDocument& document, const ValidateOptions& options,
                                   std::string input_path = {});
ValidationReport validate_document(const std::filesystem::path& path, const ValidateOptions& options);

struct PairReport {
  ValidationReport meta;
  ValidationReport cits;
  /// Findings relating the two tables; `position.table` addresses the
  /// citations, `position.meta_table` the metadata.
  std::vector<ValidationError> cross;
};

PairReport validate_pair(const TableDocument& meta, const TableDocument& cits, const ValidateOptions& options);
PairReport validate_pair(const std::filesystem::path& meta_path, const std::filesystem::path& cits_path,
                         const ValidateOptions& options);

}  // namespace bibcheck
