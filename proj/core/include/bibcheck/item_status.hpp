#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>

#include "bibcheck/report.hpp"

namespace bibcheck {

/// Addresses an item, or one identifier inside an agent/venue item's
/// bracket list when `component` is set (>= 0).
struct ItemRef {
  std::size_t row = 0;
  std::string field;
  std::size_t item = 0;
  int component = -1;

  ItemRef whole_item() const { return {row, field, item, -1}; }
  auto operator<=>(const ItemRef&) const = default;
};

/// Rule families, each with the levels it depends on.
enum class Rule {
  Wellformedness,
  IdSyntax,
  IdExistence,
  TypeIdCompatibility,
  PageInterval,
  ContainerConsistency,
  SelfCitation,
  CrossValidation,
};

std::span<const ValidationLevel> prerequisites(Rule rule);

/// Levels at which each item has failed. Updated between levels only.
class ItemStatus {
 public:
  void mark(const ItemRef& ref, ValidationLevel level);

  /// Marks every item an error-severity finding points at. Warnings are
  /// non-blocking and leave the status untouched.
  void record(const ValidationError& error);

  /// Failures of `ref` itself plus, for a component, of its whole item.
  std::set<ValidationLevel> failed(const ItemRef& ref) const;

  bool empty() const { return failed_.empty(); }

 private:
  std::map<ItemRef, std::set<ValidationLevel>> failed_;
};

/// True iff the item failed a level that `rule` depends on. Rules without
/// prerequisites are never skipped.
bool should_skip(const ItemRef& ref, Rule rule, const ItemStatus& status);

}  // namespace bibcheck
