#include "bibcheck/item_status.hpp"

#include <algorithm>
#include <array>

namespace bibcheck {

namespace {
using L = ValidationLevel;
constexpr std::array<L, 0> kNone{};
constexpr std::array<L, 1> kAfterWellformedness{L::Wellformedness};
constexpr std::array<L, 2> kAfterSyntax{L::Wellformedness, L::ExternalSyntax};
}  // namespace

std::span<const ValidationLevel> prerequisites(Rule rule) {
  switch (rule) {
    case Rule::Wellformedness:
      return kNone;
    case Rule::IdSyntax:
      return kAfterWellformedness;
    case Rule::IdExistence:
    case Rule::TypeIdCompatibility:
    case Rule::PageInterval:
    case Rule::ContainerConsistency:
    case Rule::SelfCitation:
    case Rule::CrossValidation:
      return kAfterSyntax;
  }
  return kNone;
}

void ItemStatus::mark(const ItemRef& ref, ValidationLevel level) { failed_[ref].insert(level); }

void ItemStatus::record(const ValidationError& error) {
  if (error.severity != Severity::Error) return;
  for (const auto& [row, fields] : error.position.table) {
    for (const auto& [field, items] : fields) {
      for (auto item : items) mark({row, field, item, -1}, error.level);
    }
  }
}

std::set<ValidationLevel> ItemStatus::failed(const ItemRef& ref) const {
  std::set<ValidationLevel> out;
  if (auto it = failed_.find(ref); it != failed_.end()) out = it->second;
  if (ref.component >= 0) {
    if (auto it = failed_.find(ref.whole_item()); it != failed_.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

bool should_skip(const ItemRef& ref, Rule rule, const ItemStatus& status) {
  const auto prereq = prerequisites(rule);
  if (prereq.empty()) return false;
  const auto failed = status.failed(ref);
  return std::any_of(prereq.begin(), prereq.end(), [&](ValidationLevel l) { return failed.count(l) > 0; });
}

}  // namespace bibcheck
