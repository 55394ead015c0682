#include "bibcheck/semantics.hpp"

#include <map>
#include <set>

#include "bibcheck/catalog.hpp"
#include "bibcheck/wellformedness.hpp"

namespace bibcheck {

namespace {

constexpr auto kLevel = ValidationLevel::Semantics;

bool skip(const ItemStatus& status, std::size_t row, std::string_view field, std::size_t item, Rule rule) {
  return should_skip({row, std::string(field), item, -1}, rule, status);
}

std::optional<long long> positive_integer(std::string_view s) {
  if (s.empty() || s.size() > 12 || s.front() == '0') return std::nullopt;
  long long v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<Component> as_identifier(const Item& item) {
  auto parsed = parse_id_item(item.raw);
  if (!std::holds_alternative<Component>(parsed)) return std::nullopt;
  return std::get<Component>(std::move(parsed));
}

}  // namespace

bool dates_compatible(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (b.substr(0, a.size()) != a) return false;
  return a.size() == b.size() || b[a.size()] == '-';
}

std::vector<ValidationError> check_type_id_compatibility(const Row& row, const RuleConfig& config,
                                                         const ItemStatus& status) {
  std::vector<ValidationError> out;
  const Cell* type = row.find("type");
  const Cell* ids = row.find("id");
  if (type == nullptr || ids == nullptr || type->items.empty()) return out;
  if (skip(status, row.index, "type", 0, Rule::TypeIdCompatibility)) return out;
  auto allowed = config.type_id_compatibility.find(type->items.front().raw);
  if (allowed == config.type_id_compatibility.end()) return out;

  for (const auto& item : ids->items) {
    if (skip(status, row.index, "id", item.index, Rule::TypeIdCompatibility)) continue;
    auto id = as_identifier(item);
    if (!id || allowed->second.count(id->scheme) > 0) continue;
    PositionTable table;
    add_position(table, row.index, "id", item.index);
    add_position(table, row.index, "type", 0);
    out.push_back(make_error("type_id_mismatch", kLevel, LocatedIn::Field, std::move(table)));
  }
  return out;
}

std::vector<ValidationError> check_page_interval(const Row& row, const ItemStatus& status) {
  std::vector<ValidationError> out;
  const Cell* page = row.find("page");
  if (page == nullptr || page->items.empty()) return out;
  if (skip(status, row.index, "page", 0, Rule::PageInterval)) return out;
  const std::string_view value = page->items.front().raw;
  const auto dash = value.find('-');
  if (dash == std::string_view::npos) return out;
  const auto start = positive_integer(value.substr(0, dash));
  const auto end = positive_integer(value.substr(dash + 1));
  if (start && end && *start > *end) {
    PositionTable table;
    add_position(table, row.index, "page", 0);
    out.push_back(make_error("page_interval", kLevel, LocatedIn::Item, std::move(table)));
  }
  return out;
}

std::vector<ValidationError> check_container_consistency(const Row& row, const RuleConfig& config,
                                                         const ItemStatus& status) {
  std::vector<ValidationError> out;
  const Cell* venue = row.find("venue");
  if (venue == nullptr) return out;

  if (venue->items.empty()) {
    PositionTable table;
    bool container = false;
    for (const char* field : {"volume", "issue"}) {
      const Cell* c = row.find(field);
      if (c == nullptr || c->items.empty()) continue;
      container = true;
      add_position(table, row.index, field, 0);
    }
    if (container) {
      add_position(table, row.index, "venue");
      out.push_back(make_error("container_without_venue", kLevel, LocatedIn::Field, std::move(table)));
    }
    return out;
  }

  const Cell* type = row.find("type");
  if (type == nullptr || type->items.empty()) return out;
  if (skip(status, row.index, "type", 0, Rule::ContainerConsistency)) return out;
  if (config.containerless_types.count(type->items.front().raw) == 0) return out;
  PositionTable table;
  for (const auto& item : venue->items) add_position(table, row.index, "venue", item.index);
  add_position(table, row.index, "type", 0);
  out.push_back(make_error("venue_type_mismatch", kLevel, LocatedIn::Field, std::move(table)));
  return out;
}

std::vector<ValidationError> check_self_citation(const Row& row, const ItemStatus& status) {
  std::vector<ValidationError> out;
  const Cell* citing = row.find("citing_id");
  const Cell* cited = row.find("cited_id");
  if (citing == nullptr || cited == nullptr) return out;

  auto keys_of = [&](const Cell& cell) {
    std::map<std::size_t, std::string> keys;
    for (const auto& item : cell.items) {
      if (skip(status, row.index, cell.field, item.index, Rule::SelfCitation)) continue;
      if (auto id = as_identifier(item)) keys[item.index] = identifier_key(id->scheme, id->value);
    }
    return keys;
  };
  const auto citing_keys = keys_of(*citing);
  const auto cited_keys = keys_of(*cited);
  std::set<std::string> cited_set;
  for (const auto& [i, k] : cited_keys) cited_set.insert(k);
  std::set<std::string> shared;
  for (const auto& [i, k] : citing_keys) {
    if (cited_set.count(k) > 0) shared.insert(k);
  }
  if (shared.empty()) return out;

  PositionTable table;
  for (const auto& [i, k] : citing_keys) {
    if (shared.count(k) > 0) add_position(table, row.index, "citing_id", i);
  }
  for (const auto& [i, k] : cited_keys) {
    if (shared.count(k) > 0) add_position(table, row.index, "cited_id", i);
  }
  out.push_back(make_error("self_citation", kLevel, LocatedIn::Field, std::move(table)));
  return out;
}

std::vector<ValidationError> run_semantics(const TableDocument& document, const RuleConfig& config,
                                           const ItemStatus& status) {
  std::vector<ValidationError> out;
  auto append = [&out](std::vector<ValidationError> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  for (const auto& row : document.rows()) {
    if (document.kind() == TableKind::Meta) {
      append(check_type_id_compatibility(row, config, status));
      append(check_page_interval(row, status));
      append(check_container_consistency(row, config, status));
    } else {
      append(check_self_citation(row, status));
    }
  }
  return out;
}

std::vector<ValidationError> cross_validate(const TableDocument& meta, const TableDocument& cits,
                                            const ItemStatus& meta_status, const ItemStatus& cits_status) {
  // Presence in the metadata table is judged on every parseable identifier,
  // whatever else is wrong with its row.
  std::map<std::string, std::set<std::size_t>> meta_rows_by_key;
  for (const auto& row : meta.rows()) {
    const Cell* ids = row.find("id");
    if (ids == nullptr) continue;
    for (const auto& item : ids->items) {
      if (auto id = as_identifier(item)) meta_rows_by_key[identifier_key(id->scheme, id->value)].insert(row.index);
    }
  }

  std::vector<ValidationError> out;
  for (const auto& row : cits.rows()) {
    for (const auto& [id_field, date_field] : {std::pair{"citing_id", "citing_publication_date"},
                                               std::pair{"cited_id", "cited_publication_date"}}) {
      const Cell* ids = row.find(id_field);
      if (ids == nullptr) continue;
      std::set<std::size_t> matched_rows;
      for (const auto& item : ids->items) {
        if (skip(cits_status, row.index, id_field, item.index, Rule::CrossValidation)) continue;
        auto id = as_identifier(item);
        if (!id) continue;
        auto it = meta_rows_by_key.find(identifier_key(id->scheme, id->value));
        if (it == meta_rows_by_key.end()) {
          PositionTable table;
          add_position(table, row.index, id_field, item.index);
          out.push_back(make_error("unmatched_citation_id", kLevel, LocatedIn::Item, std::move(table)));
          continue;
        }
        matched_rows.insert(it->second.begin(), it->second.end());
      }

      const Cell* date = row.find(date_field);
      if (date == nullptr || date->items.empty() || matched_rows.empty()) continue;
      if (skip(cits_status, row.index, date_field, 0, Rule::CrossValidation)) continue;
      const auto& cits_date = date->items.front().raw;
      if (!is_well_formed_date(cits_date)) continue;
      for (auto m : matched_rows) {
        const Cell* pub = meta.rows()[m].find("pub_date");
        if (pub == nullptr || pub->items.empty()) continue;
        if (skip(meta_status, m, "pub_date", 0, Rule::CrossValidation)) continue;
        const auto& meta_date = pub->items.front().raw;
        if (!is_well_formed_date(meta_date) || dates_compatible(cits_date, meta_date)) continue;
        ValidationError e = make_error("date_mismatch", kLevel, LocatedIn::Field, {});
        add_position(e.position.table, row.index, date_field, 0);
        add_position(e.position.meta_table, m, "pub_date", 0);
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

}  // namespace bibcheck
