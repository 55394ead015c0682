#include "bibcheck/wellformedness.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <regex>

#include "bibcheck/catalog.hpp"

namespace bibcheck {

namespace {

constexpr auto kLevel = ValidationLevel::Wellformedness;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

ValidationError item_error(std::string_view label, const Cell& cell, std::size_t item) {
  PositionTable table;
  add_position(table, cell.row_index, cell.field, item);
  return make_error(label, kLevel, LocatedIn::Item, std::move(table));
}

bool id_well_formed(std::string_view raw, const std::set<std::string>& allowed) {
  auto parsed = parse_id_item(raw);
  if (!std::holds_alternative<Component>(parsed)) return false;
  return allowed.count(std::get<Component>(parsed).scheme) > 0;
}

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && ((year % 4 == 0 && year % 100 != 0) || year % 400 == 0)) return 29;
  return kDays[month - 1];
}

// Coarse case classification of a code point; 0 = not a cased letter.
int letter_case(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return 1;
  if (cp >= 'a' && cp <= 'z') return -1;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return 1;
  if (cp >= 0xDF && cp <= 0xFF && cp != 0xF7) return -1;
  if (cp >= 0x100 && cp <= 0x17F) return (cp % 2 == 0) ? 1 : -1;
  if (cp >= 0x391 && cp <= 0x3A9) return 1;
  if (cp >= 0x3B1 && cp <= 0x3C9) return -1;
  if (cp >= 0x410 && cp <= 0x42F) return 1;
  if (cp >= 0x430 && cp <= 0x44F) return -1;
  return 0;
}

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : 4;
    char32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (std::size_t k = 1; k < len && i + k < s.size(); ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string agent_name_key(std::string_view item) {
  std::string_view name = item;
  if (auto open = item.rfind('['); open != std::string_view::npos && !item.empty() && item.back() == ']') {
    name = item.substr(0, open);
  }
  std::string key = collapse_whitespace(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return key;
}

}  // namespace

bool is_well_formed_date(std::string_view value) {
  static const std::regex re(R"(^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(value.begin(), value.end(), m, re)) return false;
  const int year = std::stoi(m[1].str());
  if (!m[2].matched) return true;
  const int month = std::stoi(m[2].str());
  if (month < 1 || month > 12) return false;
  if (!m[3].matched) return true;
  const int day = std::stoi(m[3].str());
  return day >= 1 && day <= days_in_month(year, month);
}

bool is_well_formed_page(std::string_view value) {
  static const std::regex re(R"(^[A-Za-z0-9]+-[A-Za-z0-9]+$)");
  return std::regex_match(value.begin(), value.end(), re);
}

bool is_well_formed_agent_item(std::string_view item) {
  if (item.empty() || item != trim(item)) return false;
  const auto opens = std::count(item.begin(), item.end(), '[');
  const auto closes = std::count(item.begin(), item.end(), ']');
  std::string_view name = item;
  if (opens != 0 || closes != 0) {
    if (opens != 1 || closes != 1 || item.back() != ']') return false;
    const auto open = item.find('[');
    if (open < 2 || item[open - 1] != ' ' || item[open - 2] == ' ') return false;
    name = item.substr(0, open - 1);
    const auto ids = item.substr(open + 1, item.size() - open - 2);
    if (ids.empty() || ids.front() == ' ' || ids.back() == ' ' || ids.find("  ") != std::string_view::npos) {
      return false;
    }
    if (ids.find_first_of("\t\r\n") != std::string_view::npos) return false;
  }
  if (trim(name).empty() || name.find(';') != std::string_view::npos) return false;
  if (name.substr(0, 2) == ", " || name.front() == ',') return false;
  return true;
}

bool is_all_uppercase_title(std::string_view title) {
  bool has_letter = false;
  for (char32_t cp : decode_utf8(title)) {
    const int c = letter_case(cp);
    if (c < 0) return false;
    if (c > 0) has_letter = true;
  }
  return has_letter;
}

std::vector<ValidationError> check_id_wellformedness(const Cell& cell, const RuleConfig& config) {
  std::vector<ValidationError> out;
  switch (field_role(cell.field)) {
    case FieldRole::Identifiers:
      for (const auto& item : cell.items) {
        if (!id_well_formed(item.raw, config.br_schemes)) out.push_back(item_error("br_id_format", cell, item.index));
      }
      break;
    case FieldRole::Agents:
    case FieldRole::Venue: {
      const bool venue = field_role(cell.field) == FieldRole::Venue;
      const auto& allowed = venue ? config.br_schemes : config.ra_schemes;
      const char* label = venue ? "br_id_format" : "ra_id_format";
      for (const auto& item : cell.items) {
        if (!is_well_formed_agent_item(item.raw)) continue;
        for (const auto& id : bracketed_ids(item.raw)) {
          if (!id_well_formed(id, allowed)) out.push_back(item_error(label, cell, item.index));
        }
      }
      break;
    }
    case FieldRole::Single:
      break;
  }
  return out;
}

std::vector<ValidationError> check_date_wellformedness(const Cell& cell) {
  std::vector<ValidationError> out;
  for (const auto& item : cell.items) {
    if (!is_well_formed_date(item.raw)) out.push_back(item_error("date_format", cell, item.index));
  }
  return out;
}

std::vector<ValidationError> check_page_format(const Cell& cell) {
  std::vector<ValidationError> out;
  for (const auto& item : cell.items) {
    if (!is_well_formed_page(item.raw)) out.push_back(item_error("page_format", cell, item.index));
  }
  return out;
}

std::vector<ValidationError> check_people_item_format(const Cell& cell) {
  std::vector<ValidationError> out;
  for (const auto& item : cell.items) {
    if (!is_well_formed_agent_item(item.raw)) out.push_back(item_error("people_item_format", cell, item.index));
  }
  return out;
}

std::vector<ValidationError> check_venue_format(const Cell& cell) {
  std::vector<ValidationError> out;
  for (const auto& item : cell.items) {
    if (!is_well_formed_agent_item(item.raw)) out.push_back(item_error("venue_format", cell, item.index));
  }
  return out;
}

std::vector<ValidationError> check_uppercase_title(const Cell& cell) {
  std::vector<ValidationError> out;
  for (const auto& item : cell.items) {
    if (is_all_uppercase_title(item.raw)) out.push_back(item_error("uppercase_title", cell, item.index));
  }
  return out;
}

std::vector<ValidationError> check_duplicates(const TableDocument& document) {
  std::vector<ValidationError> out;
  const auto& rows = document.rows();

  if (document.kind() == TableKind::Meta) {
    DisjointSets sets(rows.size());
    std::map<std::string, std::size_t> first_row_with;
    for (const auto& row : rows) {
      const Cell* ids = row.find("id");
      for (const auto& item : ids->items) {
        auto parsed = parse_id_item(item.raw);
        if (!std::holds_alternative<Component>(parsed)) continue;
        const auto& c = std::get<Component>(parsed);
        auto [it, inserted] = first_row_with.try_emplace(identifier_key(c.scheme, c.value), row.index);
        if (!inserted) sets.unite(it->second, row.index);
      }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (const auto& row : rows) groups[sets.find(row.index)].push_back(row.index);
    for (const auto& [root, members] : groups) {
      if (members.size() < 2) continue;
      PositionTable table;
      for (auto r : members) {
        const Cell* ids = rows[r].find("id");
        add_position(table, r, "id");
        for (const auto& item : ids->items) add_position(table, r, "id", item.index);
      }
      out.push_back(make_error("duplicate_br", kLevel, LocatedIn::Row, std::move(table)));
    }
  }

  for (const auto& row : rows) {
    for (const auto& cell : row.cells) {
      if (field_role(cell.field) != FieldRole::Agents || cell.items.size() < 2) continue;
      DisjointSets sets(cell.items.size());
      std::map<std::string, std::size_t> first_with_key;
      for (const auto& item : cell.items) {
        if (!is_well_formed_agent_item(item.raw)) continue;
        std::vector<std::string> keys{"name:" + agent_name_key(item.raw)};
        for (const auto& id : bracketed_ids(item.raw)) {
          auto parsed = parse_id_item(id);
          if (!std::holds_alternative<Component>(parsed)) continue;
          const auto& c = std::get<Component>(parsed);
          keys.push_back("id:" + identifier_key(c.scheme, c.value));
        }
        for (const auto& key : keys) {
          auto [it, inserted] = first_with_key.try_emplace(key, item.index);
          if (!inserted) sets.unite(it->second, item.index);
        }
      }
      std::map<std::size_t, std::vector<std::size_t>> groups;
      for (const auto& item : cell.items) {
        if (is_well_formed_agent_item(item.raw)) groups[sets.find(item.index)].push_back(item.index);
      }
      for (const auto& [root, members] : groups) {
        if (members.size() < 2) continue;
        PositionTable table;
        for (auto i : members) add_position(table, row.index, cell.field, i);
        out.push_back(make_error("duplicate_ra", kLevel, LocatedIn::Item, std::move(table)));
      }
    }
  }
  return out;
}

std::vector<ValidationError> check_required_and_vocab(const Row& row, const RuleConfig& config) {
  std::vector<ValidationError> out;
  const Cell* id = row.find("id");
  const Cell* title = row.find("title");
  if (id != nullptr && title != nullptr && id->items.empty() && title->items.empty()) {
    PositionTable table;
    add_position(table, row.index, "id");
    add_position(table, row.index, "title");
    out.push_back(make_error("required_field", kLevel, LocatedIn::Field, std::move(table)));
  }
  if (const Cell* type = row.find("type"); type != nullptr) {
    for (const auto& item : type->items) {
      if (config.type_vocabulary.count(item.raw) == 0) out.push_back(item_error("type_vocab", *type, item.index));
    }
  }
  return out;
}

std::vector<ValidationError> check_cits_required(const Row& row) {
  std::vector<ValidationError> out;
  for (const char* field : {"citing_id", "cited_id"}) {
    const Cell* cell = row.find(field);
    if (cell != nullptr && cell->items.empty()) {
      PositionTable table;
      add_position(table, row.index, field);
      out.push_back(make_error("required_field", kLevel, LocatedIn::Field, std::move(table)));
    }
  }
  return out;
}

std::vector<ValidationError> run_wellformedness(const TableDocument& document, const RuleConfig& config) {
  std::vector<ValidationError> out;
  auto append = [&out](std::vector<ValidationError> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  for (const auto& row : document.rows()) {
    for (const auto& cell : row.cells) {
      switch (field_role(cell.field)) {
        case FieldRole::Identifiers:
          append(check_id_wellformedness(cell, config));
          break;
        case FieldRole::Agents:
          append(check_people_item_format(cell));
          append(check_id_wellformedness(cell, config));
          break;
        case FieldRole::Venue:
          append(check_venue_format(cell));
          append(check_id_wellformedness(cell, config));
          break;
        case FieldRole::Single:
          if (cell.field == "pub_date" || cell.field == "citing_publication_date" ||
              cell.field == "cited_publication_date") {
            append(check_date_wellformedness(cell));
          } else if (cell.field == "page") {
            append(check_page_format(cell));
          } else if (cell.field == "title") {
            append(check_uppercase_title(cell));
          }
          break;
      }
    }
    if (document.kind() == TableKind::Meta) {
      append(check_required_and_vocab(row, config));
    } else {
      append(check_cits_required(row));
    }
  }
  append(check_duplicates(document));
  return out;
}

}  // namespace bibcheck
