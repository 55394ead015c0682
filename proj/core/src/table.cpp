#include "bibcheck/table.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace bibcheck {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  const auto n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

std::vector<std::string> split_outside_brackets(std::string_view text, bool on_semicolon) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '[') {
      ++depth;
    } else if (c == ']') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      if (on_semicolon && c == ';' && i + 1 < text.size() && text[i + 1] == ' ') {
        out.emplace_back(trim(text.substr(start, i - start)));
        i += 2;
        start = i;
        continue;
      }
      if (!on_semicolon && is_space(c)) {
        if (i > start) out.emplace_back(text.substr(start, i - start));
        ++i;
        start = i;
        continue;
      }
    }
    ++i;
  }
  if (on_semicolon) {
    out.emplace_back(trim(text.substr(start)));
  } else if (start < text.size()) {
    out.emplace_back(text.substr(start));
  }
  return out;
}

std::vector<std::string> split_spaces(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const auto start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

ComponentKind single_component_kind(std::string_view field) {
  if (field == "title") return ComponentKind::TitleValue;
  if (field == "page") return ComponentKind::PageRange;
  if (field == "type") return ComponentKind::TypeValue;
  if (field == "volume") return ComponentKind::VolumeValue;
  if (field == "issue") return ComponentKind::IssueValue;
  return ComponentKind::DateValue;
}

Item build_item(std::size_t index, std::string raw, std::string_view field, FieldRole role) {
  Item item;
  switch (role) {
    case FieldRole::Identifiers: {
      item.raw = std::move(raw);
      if (auto parsed = parse_id_item(item.raw); std::holds_alternative<Component>(parsed)) {
        item.components.push_back(std::get<Component>(std::move(parsed)));
      }
      break;
    }
    case FieldRole::Agents:
    case FieldRole::Venue:
      item = parse_agent_item(raw);
      break;
    case FieldRole::Single:
      item.components.push_back({single_component_kind(field), raw, {}});
      item.raw = std::move(raw);
      break;
  }
  item.index = index;
  return item;
}

}  // namespace

std::string_view to_string(TableKind kind) { return kind == TableKind::Meta ? "meta" : "cits"; }

std::optional<TableKind> table_kind_from_string(std::string_view name) {
  if (name == "meta") return TableKind::Meta;
  if (name == "cits") return TableKind::Cits;
  return std::nullopt;
}

const std::vector<std::string>& meta_header() {
  static const std::vector<std::string> header{"id",     "title", "author", "pub_date", "venue",  "volume",
                                               "issue",  "page",  "type",   "publisher", "editor"};
  return header;
}

const std::vector<std::string>& cits_header() {
  static const std::vector<std::string> header{"citing_id", "citing_publication_date", "cited_id",
                                               "cited_publication_date"};
  return header;
}

FieldRole field_role(std::string_view field) {
  if (field == "id" || field == "citing_id" || field == "cited_id") return FieldRole::Identifiers;
  if (field == "author" || field == "editor" || field == "publisher") return FieldRole::Agents;
  if (field == "venue") return FieldRole::Venue;
  return FieldRole::Single;
}

UnknownTableType::UnknownTableType(std::vector<std::string> missing, std::vector<std::string> extra)
    : TableError([&] {
        std::string msg = "unknown table type: header matches neither META-CSV nor CITS-CSV";
        auto join = [](const std::vector<std::string>& v) {
          std::string s;
          for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
          return s;
        };
        if (!missing.empty()) msg += "; missing columns: " + join(missing);
        if (!extra.empty()) msg += "; unexpected columns: " + join(extra);
        return msg;
      }()),
      missing_(std::move(missing)),
      extra_(std::move(extra)) {}

const Cell* Row::find(std::string_view field) const {
  for (const auto& c : cells) {
    if (c.field == field) return &c;
  }
  return nullptr;
}

TableDocument::TableDocument(TableKind kind, std::vector<std::string> header, std::vector<Row> rows)
    : kind_(kind), header_(std::move(header)), rows_(std::move(rows)) {}

std::optional<std::size_t> TableDocument::column(std::string_view field) const {
  auto it = std::find(header_.begin(), header_.end(), field);
  if (it == header_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header_.begin());
}

const Cell* TableDocument::find_cell(std::size_t row, std::string_view field) const {
  if (row >= rows_.size()) return nullptr;
  auto col = column(field);
  if (!col) return nullptr;
  return &rows_[row].cells[*col];
}

const Cell& TableDocument::cell(std::size_t row, std::string_view field) const {
  const Cell* c = find_cell(row, field);
  if (c == nullptr) throw std::out_of_range("no cell at row " + std::to_string(row) + ", field " + std::string(field));
  return *c;
}

TableKind detect_table_type(std::span<const std::string> header) {
  const std::set<std::string> given(header.begin(), header.end());
  auto compare = [&](const std::vector<std::string>& expected, std::vector<std::string>& missing,
                     std::vector<std::string>& extra) {
    const std::set<std::string> want(expected.begin(), expected.end());
    std::set_difference(want.begin(), want.end(), given.begin(), given.end(), std::back_inserter(missing));
    std::set_difference(given.begin(), given.end(), want.begin(), want.end(), std::back_inserter(extra));
    return missing.empty() && extra.empty() && given.size() == header.size();
  };
  std::vector<std::string> meta_missing, meta_extra, cits_missing, cits_extra;
  if (compare(meta_header(), meta_missing, meta_extra)) return TableKind::Meta;
  if (compare(cits_header(), cits_missing, cits_extra)) return TableKind::Cits;
  // Report against whichever set the header resembles more.
  const auto meta_overlap = meta_header().size() - meta_missing.size();
  const auto cits_overlap = cits_header().size() - cits_missing.size();
  if (cits_overlap > meta_overlap) throw UnknownTableType(std::move(cits_missing), std::move(cits_extra));
  throw UnknownTableType(std::move(meta_missing), std::move(meta_extra));
}

std::vector<std::vector<std::string>> read_csv_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    if (record_has_content || !record.empty() || !field.empty() || field_was_quoted) {
      end_field();
      records.push_back(std::move(record));
    }
    record.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) throw MalformedCsv("stray quote inside unquoted field on line " + std::to_string(line));
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field += c;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (field_was_quoted) {
          throw MalformedCsv("unexpected character after closing quote on line " + std::to_string(line));
        }
        field += c;
        record_has_content = true;
    }
  }
  if (in_quotes) throw MalformedCsv("unterminated quoted field starting before line " + std::to_string(line));
  end_record();
  return records;
}

std::string write_csv_record(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  return out;
}

TableDocument parse_table(std::string_view bytes) {
  if (!is_valid_utf8(bytes)) throw DecodeError("input is not valid UTF-8");
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);

  auto records = read_csv_records(bytes);
  if (records.empty()) throw MalformedCsv("missing header row");

  std::vector<std::string> header;
  header.reserve(records.front().size());
  for (const auto& name : records.front()) header.emplace_back(trim(name));
  const TableKind kind = detect_table_type(header);

  std::vector<Row> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& record = records[r];
    if (record.size() != header.size()) {
      throw MalformedCsv("row " + std::to_string(r - 1) + " has " + std::to_string(record.size()) +
                         " cells, header has " + std::to_string(header.size()));
    }
    Row row;
    row.index = r - 1;
    row.cells.reserve(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      Cell cell;
      cell.row_index = row.index;
      cell.field = header[c];
      cell.raw = std::move(record[c]);
      const auto role = field_role(cell.field);
      auto pieces = split_items(cell.raw, cell.field);
      cell.items.reserve(pieces.size());
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        cell.items.push_back(build_item(k, std::move(pieces[k]), cell.field, role));
      }
      row.cells.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return TableDocument(kind, std::move(header), std::move(rows));
}

TableDocument load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

std::vector<std::string> split_items(std::string_view cell_raw, std::string_view field) {
  const auto text = trim(cell_raw);
  if (text.empty()) return {};
  switch (field_role(field)) {
    case FieldRole::Identifiers:
      return split_outside_brackets(text, false);
    case FieldRole::Agents:
    case FieldRole::Venue:
      return split_outside_brackets(text, true);
    case FieldRole::Single:
      break;
  }
  return {std::string(text)};
}

std::vector<std::string> bracketed_ids(std::string_view item_raw) {
  const auto text = trim(item_raw);
  if (text.empty() || text.back() != ']') return {};
  const auto open = text.rfind('[');
  if (open == std::string_view::npos) return {};
  return split_spaces(text.substr(open + 1, text.size() - open - 2));
}

Item parse_agent_item(std::string_view item_raw) {
  Item item;
  const auto text = trim(item_raw);
  item.raw = std::string(text);

  std::string_view name = text;
  if (!text.empty() && text.back() == ']') {
    if (const auto open = text.rfind('['); open != std::string_view::npos) {
      name = trim(text.substr(0, open));
      for (const auto& id : bracketed_ids(text)) {
        if (auto parsed = parse_id_item(id); std::holds_alternative<Component>(parsed)) {
          item.components.push_back(std::get<Component>(std::move(parsed)));
        }
      }
    }
  }

  std::vector<Component> names;
  if (const auto comma = name.find(", "); comma != std::string_view::npos) {
    names.push_back({ComponentKind::FamilyName, std::string(trim(name.substr(0, comma))), {}});
    if (auto given = trim(name.substr(comma + 2)); !given.empty()) {
      names.push_back({ComponentKind::GivenName, std::string(given), {}});
    }
  } else if (!name.empty()) {
    names.push_back({ComponentKind::PlainName, std::string(name), {}});
  }
  item.components.insert(item.components.begin(), names.begin(), names.end());
  return item;
}

std::variant<Component, IdParseError> parse_id_item(std::string_view item_raw) {
  const auto text = trim(item_raw);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return IdParseError::MissingSchemeSeparator;
  if (colon == 0) return IdParseError::EmptyScheme;
  if (colon + 1 == text.size()) return IdParseError::EmptyValue;
  std::string scheme(text.substr(0, colon));
  std::transform(scheme.begin(), scheme.end(), scheme.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return Component{ComponentKind::Identifier, std::string(text.substr(colon + 1)), std::move(scheme)};
}

std::string identifier_key(std::string_view scheme, std::string_view value) {
  std::string key(scheme);
  key += ':';
  if (scheme == "doi") {
    for (char c : value) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  } else {
    key += value;
  }
  return key;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(text)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace bibcheck
