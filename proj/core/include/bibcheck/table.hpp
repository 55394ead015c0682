#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bibcheck {

enum class TableKind { Meta, Cits };

std::string_view to_string(TableKind kind);
std::optional<TableKind> table_kind_from_string(std::string_view name);

/// Column sets, in canonical order.
const std::vector<std::string>& meta_header();
const std::vector<std::string>& cits_header();

/// How the content of a cell is split into items.
enum class FieldRole {
  Identifiers,  // id, citing_id, cited_id: space separated "scheme:value"
  Agents,       // author, editor, publisher: "; " separated "Name [ids]"
  Venue,        // venue: "; " separated "Name [ids]"
  Single,       // everything else holds at most one item
};

FieldRole field_role(std::string_view field);

enum class ComponentKind {
  PlainName,
  GivenName,
  FamilyName,
  Identifier,
  DateValue,
  PageRange,
  TypeValue,
  VolumeValue,
  IssueValue,
  TitleValue,
};

struct Component {
  ComponentKind kind;
  std::string value;
  std::string scheme;  // only set for Identifier
};

struct Item {
  std::size_t index = 0;
  std::string raw;
  std::vector<Component> components;
};

struct Cell {
  std::size_t row_index = 0;
  std::string field;
  std::string raw;
  std::vector<Item> items;
};

struct Row {
  std::size_t index = 0;
  std::vector<Cell> cells;  // header order

  const Cell* find(std::string_view field) const;
};

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public TableError {
 public:
  using TableError::TableError;
};

class MalformedCsv : public TableError {
 public:
  using TableError::TableError;
};

class UnknownTableType : public TableError {
 public:
  UnknownTableType(std::vector<std::string> missing, std::vector<std::string> extra);

  const std::vector<std::string>& missing() const { return missing_; }
  const std::vector<std::string>& extra() const { return extra_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> extra_;
};

/// A parsed META-CSV or CITS-CSV document. Immutable once built.
class TableDocument {
 public:
  TableDocument(TableKind kind, std::vector<std::string> header, std::vector<Row> rows);

  TableKind kind() const { return kind_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }

  std::optional<std::size_t> column(std::string_view field) const;
  const Cell& cell(std::size_t row, std::string_view field) const;
  const Cell* find_cell(std::size_t row, std::string_view field) const;

 private:
  TableKind kind_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

/// Order-insensitive, case-sensitive match of the header against the two
/// known column sets. Throws UnknownTableType listing the closest set's
/// missing and extra columns.
TableKind detect_table_type(std::span<const std::string> header);

/// RFC 4180 style records (comma, double quotes, doubled-quote escapes,
/// LF or CRLF). Physically empty lines are skipped.
std::vector<std::vector<std::string>> read_csv_records(std::string_view text);

std::string write_csv_record(std::span<const std::string> fields);

TableDocument parse_table(std::string_view bytes);
TableDocument load_table(const std::filesystem::path& path);

std::vector<std::string> split_items(std::string_view cell_raw, std::string_view field);

/// Splits "Family, Given [scheme:value ...]" style items. Never fails:
/// structural problems are judged by the wellformedness rules.
Item parse_agent_item(std::string_view item_raw);

enum class IdParseError { MissingSchemeSeparator, EmptyScheme, EmptyValue };

/// "scheme:value" split at the first colon; the scheme is lowercased.
std::variant<Component, IdParseError> parse_id_item(std::string_view item_raw);

/// Identifiers listed between the trailing brackets of an agent or venue
/// item, unparsed. Empty when the item has no bracket block.
std::vector<std::string> bracketed_ids(std::string_view item_raw);

/// Key used to decide when two identifiers denote the same thing. DOIs
/// compare case-insensitively, everything else verbatim.
std::string identifier_key(std::string_view scheme, std::string_view value);

std::string_view trim(std::string_view text);
std::string collapse_whitespace(std::string_view text);

}  // namespace bibcheck
