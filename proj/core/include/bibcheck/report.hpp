#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bibcheck/table.hpp"

namespace bibcheck {

enum class ValidationLevel { Wellformedness, ExternalSyntax, Existence, Semantics };
enum class Severity { Error, Warning };
enum class LocatedIn { Item, Field, Row };

std::string_view to_string(ValidationLevel level);
std::string_view to_string(Severity severity);
std::string_view to_string(LocatedIn where);
std::optional<ValidationLevel> level_from_string(std::string_view name);
std::optional<Severity> severity_from_string(std::string_view name);
std::optional<LocatedIn> located_in_from_string(std::string_view name);

/// Field name -> item indices, kept in header order once canonicalized.
using FieldItems = std::vector<std::pair<std::string, std::vector<std::size_t>>>;
/// Data row index (0-based, header excluded) -> implicated fields.
using PositionTable = std::map<std::size_t, FieldItems>;

void add_position(PositionTable& table, std::size_t row, std::string_view field,
                  std::optional<std::size_t> item = std::nullopt);
void canonicalize(PositionTable& table, std::span<const std::string> header);

struct PositionDescriptor {
  LocatedIn located_in = LocatedIn::Item;
  PositionTable table;
  /// Only used by pair cross-validation findings: the META-CSV side,
  /// while `table` then addresses the CITS-CSV document.
  PositionTable meta_table;

  bool operator==(const PositionDescriptor&) const = default;
};

struct ValidationError {
  ValidationLevel level = ValidationLevel::Wellformedness;
  Severity severity = Severity::Error;
  std::string label;
  std::string message;
  PositionDescriptor position;

  bool operator==(const ValidationError&) const = default;
};

using Clock = std::chrono::system_clock;

struct ValidationReport {
  std::vector<ValidationError> errors;
  std::string input_path;
  TableKind table_kind = TableKind::Meta;
  Clock::time_point started_at{};
  Clock::time_point finished_at{};
  std::vector<ValidationLevel> levels_run;

  std::size_t error_count() const;
  std::size_t warning_count() const;
};

class ReportSchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorts by first row, first field (header order), first item, then label.
/// `meta_header` is only consulted for cross-validation findings.
void sort_canonically(std::vector<ValidationError>& errors, std::span<const std::string> header,
                      std::span<const std::string> meta_header = {});

std::string format_timestamp(Clock::time_point when);

/// JSON list of error objects with the six keys validation_level,
/// error_type, error_label, valid, message, position, in that order.
std::string emit_json(std::span<const ValidationError> errors);
std::string emit_json(const ValidationReport& report);
std::vector<ValidationError> parse_errors_json(std::string_view json_text);

/// Run metadata that does not belong in the error list.
std::string emit_run_metadata(const ValidationReport& report);

std::string emit_txt_summary(std::span<const ValidationError> errors);
std::string emit_txt_summary(const ValidationReport& report);

/// Placeholder for the interactive viewer script when none is bundled.
std::string_view stub_viewer_asset();

/// Self-contained page: embedded JSON data island, a table restricted to
/// the source rows that carry at least one finding, inline style, and the
/// viewer script. Throws ReportSchemaError when a position does not resolve
/// in `source`.
std::string emit_html(std::span<const ValidationError> errors, const TableDocument& source,
                      std::string_view viewer_asset);

/// Checks that every referenced (row, field, item) exists in `source`.
/// Returns a description of the first unresolvable position, if any.
std::optional<std::string> find_unresolved_position(std::span<const ValidationError> errors,
                                                    const TableDocument& source);

}  // namespace bibcheck
