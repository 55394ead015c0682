#include "bibcheck/report.hpp"

#include <algorithm>
#include <ctime>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "html_text.hpp"
#include "json.hpp"

namespace bibcheck {

using ojson = nlohmann::ordered_json;

std::string_view to_string(ValidationLevel level) {
  switch (level) {
    case ValidationLevel::Wellformedness: return "csv_wellformedness";
    case ValidationLevel::ExternalSyntax: return "external_syntax";
    case ValidationLevel::Existence: return "existence";
    case ValidationLevel::Semantics: return "semantics";
  }
  return "";
}

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string_view to_string(LocatedIn where) {
  switch (where) {
    case LocatedIn::Item: return "item";
    case LocatedIn::Field: return "field";
    case LocatedIn::Row: return "row";
  }
  return "";
}

std::optional<ValidationLevel> level_from_string(std::string_view name) {
  for (auto l : {ValidationLevel::Wellformedness, ValidationLevel::ExternalSyntax, ValidationLevel::Existence,
                 ValidationLevel::Semantics}) {
    if (to_string(l) == name) return l;
  }
  return std::nullopt;
}

std::optional<Severity> severity_from_string(std::string_view name) {
  if (name == "error") return Severity::Error;
  if (name == "warning") return Severity::Warning;
  return std::nullopt;
}

std::optional<LocatedIn> located_in_from_string(std::string_view name) {
  for (auto w : {LocatedIn::Item, LocatedIn::Field, LocatedIn::Row}) {
    if (to_string(w) == name) return w;
  }
  return std::nullopt;
}

void add_position(PositionTable& table, std::size_t row, std::string_view field, std::optional<std::size_t> item) {
  auto& fields = table[row];
  auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == field; });
  if (it == fields.end()) {
    fields.emplace_back(std::string(field), std::vector<std::size_t>{});
    it = std::prev(fields.end());
  }
  if (item && std::find(it->second.begin(), it->second.end(), *item) == it->second.end()) {
    it->second.push_back(*item);
  }
}

namespace {

using detail::html_escape;
using detail::script_safe;

std::size_t column_rank(std::span<const std::string> header, std::string_view field) {
  auto it = std::find(header.begin(), header.end(), field);
  return static_cast<std::size_t>(it - header.begin());
}

// (row, column, item); item is -1 when the field lists no items.
using SortKey = std::tuple<std::size_t, std::size_t, long long>;

SortKey first_location(const PositionTable& table, std::span<const std::string> header) {
  if (table.empty()) {
    return {std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max(), -1};
  }
  const auto& [row, fields] = *table.begin();
  std::size_t best_col = std::numeric_limits<std::size_t>::max();
  long long best_item = -1;
  for (const auto& [field, items] : fields) {
    const auto col = column_rank(header, field);
    if (col < best_col) {
      best_col = col;
      best_item = items.empty() ? -1 : static_cast<long long>(*std::min_element(items.begin(), items.end()));
    }
  }
  return {row, best_col, best_item};
}

ojson table_to_json(const PositionTable& table) {
  ojson out = ojson::object();
  for (const auto& [row, fields] : table) {
    ojson f = ojson::object();
    for (const auto& [field, items] : fields) f[field] = items;
    out[std::to_string(row)] = std::move(f);
  }
  return out;
}

ojson error_to_json(const ValidationError& e) {
  ojson position = ojson::object();
  position["located_in"] = to_string(e.position.located_in);
  position["table"] = table_to_json(e.position.table);
  if (!e.position.meta_table.empty()) position["meta_table"] = table_to_json(e.position.meta_table);

  ojson obj = ojson::object();
  obj["validation_level"] = to_string(e.level);
  obj["error_type"] = to_string(e.severity);
  obj["error_label"] = e.label;
  obj["valid"] = false;
  obj["message"] = e.message;
  obj["position"] = std::move(position);
  return obj;
}

PositionTable table_from_json(const ojson& j) {
  if (!j.is_object()) throw ReportSchemaError("position table must be an object");
  PositionTable table;
  for (const auto& [row_key, fields] : j.items()) {
    std::size_t row = 0;
    try {
      std::size_t used = 0;
      row = std::stoul(row_key, &used);
      if (used != row_key.size()) throw std::invalid_argument(row_key);
    } catch (const std::exception&) {
      throw ReportSchemaError("row key is not an integer: " + row_key);
    }
    if (!fields.is_object()) throw ReportSchemaError("row entry must be an object");
    auto& entry = table[row];
    for (const auto& [field, items] : fields.items()) {
      if (!items.is_array()) throw ReportSchemaError("item list must be an array");
      std::vector<std::size_t> idx;
      for (const auto& i : items) {
        if (!i.is_number_unsigned()) throw ReportSchemaError("item index must be a non-negative integer");
        idx.push_back(i.get<std::size_t>());
      }
      entry.emplace_back(field, std::move(idx));
    }
  }
  return table;
}

std::string describe_table(const PositionTable& table, std::string_view prefix) {
  std::string out;
  for (const auto& [row, fields] : table) {
    if (!out.empty()) out += "; ";
    out += fmt::format("{}row {}:", prefix, row);
    bool first = true;
    for (const auto& [field, items] : fields) {
      out += first ? " " : ", ";
      first = false;
      out += field;
      if (!items.empty()) out += fmt::format("[{}]", fmt::join(items, ","));
    }
  }
  return out;
}

constexpr std::string_view kReportStyle = R"css(
body { font-family: sans-serif; margin: 1.5em; color: #222; }
table.report-table { border-collapse: collapse; font-size: 0.9em; }
table.report-table th, table.report-table td { border: 1px solid #bbb; padding: 4px 6px; vertical-align: top; }
table.report-table th { background: #eee; }
td.row-index { color: #666; text-align: right; }
.error-span { text-decoration: underline wavy #c0392b; }
.error-span[data-severity="warning"] { text-decoration-color: #d68910; }
.error-span.highlighted { background: #fde2a0; }
.error-marker { display: inline-block; width: 0.8em; height: 0.8em; margin-left: 3px; padding: 0;
  border: 1px solid #922; background: #e74c3c; cursor: pointer; vertical-align: middle; }
.error-marker[data-severity="warning"] { border-color: #a66; background: #f5b041; }
.no-errors { color: #1e8449; font-weight: bold; }
)css";

}  // namespace

void canonicalize(PositionTable& table, std::span<const std::string> header) {
  for (auto& [row, fields] : table) {
    for (auto& [field, items] : fields) {
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
    }
    std::stable_sort(fields.begin(), fields.end(), [&](const auto& a, const auto& b) {
      return column_rank(header, a.first) < column_rank(header, b.first);
    });
  }
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(), [](const auto& e) { return e.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const { return errors.size() - error_count(); }

void sort_canonically(std::vector<ValidationError>& errors, std::span<const std::string> header,
                      std::span<const std::string> meta_header) {
  for (auto& e : errors) {
    canonicalize(e.position.table, header);
    canonicalize(e.position.meta_table, meta_header);
  }
  std::vector<std::pair<std::tuple<SortKey, SortKey, std::string, std::string>, ValidationError>> keyed;
  keyed.reserve(errors.size());
  for (auto& e : errors) {
    auto key = std::make_tuple(first_location(e.position.table, header),
                               first_location(e.position.meta_table, meta_header), e.label,
                               error_to_json(e).dump());
    keyed.emplace_back(std::move(key), std::move(e));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  errors.clear();
  for (auto& [key, e] : keyed) errors.push_back(std::move(e));
}

std::string format_timestamp(Clock::time_point when) {
  const std::time_t t = Clock::to_time_t(when);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string emit_json(std::span<const ValidationError> errors) {
  ojson list = ojson::array();
  for (const auto& e : errors) list.push_back(error_to_json(e));
  return list.dump(4) + "\n";
}

std::string emit_json(const ValidationReport& report) { return emit_json(std::span(report.errors)); }

std::vector<ValidationError> parse_errors_json(std::string_view json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const ojson::parse_error& e) {
    throw ReportSchemaError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ReportSchemaError("report must be a JSON list of error objects");

  std::vector<ValidationError> out;
  out.reserve(doc.size());
  for (const auto& obj : doc) {
    if (!obj.is_object()) throw ReportSchemaError("error entry must be an object");
    for (const char* key : {"validation_level", "error_type", "error_label", "valid", "message", "position"}) {
      if (!obj.contains(key)) throw ReportSchemaError(std::string("error entry lacks key '") + key + "'");
    }
    auto get_string = [&](const char* key) {
      if (!obj[key].is_string()) throw ReportSchemaError(std::string("'") + key + "' must be a string");
      return obj[key].get<std::string>();
    };
    ValidationError e;
    auto level = level_from_string(get_string("validation_level"));
    auto severity = severity_from_string(get_string("error_type"));
    if (!level) throw ReportSchemaError("unknown validation_level");
    if (!severity) throw ReportSchemaError("unknown error_type");
    if (obj["valid"] != false) throw ReportSchemaError("'valid' must be false");
    e.level = *level;
    e.severity = *severity;
    e.label = get_string("error_label");
    e.message = get_string("message");

    const auto& pos = obj["position"];
    if (!pos.is_object() || !pos.contains("located_in") || !pos.contains("table") || !pos["located_in"].is_string()) {
      throw ReportSchemaError("malformed position");
    }
    auto where = located_in_from_string(pos["located_in"].get<std::string>());
    if (!where) throw ReportSchemaError("unknown located_in");
    e.position.located_in = *where;
    e.position.table = table_from_json(pos["table"]);
    if (pos.contains("meta_table")) e.position.meta_table = table_from_json(pos["meta_table"]);
    out.push_back(std::move(e));
  }
  return out;
}

std::string emit_run_metadata(const ValidationReport& report) {
  ojson meta = ojson::object();
  meta["input_path"] = report.input_path;
  meta["table_kind"] = to_string(report.table_kind);
  meta["started_at"] = format_timestamp(report.started_at);
  meta["finished_at"] = format_timestamp(report.finished_at);
  ojson levels = ojson::array();
  for (auto l : report.levels_run) levels.push_back(to_string(l));
  meta["levels_run"] = std::move(levels);
  meta["error_count"] = report.error_count();
  meta["warning_count"] = report.warning_count();
  return meta.dump(4) + "\n";
}

std::string emit_txt_summary(std::span<const ValidationError> errors) {
  if (errors.empty()) return "No errors detected.\n";

  struct Group {
    Severity severity;
    std::string message;
    std::size_t count = 0;
  };
  std::map<std::string, Group> groups;
  for (const auto& e : errors) {
    auto [it, inserted] = groups.try_emplace(e.label, Group{e.severity, e.message, 0});
    ++it->second.count;
  }
  std::vector<std::pair<std::string, Group>> ordered(groups.begin(), groups.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second.severity != b.second.severity) return a.second.severity == Severity::Error;
    return a.second.count > b.second.count;
  });

  std::string out;
  const auto n_errors = static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(), [](const auto& e) { return e.severity == Severity::Error; }));
  out += fmt::format("{} finding(s): {} error(s), {} warning(s)\n\n", errors.size(), n_errors,
                     errors.size() - n_errors);
  for (const auto& [label, g] : ordered) {
    out += fmt::format("{}  {}  {}\n", label, to_string(g.severity), g.count);
    out += fmt::format("    {}\n", g.message);
  }
  out += "\nLocations:\n";
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const auto& e = errors[i];
    std::string where = describe_table(e.position.table, "");
    if (!e.position.meta_table.empty()) {
      where += (where.empty() ? "" : "; ") + describe_table(e.position.meta_table, "meta ");
    }
    out += fmt::format("[{}] {} ({}, {}, {}) {}\n", i, e.label, to_string(e.severity), to_string(e.level),
                       to_string(e.position.located_in), where);
  }
  return out;
}

std::string emit_txt_summary(const ValidationReport& report) { return emit_txt_summary(std::span(report.errors)); }

std::string_view stub_viewer_asset() {
  return "/* interactive viewer not bundled: markers show their message as a tooltip */\n";
}

std::optional<std::string> find_unresolved_position(std::span<const ValidationError> errors,
                                                    const TableDocument& source) {
  for (std::size_t i = 0; i < errors.size(); ++i) {
    for (const auto& [row, fields] : errors[i].position.table) {
      if (row >= source.rows().size()) {
        return fmt::format("error {} ({}) references row {} but the source has {} data rows", i, errors[i].label, row,
                           source.rows().size());
      }
      for (const auto& [field, items] : fields) {
        const Cell* cell = source.find_cell(row, field);
        if (cell == nullptr) {
          return fmt::format("error {} ({}) references unknown field '{}'", i, errors[i].label, field);
        }
        for (auto item : items) {
          if (item >= cell->items.size()) {
            return fmt::format("error {} ({}) references item {} of row {} field '{}' which has {} items", i,
                               errors[i].label, item, row, field, cell->items.size());
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::string emit_html(std::span<const ValidationError> errors, const TableDocument& source,
                      std::string_view viewer_asset) {
  if (auto problem = find_unresolved_position(errors, source)) throw ReportSchemaError(*problem);

  // (row, field) -> indices of the errors touching it, in report order.
  std::map<std::pair<std::size_t, std::string>, std::vector<std::size_t>> touching;
  std::map<std::pair<std::size_t, std::string>, std::vector<std::size_t>> markers_at;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    bool marker_placed = false;
    for (const auto& [row, fields] : errors[i].position.table) {
      for (const auto& [field, items] : fields) {
        touching[{row, field}].push_back(i);
        if (!marker_placed) {
          markers_at[{row, field}].push_back(i);
          marker_placed = true;
        }
      }
    }
  }

  ojson island = ojson::object();
  island["table_kind"] = to_string(source.kind());
  ojson list = ojson::array();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    ojson obj = ojson::object();
    obj["id"] = fmt::format("e{}", i);
    const ojson fields = error_to_json(errors[i]);
    for (const auto& [k, v] : fields.items()) obj[k] = v;
    list.push_back(std::move(obj));
  }
  island["errors"] = std::move(list);

  const auto n_errors = static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(), [](const auto& e) { return e.severity == Severity::Error; }));

  std::string out;
  out += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += fmt::format("<title>Validation report ({})</title>\n", source.kind() == TableKind::Meta ? "META-CSV" : "CITS-CSV");
  out += "<style>";
  out += kReportStyle;
  out += "</style>\n</head>\n<body>\n";
  out += fmt::format("<h1>Validation report ({})</h1>\n", source.kind() == TableKind::Meta ? "META-CSV" : "CITS-CSV");
  out += "<script type=\"application/json\" id=\"report-data\">";
  out += script_safe(island.dump());
  out += "</script>\n";

  if (errors.empty()) {
    out += "<p class=\"no-errors\">No errors detected.</p>\n";
  } else {
    std::vector<std::size_t> rows;
    for (const auto& e : errors) {
      for (const auto& [row, fields] : e.position.table) rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    out += fmt::format("<p class=\"summary\">{} error(s) and {} warning(s) in {} of {} rows.</p>\n", n_errors,
                       errors.size() - n_errors, rows.size(), source.rows().size());
    out += "<table class=\"report-table\">\n<thead><tr><th>row</th>";
    for (const auto& field : source.header()) out += "<th>" + html_escape(field) + "</th>";
    out += "</tr></thead>\n<tbody>\n";

    for (auto row : rows) {
      out += fmt::format("<tr data-row=\"{}\"><td class=\"row-index\">{}</td>", row, row);
      for (const auto& cell : source.rows()[row].cells) {
        const std::string delimiter =
            field_role(cell.field) == FieldRole::Identifiers ? " " : "; ";
        std::string content;
        for (const auto& item : cell.items) {
          if (item.index > 0) content += html_escape(delimiter);
          content += fmt::format("<span class=\"item\" data-item=\"{}\">{}</span>", item.index, html_escape(item.raw));
        }
        const std::pair<std::size_t, std::string> key{row, cell.field};
        if (auto it = touching.find(key); it != touching.end()) {
          // Innermost span belongs to the last error, so wrap in reverse.
          for (auto e = it->second.rbegin(); e != it->second.rend(); ++e) {
            const auto& err = errors[*e];
            std::vector<std::size_t> items;
            for (const auto& [f, idx] : err.position.table.at(row)) {
              if (f == cell.field) items = idx;
            }
            content = fmt::format(
                "<span class=\"error-span\" data-error-id=\"e{}\" data-severity=\"{}\" data-items=\"{}\">{}</span>",
                *e, to_string(err.severity), fmt::join(items, ","), content);
          }
        }
        if (auto it = markers_at.find(key); it != markers_at.end()) {
          for (auto e : it->second) {
            const auto& err = errors[e];
            content += fmt::format(
                "<button type=\"button\" class=\"error-marker\" data-error-id=\"e{}\" data-severity=\"{}\" "
                "title=\"{}\" aria-label=\"{}\"></button>",
                e, to_string(err.severity), html_escape(err.message), html_escape(err.label));
          }
        }
        out += fmt::format("<td data-field=\"{}\">{}</td>", html_escape(cell.field), content);
      }
      out += "</tr>\n";
    }
    out += "</tbody>\n</table>\n";
  }

  out += "<script>\n";
  out += script_safe(viewer_asset);
  out += "\n</script>\n</body>\n</html>\n";
  return out;
}

}  // namespace bibcheck
