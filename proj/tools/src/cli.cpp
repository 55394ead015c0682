#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bibcheck/existence.hpp"
#include "bibcheck/monitor.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/rules_config.hpp"
#include "bibcheck/table.hpp"
#include "bibcheck/validator.hpp"

namespace bibcheck::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

struct ValidateArgs {
  std::string input;
  std::string meta;
  std::string cits;
  std::string out_dir = ".";
  std::string type = "auto";
  bool offline = false;
  bool no_html = false;
  bool strict_warnings = false;
  std::string config;
  std::string cache_dir;
  std::string viewer;
};

struct MonitorArgs {
  std::string config;
  std::string out_dir = ".";
  bool count = false;
  int timeout = 600;
};

struct RenderArgs {
  std::string report;
  std::string source;
  std::string out;
  std::string viewer;
};

void add_common_flags(CLI::App* cmd, ValidateArgs& a) {
  cmd->add_option("--out-dir", a.out_dir, "Directory for the report files")->capture_default_str();
  cmd->add_flag("--offline", a.offline, "Skip registry lookups; existence is reported as unknown");
  cmd->add_flag("--no-html", a.no_html, "Do not write the HTML report");
  cmd->add_flag("--strict-warnings", a.strict_warnings, "Exit 1 when only warnings are found");
  cmd->add_option("--config", a.config, "Rule configuration file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--cache-dir", a.cache_dir, "Directory of the registry lookup cache");
  cmd->add_option("--viewer", a.viewer, "Script embedded in the HTML report")->check(CLI::ExistingFile);
}

ValidateOptions make_options(const ValidateArgs& a, LookupCache* cache) {
  ValidateOptions options;
  options.config = a.config.empty() ? RuleConfig::defaults() : load_rule_config(a.config);
  apply_environment(options.config);
  options.offline = a.offline;
  options.cache = cache;
  return options;
}

fs::path cache_file(const ValidateArgs& a) {
  return (a.cache_dir.empty() ? default_cache_dir() : fs::path(a.cache_dir)) / "lookups.json";
}

std::string viewer_asset(const std::string& path) {
  return path.empty() ? std::string(stub_viewer_asset()) : read_file(path);
}

void save_cache(const LookupCache& cache, std::ostream& err) {
  try {
    cache.save();
  } catch (const std::exception& e) {
    err << "warning: lookup cache not saved: " << e.what() << '\n';
  }
}

void write_reports(const fs::path& dir, const std::string& prefix, const ValidationReport& report,
                   const TableDocument* source, const std::string& viewer) {
  write_file(dir / (prefix + "report.json"), emit_json(report));
  write_file(dir / (prefix + "report.txt"), emit_txt_summary(report));
  write_file(dir / (prefix + "report.meta.json"), emit_run_metadata(report));
  if (source != nullptr) write_file(dir / (prefix + "report.html"), emit_html(report.errors, *source, viewer));
}

int exit_for(std::size_t errors, std::size_t warnings, bool strict) {
  if (errors > 0 || (strict && warnings > 0)) return kFindings;
  return kClean;
}

void print_summary(std::ostream& out, std::string_view what, std::size_t errors, std::size_t warnings) {
  out << what << ": " << errors << " error(s), " << warnings << " warning(s)\n";
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const auto viewer = viewer_asset(a.viewer);
  LookupCache cache(cache_file(a));
  auto options = make_options(a, &cache);
  if (a.type != "auto") options.expected_kind = table_kind_from_string(a.type);

  const auto document = load_table(a.input);
  const auto report = validate_document(document, options, a.input);
  fs::create_directories(a.out_dir);
  write_reports(a.out_dir, "", report, a.no_html ? nullptr : &document, viewer);
  save_cache(cache, err);

  print_summary(out, a.input, report.error_count(), report.warning_count());
  return exit_for(report.error_count(), report.warning_count(), a.strict_warnings);
}

int cmd_validate_pair(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const auto viewer = viewer_asset(a.viewer);
  LookupCache cache(cache_file(a));
  const auto options = make_options(a, &cache);

  // Both files must parse before anything is validated.
  const auto meta = load_table(a.meta);
  const auto cits = load_table(a.cits);
  auto pair = validate_pair(meta, cits, options);
  pair.meta.input_path = a.meta;
  pair.cits.input_path = a.cits;

  ValidationReport cross;
  cross.errors = pair.cross;
  cross.input_path = a.meta + " + " + a.cits;
  cross.table_kind = TableKind::Cits;
  cross.started_at = pair.meta.started_at;
  cross.finished_at = pair.cits.finished_at;
  cross.levels_run = {ValidationLevel::Semantics};

  fs::create_directories(a.out_dir);
  write_reports(a.out_dir, "meta_", pair.meta, a.no_html ? nullptr : &meta, viewer);
  write_reports(a.out_dir, "cits_", pair.cits, a.no_html ? nullptr : &cits, viewer);
  write_reports(a.out_dir, "cross_", cross, a.no_html ? nullptr : &cits, viewer);
  save_cache(cache, err);

  print_summary(out, a.meta, pair.meta.error_count(), pair.meta.warning_count());
  print_summary(out, a.cits, pair.cits.error_count(), pair.cits.warning_count());
  print_summary(out, "cross-validation", cross.error_count(), cross.warning_count());
  const auto errors = pair.meta.error_count() + pair.cits.error_count() + cross.error_count();
  const auto warnings = pair.meta.warning_count() + pair.cits.warning_count() + cross.warning_count();
  return exit_for(errors, warnings, a.strict_warnings);
}

int cmd_monitor(const MonitorArgs& a, std::ostream& out) {
  auto config = load_monitor_config(a.config);
  apply_monitor_environment(config);
  MonitorOptions options;
  options.timeout = std::chrono::seconds(a.timeout);
  options.run_count = a.count;
  options.config_path = a.config;

  const auto report = run_tests(config, options);
  fs::create_directories(a.out_dir);
  write_file(fs::path(a.out_dir) / "monitor.json", emit_monitor_json(report));
  write_file(fs::path(a.out_dir) / "monitor.html", emit_monitor_html(report));

  const auto failed = report.failed_count();
  const auto indeterminate = report.indeterminate_count();
  out << report.results.size() << " test(s): " << report.results.size() - failed - indeterminate << " passed, "
      << failed << " failed, " << indeterminate << " indeterminate\n";
  if (failed == 0 && indeterminate > 0) {
    out << "notice: " << indeterminate << " test(s) could not be executed; see run.error in monitor.json\n";
  }
  return failed > 0 ? kFindings : kClean;
}

int cmd_render(const RenderArgs& a) {
  const auto errors = parse_errors_json(read_file(a.report));
  const auto source = load_table(a.source);
  const auto html = emit_html(errors, source, viewer_asset(a.viewer));
  if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
  write_file(a.out, html);
  return kClean;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Validate bibliographic metadata and citation tables, and monitor published collections."};
  app.name("bibcheck");
  app.require_subcommand(1);

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Validate one META-CSV or CITS-CSV table");
  v->add_option("--input", validate.input, "Table to validate")->required()->check(CLI::ExistingFile);
  v->add_option("--type", validate.type, "Expected table type")
      ->check(CLI::IsMember({"auto", "meta", "cits"}))
      ->capture_default_str();
  add_common_flags(v, validate);

  ValidateArgs pair;
  auto* p = app.add_subcommand("validate-pair", "Validate a metadata table and its citations together");
  p->add_option("--meta", pair.meta, "META-CSV table")->required()->check(CLI::ExistingFile);
  p->add_option("--cits", pair.cits, "CITS-CSV table")->required()->check(CLI::ExistingFile);
  add_common_flags(p, pair);

  MonitorArgs monitor;
  auto* m = app.add_subcommand("monitor", "Run SPARQL quality tests against a collection endpoint");
  m->add_option("--config", monitor.config, "Monitor configuration (JSON)")->required()->check(CLI::ExistingFile);
  m->add_option("--out-dir", monitor.out_dir, "Directory for monitor.json and monitor.html")->capture_default_str();
  m->add_flag("--count", monitor.count, "Also run count-mode tests");
  m->add_option("--timeout", monitor.timeout, "Per-query timeout in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Rebuild the HTML report from a stored JSON report");
  r->add_option("--report", render.report, "report.json from an earlier run")->required()->check(CLI::ExistingFile);
  r->add_option("--source", render.source, "The table that was validated")->required()->check(CLI::ExistingFile);
  r->add_option("--out", render.out, "HTML file to write")->required();
  r->add_option("--viewer", render.viewer, "Script embedded in the HTML report")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kClean : kFailure;
  }

  try {
    if (*v) return cmd_validate(validate, out, err);
    if (*p) return cmd_validate_pair(pair, out, err);
    if (*m) return cmd_monitor(monitor, out);
    if (*r) return cmd_render(render);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace bibcheck::cli
