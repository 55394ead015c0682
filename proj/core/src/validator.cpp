#include "bibcheck/validator.hpp"

#include "bibcheck/id_syntax.hpp"
#include "bibcheck/item_status.hpp"
#include "bibcheck/semantics.hpp"
#include "bibcheck/wellformedness.hpp"

namespace bibcheck {

namespace {

struct Outcome {
  ValidationReport report;
  ItemStatus status;
};

void append(std::vector<ValidationError>& out, std::vector<ValidationError> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

Outcome run_levels(const TableDocument& document, const ValidateOptions& options, std::string input_path) {
  if (options.expected_kind && *options.expected_kind != document.kind()) {
    throw TableKindMismatch(*options.expected_kind, document.kind());
  }
  Outcome o;
  auto& report = o.report;
  report.input_path = std::move(input_path);
  report.table_kind = document.kind();
  report.started_at = Clock::now();

  const bool offline = options.offline || options.config.offline;
  auto resolver = options.resolver;
  if (!resolver && !offline) resolver = std::make_shared<HttpResolver>(options.config.resolvers);
  LookupCache scratch;
  LookupCache& cache = options.cache != nullptr ? *options.cache : scratch;

  auto wf = run_wellformedness(document, options.config);
  for (const auto& e : wf) o.status.record(e);
  append(report.errors, std::move(wf));

  std::vector<ItemRef> failed;
  append(report.errors, run_external_syntax(document, o.status, &failed));
  for (const auto& ref : failed) o.status.mark(ref, ValidationLevel::ExternalSyntax);

  append(report.errors, run_existence(document, o.status, cache, resolver.get(), options.limits, offline));
  append(report.errors, run_semantics(document, options.config, o.status));

  report.levels_run = {ValidationLevel::Wellformedness, ValidationLevel::ExternalSyntax, ValidationLevel::Existence,
                       ValidationLevel::Semantics};
  sort_canonically(report.errors, document.header());
  report.finished_at = Clock::now();
  return o;
}

}  // namespace

TableKindMismatch::TableKindMismatch(TableKind expected, TableKind actual)
    : TableError("expected a " + std::string(to_string(expected)) + " table but the header describes a " +
                 std::string(to_string(actual)) + " table") {}

ValidationReport validate_document(const TableDocument& document, const ValidateOptions& options,
                                   std::string input_path) {
  return run_levels(document, options, std::move(input_path)).report;
}

ValidationReport validate_document(const std::filesystem::path& path, const ValidateOptions& options) {
  return validate_document(load_table(path), options, path.string());
}

PairReport validate_pair(const TableDocument& meta, const TableDocument& cits, const ValidateOptions& options) {
  auto meta_options = options;
  meta_options.expected_kind = TableKind::Meta;
  auto cits_options = options;
  cits_options.expected_kind = TableKind::Cits;

  auto m = run_levels(meta, meta_options, {});
  auto c = run_levels(cits, cits_options, {});
  PairReport pair{std::move(m.report), std::move(c.report), cross_validate(meta, cits, m.status, c.status)};
  sort_canonically(pair.cross, cits.header(), meta.header());
  return pair;
}

PairReport validate_pair(const std::filesystem::path& meta_path, const std::filesystem::path& cits_path,
                         const ValidateOptions& options) {
  auto pair = validate_pair(load_table(meta_path), load_table(cits_path), options);
  pair.meta.input_path = meta_path.string();
  pair.cits.input_path = cits_path.string();
  return pair;
}

}  // namespace bibcheck
