#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "bibcheck/id_syntax.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/table.hpp"
#include "bibcheck/validator.hpp"
#include "corpus.hpp"

namespace {

class AlwaysThere : public bibcheck::Resolver {
 public:
  bool supports(std::string_view) const override { return true; }
  bibcheck::RegistryVerdict lookup(const bibcheck::IdentifierRef&) override {
    return {bibcheck::RegistryStatus::Exists, bibcheck::Clock::now(), "bench", {}};
  }
};

void BM_ParseMeta(benchmark::State& state) {
  const auto corpus = testsupport::make_meta_corpus(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bibcheck::parse_table(corpus.csv));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseMeta)->Arg(200)->Arg(2000);

void BM_ValidateMeta(benchmark::State& state) {
  const auto corpus = testsupport::make_meta_corpus(2, static_cast<std::size_t>(state.range(0)));
  const auto doc = bibcheck::parse_table(corpus.csv);
  bibcheck::ValidateOptions options;
  options.resolver = std::make_shared<AlwaysThere>();
  for (auto _ : state) benchmark::DoNotOptimize(bibcheck::validate_document(doc, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ValidateMeta)->Arg(200)->Arg(2000);

void BM_EmitJson(benchmark::State& state) {
  const auto corpus = testsupport::make_meta_corpus(3, 2000);
  bibcheck::ValidateOptions options;
  options.offline = true;
  const auto report = bibcheck::validate_document(bibcheck::parse_table(corpus.csv), options);
  for (auto _ : state) benchmark::DoNotOptimize(bibcheck::emit_json(report));
}
BENCHMARK(BM_EmitJson);

void BM_OrcidChecksum(benchmark::State& state) {
  const std::string orcid = "0000-0002-1825-0097";
  for (auto _ : state) benchmark::DoNotOptimize(bibcheck::orcid_checksum_ok(orcid));
}
BENCHMARK(BM_OrcidChecksum);

}  // namespace

BENCHMARK_MAIN();
