#pragma once

#include <chrono>
#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bibcheck/id_syntax.hpp"
#include "bibcheck/item_status.hpp"
#include "bibcheck/report.hpp"
#include "bibcheck/table.hpp"

namespace bibcheck {

enum class RegistryStatus { Exists, NotFound, Unknown };

std::string_view to_string(RegistryStatus status);

struct RegistryVerdict {
  RegistryStatus status = RegistryStatus::Unknown;
  Clock::time_point checked_at{};
  std::string source;  // endpoint identity, or "offline" / "cache"
  std::string reason;  // why the verdict is Unknown
};

struct IdentifierRef {
  std::string scheme;
  std::string value;

  auto operator<=>(const IdentifierRef&) const = default;
};

/// Answers existence questions for one identifier at a time. Implementations
/// must be safe to call from several threads at once.
class Resolver {
 public:
  virtual ~Resolver() = default;

  virtual bool supports(std::string_view scheme) const = 0;
  /// Definitive answers only as Exists / NotFound; transport trouble is
  /// reported as Unknown with a reason, never thrown.
  virtual RegistryVerdict lookup(const IdentifierRef& id) = 0;
  /// Rate-limit bucket for the scheme's endpoint. Empty means unlimited.
  virtual std::string host(std::string_view /*scheme*/) const { return {}; }
};

/// HTTP(S) GET against per-scheme URL templates ("...{value}..."):
/// 2xx -> Exists, 404/410 -> NotFound, anything else -> Unknown.
class HttpResolver : public Resolver {
 public:
  explicit HttpResolver(std::map<std::string, std::string> templates,
                        std::chrono::seconds timeout = std::chrono::seconds(20));

  bool supports(std::string_view scheme) const override;
  RegistryVerdict lookup(const IdentifierRef& id) override;
  std::string host(std::string_view scheme) const override;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
  std::chrono::seconds timeout_;
};

/// (scheme, value) -> definitive verdict, optionally persisted as JSON
/// (format in docs/cache-format.md). Unknown verdicts are never stored.
class LookupCache {
 public:
  static constexpr std::chrono::hours kDefaultTtl{24 * 30};

  LookupCache() = default;
  /// Loads `file` when it exists; unreadable or corrupt files start empty.
  explicit LookupCache(std::filesystem::path file, std::chrono::seconds ttl = kDefaultTtl);

  std::optional<RegistryVerdict> get(const IdentifierRef& id, Clock::time_point now = Clock::now()) const;
  void put(const IdentifierRef& id, const RegistryVerdict& verdict);
  std::size_t size() const;

  /// Writes the cache file atomically (temp file + rename). No-op for an
  /// in-memory cache.
  void save() const;

  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  std::chrono::seconds ttl_{kDefaultTtl};
  mutable std::mutex mutex_;
  std::map<IdentifierRef, RegistryVerdict> entries_;
};

/// Default cache location: $BIBCHECK_CACHE_DIR, else $XDG_CACHE_HOME/bibcheck,
/// else ~/.cache/bibcheck.
std::filesystem::path default_cache_dir();

struct ResolveLimits {
  std::size_t max_in_flight = 8;
  double per_host_rate = 4.0;  // requests per second per host; <= 0 disables
};

/// Looks up every identifier at most once, with bounded parallelism.
/// Results do not depend on completion order.
std::map<IdentifierRef, RegistryVerdict> resolve_batch(const std::set<IdentifierRef>& ids, LookupCache& cache,
                                                       Resolver* resolver, const ResolveLimits& limits, bool offline);

struct ExistenceOutcome {
  RegistryVerdict verdict;
  std::optional<std::string> warning_label;  // br_id_existence / ra_id_existence
};

ExistenceOutcome check_id_existence(const IdentifierRef& id, EntityRole role, LookupCache& cache, Resolver* resolver,
                                    bool offline);

/// Level 3 over a document: one warning per referencing item for every
/// identifier a registry reports as missing.
std::vector<ValidationError> run_existence(const TableDocument& document, const ItemStatus& status,
                                           LookupCache& cache, Resolver* resolver, const ResolveLimits& limits,
                                           bool offline);

}  // namespace bibcheck
