#include "bibcheck/existence.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "bibcheck/catalog.hpp"
#include "httplib.h"
#include "json.hpp"

namespace bibcheck {

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string percent_encode(std::string_view value) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : value) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~' || c == '/' || c == ':') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

RegistryVerdict unknown(std::string source, std::string reason) {
  return {RegistryStatus::Unknown, Clock::now(), std::move(source), std::move(reason)};
}

// Spaces request start times per host at 1/rate intervals.
class HostPacer {
 public:
  explicit HostPacer(double rate) : interval_(rate > 0 ? 1.0 / rate : 0.0) {}

  void wait_turn(const std::string& host) {
    if (host.empty() || interval_.count() <= 0) return;
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      auto& next = next_slot_[host];
      slot = std::max(now, next);
      next = slot + std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval_);
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::chrono::duration<double> interval_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

}  // namespace

std::string_view to_string(RegistryStatus status) {
  switch (status) {
    case RegistryStatus::Exists: return "exists";
    case RegistryStatus::NotFound: return "not_found";
    case RegistryStatus::Unknown: return "unknown";
  }
  return "unknown";
}

HttpResolver::HttpResolver(std::map<std::string, std::string> templates, std::chrono::seconds timeout)
    : templates_(templates.begin(), templates.end()), timeout_(timeout) {}

bool HttpResolver::supports(std::string_view scheme) const { return templates_.find(scheme) != templates_.end(); }

std::string HttpResolver::host(std::string_view scheme) const {
  auto it = templates_.find(scheme);
  if (it == templates_.end()) return {};
  return split_url(it->second).base;
}

RegistryVerdict HttpResolver::lookup(const IdentifierRef& id) {
  auto it = templates_.find(id.scheme);
  if (it == templates_.end()) return unknown({}, "no resolver for scheme " + id.scheme);

  std::string url = it->second;
  url.replace(url.find("{value}"), 7, percent_encode(id.value));
  const auto [base, path] = split_url(url);
  try {
    httplib::Client client(base);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    const httplib::Headers headers{{"Accept", "application/json"}, {"User-Agent", "bibcheck/1.0"}};
    auto res = client.Get(path, headers);
    if (!res) return unknown(base, "transport error: " + httplib::to_string(res.error()));
    if (res->status >= 200 && res->status < 300) return {RegistryStatus::Exists, Clock::now(), base, {}};
    if (res->status == 404 || res->status == 410) return {RegistryStatus::NotFound, Clock::now(), base, {}};
    return unknown(base, "HTTP " + std::to_string(res->status));
  } catch (const std::exception& e) {
    return unknown(base, e.what());
  }
}

LookupCache::LookupCache(std::filesystem::path file, std::chrono::seconds ttl) : file_(std::move(file)), ttl_(ttl) {
  std::ifstream in(file_, std::ios::binary);
  if (!in) return;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& e : doc.at("entries")) {
      const auto status = e.at("status").get<std::string>();
      RegistryVerdict v;
      if (status == "exists") {
        v.status = RegistryStatus::Exists;
      } else if (status == "not_found") {
        v.status = RegistryStatus::NotFound;
      } else {
        continue;
      }
      v.checked_at = Clock::time_point(std::chrono::seconds(e.at("checked_at").get<long long>()));
      v.source = e.value("source", "");
      entries_[{e.at("scheme").get<std::string>(), e.at("value").get<std::string>()}] = std::move(v);
    }
  } catch (const std::exception&) {
    entries_.clear();
  }
}

std::optional<RegistryVerdict> LookupCache::get(const IdentifierRef& id, Clock::time_point now) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  if (now - it->second.checked_at > ttl_) return std::nullopt;
  return it->second;
}

void LookupCache::put(const IdentifierRef& id, const RegistryVerdict& verdict) {
  if (verdict.status == RegistryStatus::Unknown) return;
  std::lock_guard lock(mutex_);
  entries_[id] = verdict;
}

std::size_t LookupCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void LookupCache::save() const {
  if (file_.empty()) return;
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  auto entries = nlohmann::ordered_json::array();
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, v] : entries_) {
      nlohmann::ordered_json e;
      e["scheme"] = id.scheme;
      e["value"] = id.value;
      e["status"] = to_string(v.status);
      e["checked_at"] =
          std::chrono::duration_cast<std::chrono::seconds>(v.checked_at.time_since_epoch()).count();
      e["source"] = v.source;
      entries.push_back(std::move(e));
    }
  }
  doc["entries"] = std::move(entries);

  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  auto tmp = file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out << doc.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, file_);
}

std::filesystem::path default_cache_dir() {
  if (const char* dir = std::getenv("BIBCHECK_CACHE_DIR"); dir != nullptr && *dir != '\0') return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
    return std::filesystem::path(xdg) / "bibcheck";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::filesystem::path(home) / ".cache" / "bibcheck";
  }
  return std::filesystem::temp_directory_path() / "bibcheck";
}

std::map<IdentifierRef, RegistryVerdict> resolve_batch(const std::set<IdentifierRef>& ids, LookupCache& cache,
                                                       Resolver* resolver, const ResolveLimits& limits, bool offline) {
  std::map<IdentifierRef, RegistryVerdict> out;
  std::vector<IdentifierRef> pending;
  for (const auto& id : ids) {
    if (offline) {
      out[id] = unknown("offline", "offline mode");
    } else if (auto hit = cache.get(id)) {
      out[id] = *hit;
    } else if (resolver == nullptr || !resolver->supports(id.scheme)) {
      out[id] = unknown({}, "no resolver for scheme " + id.scheme);
    } else {
      pending.push_back(id);
    }
  }
  if (pending.empty()) return out;

  std::vector<RegistryVerdict> results(pending.size());
  std::atomic<std::size_t> next{0};
  HostPacer pacer(limits.per_host_rate);
  auto work = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      pacer.wait_turn(resolver->host(pending[i].scheme));
      try {
        results[i] = resolver->lookup(pending[i]);
      } catch (const std::exception& e) {
        results[i] = unknown({}, e.what());
      }
    }
  };
  const auto workers = std::max<std::size_t>(1, std::min(limits.max_in_flight, pending.size()));
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    cache.put(pending[i], results[i]);
    out[pending[i]] = std::move(results[i]);
  }
  return out;
}

ExistenceOutcome check_id_existence(const IdentifierRef& id, EntityRole role, LookupCache& cache, Resolver* resolver,
                                    bool offline) {
  auto verdicts = resolve_batch({id}, cache, resolver, ResolveLimits{1, 0}, offline);
  ExistenceOutcome outcome{verdicts.at(id), std::nullopt};
  if (outcome.verdict.status == RegistryStatus::NotFound) {
    outcome.warning_label = role == EntityRole::ResponsibleAgent ? "ra_id_existence" : "br_id_existence";
  }
  return outcome;
}

std::vector<ValidationError> run_existence(const TableDocument& document, const ItemStatus& status,
                                           LookupCache& cache, Resolver* resolver, const ResolveLimits& limits,
                                           bool offline) {
  struct Reference {
    std::size_t row;
    std::string field;
    std::size_t item;
    IdentifierRef id;
    EntityRole role;
  };
  std::vector<Reference> refs;
  std::set<IdentifierRef> ids;

  auto consider = [&](const ItemRef& ref, std::string_view raw, EntityRole role) {
    if (should_skip(ref, Rule::IdExistence, status)) return;
    auto parsed = parse_id_item(raw);
    if (!std::holds_alternative<Component>(parsed)) return;
    const auto& c = std::get<Component>(parsed);
    IdentifierRef id{c.scheme, c.value};
    ids.insert(id);
    refs.push_back({ref.row, ref.field, ref.item, std::move(id), role});
  };

  for (const auto& row : document.rows()) {
    for (const auto& cell : row.cells) {
      const auto role = field_role(cell.field);
      for (const auto& item : cell.items) {
        switch (role) {
          case FieldRole::Identifiers:
            consider({row.index, cell.field, item.index, -1}, item.raw, EntityRole::BibliographicResource);
            break;
          case FieldRole::Agents:
          case FieldRole::Venue: {
            const auto entity = role == FieldRole::Venue ? EntityRole::Venue : EntityRole::ResponsibleAgent;
            const auto list = bracketed_ids(item.raw);
            for (std::size_t k = 0; k < list.size(); ++k) {
              consider({row.index, cell.field, item.index, static_cast<int>(k)}, list[k], entity);
            }
            break;
          }
          case FieldRole::Single:
            break;
        }
      }
    }
  }

  const auto verdicts = resolve_batch(ids, cache, resolver, limits, offline);

  std::vector<ValidationError> out;
  std::set<std::tuple<std::size_t, std::string, std::size_t, IdentifierRef>> reported;
  for (const auto& r : refs) {
    if (verdicts.at(r.id).status != RegistryStatus::NotFound) continue;
    if (!reported.emplace(r.row, r.field, r.item, r.id).second) continue;
    PositionTable table;
    add_position(table, r.row, r.field, r.item);
    const char* label = r.role == EntityRole::ResponsibleAgent ? "ra_id_existence" : "br_id_existence";
    out.push_back(make_error(label, ValidationLevel::Existence, LocatedIn::Item, std::move(table)));
  }
  return out;
}

}  // namespace bibcheck
