#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bibcheck {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything about the validation rules that is data rather than code.
/// Loaded from a JSON file whose keys override the built-in defaults; see
/// docs/rules-config.md.
struct RuleConfig {
  std::set<std::string> br_schemes;
  std::set<std::string> ra_schemes;
  std::set<std::string> type_vocabulary;
  std::map<std::string, std::set<std::string>> type_id_compatibility;
  std::set<std::string> containerless_types;
  /// scheme -> URL template with a "{value}" placeholder.
  std::map<std::string, std::string> resolvers;
  bool offline = false;

  static RuleConfig defaults();

  bool is_br_scheme(std::string_view scheme) const { return br_schemes.count(std::string(scheme)) > 0; }
  bool is_ra_scheme(std::string_view scheme) const { return ra_schemes.count(std::string(scheme)) > 0; }
};

RuleConfig load_rule_config(const std::filesystem::path& path);
RuleConfig parse_rule_config(std::string_view json_text);

/// Overrides resolver templates from BIBCHECK_RESOLVER_<SCHEME> variables.
void apply_environment(RuleConfig& config);

}  // namespace bibcheck
