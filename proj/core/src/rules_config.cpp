#include "bibcheck/rules_config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bibcheck {

namespace {

using json = nlohmann::json;

const std::set<std::string> kArticleSchemes{"doi", "pmid", "pmcid", "wikidata", "openalex", "url", "arxiv"};

std::set<std::string> with(std::set<std::string> base, std::initializer_list<const char*> extra) {
  for (const char* s : extra) base.insert(s);
  return base;
}

std::set<std::string> string_set(const json& j, std::string_view key) {
  if (!j.is_array()) throw ConfigError("'" + std::string(key) + "' must be a list of strings");
  std::set<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ConfigError("'" + std::string(key) + "' must be a list of strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

void check_consistency(const RuleConfig& c) {
  if (c.br_schemes.empty()) throw ConfigError("'br_schemes' must not be empty");
  if (c.ra_schemes.empty()) throw ConfigError("'ra_schemes' must not be empty");
  for (const auto& type : c.type_vocabulary) {
    if (c.type_id_compatibility.count(type) == 0) {
      throw ConfigError("type '" + type + "' has no entry in 'type_id_compatibility'");
    }
  }
  for (const auto& [type, schemes] : c.type_id_compatibility) {
    for (const auto& s : schemes) {
      if (!c.is_br_scheme(s)) {
        throw ConfigError("'type_id_compatibility' entry '" + type + "' uses unsupported scheme '" + s + "'");
      }
    }
  }
  for (const auto& [scheme, tmpl] : c.resolvers) {
    if (tmpl.find("{value}") == std::string::npos) {
      throw ConfigError("resolver template for '" + scheme + "' lacks the {value} placeholder");
    }
  }
}

}  // namespace

RuleConfig RuleConfig::defaults() {
  RuleConfig c;
  c.br_schemes = {"doi", "pmid", "pmcid", "issn", "isbn", "wikidata", "openalex", "url", "jid", "arxiv"};
  c.ra_schemes = {"orcid", "viaf", "crossref", "wikidata", "ror"};

  const auto book_like = with(kArticleSchemes, {"isbn"});
  const std::set<std::string> dataset{"doi", "wikidata", "openalex", "url"};
  const std::set<std::string> serial{"issn", "wikidata", "openalex"};

  auto& m = c.type_id_compatibility;
  for (const char* t : {"journal article", "book chapter", "book part", "book section", "book track",
                        "proceedings article", "reference entry", "peer review", "posted content", "web content",
                        "component", "other"}) {
    m[t] = kArticleSchemes;
  }
  for (const char* t : {"book", "edited book", "monograph", "reference book", "proceedings", "book set", "report",
                        "standard", "dissertation"}) {
    m[t] = book_like;
  }
  for (const char* t : {"dataset", "data file", "computer program", "journal volume", "journal issue"}) m[t] = dataset;
  m["journal"] = serial;
  m["journal"].insert("jid");
  for (const char* t : {"book series", "proceedings series", "report series", "standard series", "series"}) {
    m[t] = with(serial, {"isbn", "url"});
  }

  for (const auto& [type, schemes] : m) c.type_vocabulary.insert(type);
  c.containerless_types = {"book", "report"};

  c.resolvers = {
      {"doi", "https://doi.org/api/handles/{value}"},
      {"orcid", "https://pub.orcid.org/v3.0/{value}"},
      {"pmid", "https://pubmed.ncbi.nlm.nih.gov/{value}/"},
  };
  return c;
}

RuleConfig parse_rule_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("rule configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("rule configuration must be a JSON object");

  RuleConfig c = RuleConfig::defaults();
  for (const auto& [key, value] : doc.items()) {
    if (key == "br_schemes") {
      c.br_schemes = string_set(value, key);
    } else if (key == "ra_schemes") {
      c.ra_schemes = string_set(value, key);
    } else if (key == "type_vocabulary") {
      c.type_vocabulary = string_set(value, key);
    } else if (key == "containerless_types") {
      c.containerless_types = string_set(value, key);
    } else if (key == "type_id_compatibility") {
      if (!value.is_object()) throw ConfigError("'type_id_compatibility' must be an object");
      c.type_id_compatibility.clear();
      for (const auto& [type, schemes] : value.items()) {
        c.type_id_compatibility[type] = string_set(schemes, "type_id_compatibility." + type);
      }
    } else if (key == "resolvers") {
      if (!value.is_object()) throw ConfigError("'resolvers' must be an object");
      for (const auto& [scheme, tmpl] : value.items()) {
        if (tmpl.is_null()) {
          c.resolvers.erase(scheme);
        } else if (tmpl.is_string()) {
          c.resolvers[scheme] = tmpl.get<std::string>();
        } else {
          throw ConfigError("'resolvers." + scheme + "' must be a string or null");
        }
      }
    } else if (key == "offline") {
      if (!value.is_boolean()) throw ConfigError("'offline' must be a boolean");
      c.offline = value.get<bool>();
    } else {
      throw ConfigError("unknown rule configuration key '" + key + "'");
    }
  }
  check_consistency(c);
  return c;
}

RuleConfig load_rule_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read rule configuration " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule_config(buf.str());
}

void apply_environment(RuleConfig& config) {
  for (const char* scheme : {"doi", "orcid", "pmid", "pmcid", "issn", "isbn", "viaf", "ror", "wikidata"}) {
    std::string var = "BIBCHECK_RESOLVER_";
    for (const char* p = scheme; *p; ++p) var += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
    if (const char* v = std::getenv(var.c_str()); v != nullptr && *v != '\0') config.resolvers[scheme] = v;
  }
  check_consistency(config);
}

}  // namespace bibcheck
