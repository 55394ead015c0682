#include "sparql_mock.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace testsupport {

namespace {

const std::map<std::string, std::string>& known_prefixes() {
  static const std::map<std::string, std::string> p{
      {"datacite", "http://purl.org/spar/datacite/"},
      {"literal", "http://www.essepuntato.it/2010/06/literalreification/"},
      {"fabio", "http://purl.org/spar/fabio/"},
      {"foaf", "http://xmlns.com/foaf/0.1/"},
      {"frbr", "http://purl.org/vocab/frbr/core#"},
      {"cito", "http://purl.org/spar/cito/"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
  };
  return p;
}

const std::string kRdfType = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

std::string expand_with(std::string_view term, const std::map<std::string, std::string>& prefixes) {
  if (term.empty()) throw std::runtime_error("empty term");
  if (term.front() == '<' || term.front() == '"') return std::string(term);
  if (term == "a") return kRdfType;
  const auto colon = term.find(':');
  if (colon == std::string_view::npos) throw std::runtime_error("not a prefixed name: " + std::string(term));
  auto it = prefixes.find(std::string(term.substr(0, colon)));
  if (it == prefixes.end()) throw std::runtime_error("unknown prefix in " + std::string(term));
  return "<" + it->second + std::string(term.substr(colon + 1)) + ">";
}

std::vector<std::string> tokenize(std::string_view q) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < q.size()) {
    const char c = q[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < q.size() && q[i] != '\n') ++i;
    } else if (c == '<') {
      const auto end = q.find('>', i);
      if (end == std::string_view::npos) throw std::runtime_error("unterminated IRI");
      out.emplace_back(q.substr(i, end - i + 1));
      i = end + 1;
    } else if (c == '"') {
      const auto end = q.find('"', i + 1);
      if (end == std::string_view::npos) throw std::runtime_error("unterminated literal");
      out.emplace_back(q.substr(i, end - i + 1));
      i = end + 1;
    } else if (c == '!' && i + 1 < q.size() && q[i + 1] == '=') {
      out.emplace_back("!=");
      i += 2;
    } else if (std::string_view("{}().;,/=").find(c) != std::string_view::npos) {
      out.emplace_back(1, c);
      ++i;
    } else {
      std::size_t j = i;
      while (j < q.size() && !std::isspace(static_cast<unsigned char>(q[j])) &&
             std::string_view("{}();,/<\"").find(q[j]) == std::string_view::npos &&
             !(q[j] == '.' && (j + 1 == q.size() || !std::isalnum(static_cast<unsigned char>(q[j + 1]))))) {
        ++j;
      }
      out.emplace_back(q.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

struct Pattern {
  std::string s, p, o;  // variables keep their leading '?'
};

struct Filter {
  std::string left, right;
  bool negated;
};

struct Query {
  bool ask = true;
  std::string count_var;
  std::vector<Pattern> patterns;
  std::vector<Filter> filters;
};

bool is_var(const std::string& t) { return !t.empty() && t.front() == '?'; }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return std::tolower(x) == std::tolower(y); });
}

class Parser {
 public:
  explicit Parser(std::string_view text) : t_(tokenize(text)) {}

  Query parse() {
    auto prefixes = known_prefixes();
    while (peek_kw("PREFIX")) {
      next();
      auto name = next();
      if (name.empty() || name.back() != ':') throw std::runtime_error("bad PREFIX");
      auto iri = next();
      prefixes[name.substr(0, name.size() - 1)] = iri.substr(1, iri.size() - 2);
    }
    prefixes_ = prefixes;
    Query q;
    if (peek_kw("ASK")) {
      next();
    } else if (peek_kw("SELECT")) {
      next();
      expect("(");
      expect_kw("COUNT");
      expect("(");
      if (peek_kw("DISTINCT")) next();
      q.count_var = next();
      expect(")");
      expect_kw("AS");
      next();
      expect(")");
      q.ask = false;
      if (peek_kw("WHERE")) next();
    } else {
      throw std::runtime_error("only ASK and SELECT COUNT queries are supported");
    }
    expect("{");
    while (peek() != "}") {
      if (peek_kw("FILTER")) {
        next();
        expect("(");
        Filter f;
        f.left = term(next());
        const auto op = next();
        if (op != "!=" && op != "=") throw std::runtime_error("unsupported FILTER operator " + op);
        f.negated = op == "!=";
        f.right = term(next());
        expect(")");
        q.filters.push_back(f);
        continue;
      }
      triples(q);
    }
    expect("}");
    if (pos_ != t_.size()) throw std::runtime_error("trailing tokens after query body");
    return q;
  }

 private:
  void triples(Query& q) {
    const auto subject = term(next());
    while (true) {
      auto path = predicate_path();
      while (true) {
        const auto object = term(next());
        emit_path(q, subject, path, object);
        if (peek() != ",") break;
        next();
      }
      if (peek() == ";") {
        next();
        if (peek() == "." || peek() == "}") break;
        continue;
      }
      break;
    }
    if (peek() == ".") next();
  }

  std::vector<std::string> predicate_path() {
    std::vector<std::string> path{term(next())};
    while (peek() == "/") {
      next();
      path.push_back(term(next()));
    }
    return path;
  }

  void emit_path(Query& q, const std::string& s, const std::vector<std::string>& path, const std::string& o) {
    std::string from = s;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto to = i + 1 == path.size() ? o : "?_path" + std::to_string(fresh_++);
      q.patterns.push_back({from, path[i], to});
      from = to;
    }
  }

  std::string term(const std::string& tok) { return is_var(tok) ? tok : expand_with(tok, prefixes_); }
  const std::string& peek() const {
    static const std::string end;
    return pos_ < t_.size() ? t_[pos_] : end;
  }
  bool peek_kw(std::string_view kw) const { return iequals(peek(), kw); }
  std::string next() {
    if (pos_ >= t_.size()) throw std::runtime_error("unexpected end of query");
    return t_[pos_++];
  }
  void expect(std::string_view tok) {
    if (next() != tok) throw std::runtime_error("expected " + std::string(tok));
  }
  void expect_kw(std::string_view kw) {
    if (!iequals(next(), kw)) throw std::runtime_error("expected " + std::string(kw));
  }

  std::vector<std::string> t_;
  std::size_t pos_ = 0;
  std::size_t fresh_ = 0;
  std::map<std::string, std::string> prefixes_;
};

using Binding = std::map<std::string, std::string>;

void solve(const std::vector<Triple>& data, const Query& q, std::size_t k, Binding& b,
           const std::function<bool(const Binding&)>& yield, bool& stop) {
  if (stop) return;
  if (k == q.patterns.size()) {
    for (const auto& f : q.filters) {
      auto value = [&](const std::string& t) { return is_var(t) ? b.at(t) : t; };
      if ((value(f.left) == value(f.right)) == f.negated) return;
    }
    if (!yield(b)) stop = true;
    return;
  }
  const auto& pat = q.patterns[k];
  for (const auto& tr : data) {
    std::vector<std::string> bound_here;
    bool ok = true;
    for (const auto& [t, v] : {std::pair{&pat.s, &tr.s}, std::pair{&pat.p, &tr.p}, std::pair{&pat.o, &tr.o}}) {
      if (!is_var(*t)) {
        ok = *t == *v;
      } else if (auto it = b.find(*t); it != b.end()) {
        ok = it->second == *v;
      } else {
        b[*t] = *v;
        bound_here.push_back(*t);
      }
      if (!ok) break;
    }
    if (ok) solve(data, q, k + 1, b, yield, stop);
    for (const auto& v : bound_here) b.erase(v);
    if (stop) return;
  }
}

}  // namespace

std::string expand_term(std::string_view term) { return expand_with(term, known_prefixes()); }

void TripleStore::add(std::string_view s, std::string_view p, std::string_view o) {
  triples_.push_back({expand_term(s), expand_term(p), expand_term(o)});
}

void TripleStore::remove_subject(std::string_view s) {
  const auto iri = expand_term(s);
  std::erase_if(triples_, [&](const Triple& t) { return t.s == iri; });
}

void TripleStore::clear() { triples_.clear(); }

bool TripleStore::ask(std::string_view query) const {
  const auto q = Parser(query).parse();
  Binding b;
  bool found = false;
  bool stop = false;
  solve(triples_, q, 0, b, [&](const Binding&) { return !(found = true); }, stop);
  return found;
}

std::int64_t TripleStore::count(std::string_view query) const {
  const auto q = Parser(query).parse();
  std::set<std::string> distinct;
  Binding b;
  bool stop = false;
  solve(triples_, q, 0, b, [&](const Binding& sol) {
    distinct.insert(sol.at(q.count_var));
    return true;
  }, stop);
  return static_cast<std::int64_t>(distinct.size());
}

std::string TripleStore::answer(std::string_view query) const {
  const auto q = Parser(query).parse();
  nlohmann::json doc;
  if (q.ask) {
    doc["head"] = nlohmann::json::object();
    doc["boolean"] = ask(query);
  } else {
    doc["head"]["vars"] = {"count"};
    nlohmann::json cell{{"type", "literal"},
                        {"datatype", "http://www.w3.org/2001/XMLSchema#integer"},
                        {"value", std::to_string(count(query))}};
    doc["results"]["bindings"] = nlohmann::json::array({{{"count", cell}}});
  }
  return doc.dump();
}

MockSparqlEndpoint::MockSparqlEndpoint() : server_(std::make_unique<httplib::Server>()) {
  server_->Post("/sparql", [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    {
      std::lock_guard lock(mutex_);
      last_content_type_ = req.get_header_value("Content-Type");
      last_accept_ = req.get_header_value("Accept");
    }
    if (const int status = fail_status_; status != 0) {
      res.status = status;
      res.set_content("simulated failure", "text/plain");
      return;
    }
    if (!req.has_param("query")) {
      res.status = 400;
      return;
    }
    try {
      std::lock_guard lock(mutex_);
      res.set_content(store_.answer(req.get_param_value("query")), "application/sparql-results+json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockSparqlEndpoint::~MockSparqlEndpoint() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockSparqlEndpoint::url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/sparql"; }

}  // namespace testsupport
