#include <algorithm>
#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "ontotopic/sparql_client.hpp"

namespace ontotopic {

Url parse_url(const std::string& url) {
  static const std::regex kPattern(R"(^(https?)://([A-Za-z0-9._~-]+)(?::(\d{1,5}))?(/[^\s]*)?$)",
                                   std::regex::icase);
  std::smatch m;
  if (!std::regex_match(url, m, kPattern)) {
    throw std::invalid_argument("not an http(s) URL: '" + url + "'");
  }
  Url out;
  out.scheme = m[1].str();
  std::transform(out.scheme.begin(), out.scheme.end(), out.scheme.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  out.host = m[2].str();
  out.port = m[3].matched ? std::stoi(m[3].str()) : (out.scheme == "https" ? 443 : 80);
  if (out.port <= 0 || out.port > 65535) {
    throw std::invalid_argument("port out of range in '" + url + "'");
  }
  out.path = m[4].matched ? m[4].str() : "/";
  return out;
}

void validate(const EndpointConfig& cfg) {
  parse_url(cfg.url);
  if (cfg.timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
}

BindingTable parse_results_json(const std::string& body) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ResultsFormatError(std::string("results are not JSON: ") + e.what());
  }
  try {
    BindingTable t;
    for (const auto& v : doc.at("head").at("vars")) t.columns.push_back(v.get<std::string>());
    for (const auto& b : doc.at("results").at("bindings")) {
      if (!b.is_object()) throw ResultsFormatError("binding is not an object");
      std::vector<Cell> row(t.columns.size());
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        auto it = b.find(t.columns[i]);
        if (it == b.end()) continue;
        const auto& term = *it;
        const std::string type = term.at("type").get<std::string>();
        Cell& c = row[i];
        c.value = term.at("value").get<std::string>();
        if (type == "uri") {
          c.kind = Cell::Kind::kIri;
        } else if (type == "bnode") {
          c.kind = Cell::Kind::kBlank;
        } else if (type == "literal" || type == "typed-literal") {
          c.kind = Cell::Kind::kLiteral;
          if (term.contains("datatype")) c.datatype = term["datatype"].get<std::string>();
          if (term.contains("xml:lang")) c.language = term["xml:lang"].get<std::string>();
        } else {
          throw ResultsFormatError("unknown term type '" + type + "'");
        }
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  } catch (const json::exception& e) {
    throw ResultsFormatError(std::string("malformed SPARQL results: ") + e.what());
  }
}

std::string table_to_json(const BindingTable& t) {
  nlohmann::ordered_json doc;
  doc["head"]["vars"] = t.columns;
  auto bindings = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json b = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const Cell& c = row[i];
      if (c.kind == Cell::Kind::kUnbound) continue;
      nlohmann::ordered_json term;
      term["type"] = c.kind == Cell::Kind::kIri     ? "uri"
                     : c.kind == Cell::Kind::kBlank ? "bnode"
                                                    : "literal";
      term["value"] = c.value;
      if (c.datatype) term["datatype"] = *c.datatype;
      if (c.language) term["xml:lang"] = *c.language;
      b[t.columns[i]] = std::move(term);
    }
    bindings.push_back(std::move(b));
  }
  doc["results"]["bindings"] = std::move(bindings);
  return doc.dump();
}

BindingTable execute(const EndpointConfig& cfg, const std::string& sparql) {
  if (sparql.empty()) throw std::invalid_argument("empty query");
  validate(cfg);
  const Url url = parse_url(cfg.url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.scheme == "https") throw TransportError("https endpoints are not supported in this build");
#endif
  httplib::Client client(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers{{"Accept", kSparqlResultsJson}};
  httplib::Params params{{"query", sparql}};
  if (cfg.default_graph) params.emplace("default-graph-uri", *cfg.default_graph);

  bool use_post = cfg.method == EndpointConfig::Method::kPost ||
                  (cfg.method == EndpointConfig::Method::kAuto &&
                   sparql.size() > kMaxGetQueryBytes);
  httplib::Result res = use_post ? client.Post(url.path, headers, params)
                                 : client.Get(url.path, params, headers);
  if (!res) {
    throw TransportError("request to " + cfg.url + " failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw EndpointError(res->status, res->body.substr(0, 200));
  }
  return parse_results_json(res->body);
}

namespace {

std::string display(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::kUnbound: return "";
    case Cell::Kind::kIri: return "<" + c.value + ">";
    case Cell::Kind::kBlank: return "_:" + c.value;
    case Cell::Kind::kLiteral: return c.value;
  }
  return "";
}

std::string tsv_field(const Cell& c) {
  if (c.kind != Cell::Kind::kLiteral) return display(c);
  const std::string& v = c.value;
  const bool quote = v.empty() || v.find_first_of("\t\n\r\"") != std::string::npos ||
                     v.front() == '<' || v.starts_with("_:");
  if (!quote) return v;
  std::string out = "\"";
  for (char ch : v) {
    out += ch;
    if (ch == '"') out += '"';
  }
  return out + "\"";
}

std::size_t display_width(const std::string& s) {
  // UTF-8 continuation bytes do not take a column.
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char ch) { return (static_cast<unsigned char>(ch) & 0xC0) != 0x80; }));
}

}  // namespace

std::string render_table(const BindingTable& t, TableStyle style) {
  std::string out;
  if (style == TableStyle::kTsv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i > 0) out += '\t';
      out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += '\t';
        out += tsv_field(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = display_width(t.columns[i]);
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], display_width(display(row[i])));
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) l += " | ";
      l += cells[i];
      if (i + 1 < cells.size()) l.append(width[i] - display_width(cells[i]), ' ');
    }
    while (!l.empty() && l.back() == ' ') l.pop_back();
    return l + "\n";
  };
  out += line(t.columns);
  std::string rule;
  for (std::size_t i = 0; i < width.size(); ++i) {
    if (i > 0) rule += "-+-";
    rule.append(width[i], '-');
  }
  out += rule + "\n";
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (const auto& c : row) cells.push_back(display(c));
    out += line(cells);
  }
  out += "(" + std::to_string(t.rows.size()) + (t.rows.size() == 1 ? " row)\n" : " rows)\n");
  return out;
}

BindingTable parse_table_tsv(const std::string& text) {
  // Records of raw fields; quoted fields may span lines.
  std::vector<std::vector<std::pair<std::string, bool>>> records;
  std::vector<std::pair<std::string, bool>> record;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !quoted) {
      in_quotes = quoted = true;
    } else if (c == '\t' || c == '\n') {
      record.emplace_back(std::move(field), quoted);
      field.clear();
      quoted = false;
      if (c == '\n') records.push_back(std::move(record)), record.clear();
    } else {
      field += c;
    }
  }
  if (in_quotes) throw std::invalid_argument("unterminated quoted field");
  if (!field.empty() || quoted || !record.empty()) {
    record.emplace_back(std::move(field), quoted);
    records.push_back(std::move(record));
  }
  if (records.empty()) throw std::invalid_argument("missing header line");

  BindingTable t;
  for (auto& [name, q] : records.front()) t.columns.push_back(name);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.columns.size()) {
      throw std::invalid_argument("row " + std::to_string(r) + " has " +
                                  std::to_string(records[r].size()) + " fields, expected " +
                                  std::to_string(t.columns.size()));
    }
    std::vector<Cell> row;
    for (auto& [value, q] : records[r]) {
      Cell c;
      if (q) {
        c.kind = Cell::Kind::kLiteral;
        c.value = value;
      } else if (value.empty()) {
        c.kind = Cell::Kind::kUnbound;
      } else if (value.size() >= 2 && value.front() == '<' && value.back() == '>') {
        c.kind = Cell::Kind::kIri;
        c.value = value.substr(1, value.size() - 2);
      } else if (value.starts_with("_:")) {
        c.kind = Cell::Kind::kBlank;
        c.value = value.substr(2);
      } else {
        c.kind = Cell::Kind::kLiteral;
        c.value = value;
      }
      row.push_back(std::move(c));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace ontotopic
