#include "onto/indexer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "onto/error.hpp"
#include "onto/politeness.hpp"

namespace onto::index {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_null_literal(std::string_view s) {
  return s.size() == 4 && std::equal(s.begin(), s.end(), "null", [](char a, char b) {
           return std::tolower(static_cast<unsigned char>(a)) == b;
         });
}

std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto nl = content.find('\n', start);
    if (nl == std::string::npos) nl = content.size();
    std::string line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    out.emplace_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IndexDirUnwritable, "cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error(Errc::IndexDirUnwritable, "cannot write " + path.string());
}

[[noreturn]] void corrupt(const std::string& what) { throw Error(Errc::CorruptIndex, what); }

std::size_t parse_count(const std::string& s, const std::string& where) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    corrupt(where + ": '" + s + "' is not a non-negative integer");
  return value;
}

std::optional<SkipReason> parse_reason(std::string_view s) {
  for (SkipReason r : kSkipReasons)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(Errc::IndexDirUnwritable, dir.string() + (ec ? ": " + ec.message() : ""));
}

}  // namespace

std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::Class: return "class";
    case Field::Property: return "property";
    case Field::Relation: return "relation";
  }
  return "class";
}

std::optional<Field> parse_field(std::string_view s) noexcept {
  for (Field f : kFields)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

std::string_view to_string(SkipReason r) noexcept {
  switch (r) {
    case SkipReason::BlankOrNull: return "blank_or_null";
    case SkipReason::Duplicate: return "duplicate";
    case SkipReason::FetchError: return "fetch_error";
    case SkipReason::UnsupportedSyntax: return "unsupported_syntax";
    case SkipReason::ParseError: return "parse_error";
    case SkipReason::EmptyOntology: return "empty_ontology";
    case SkipReason::Oversize: return "oversize";
  }
  return "fetch_error";
}

bool posting_less(const Posting& a, const Posting& b) noexcept {
  if (a.token != b.token) return a.token < b.token;
  if (a.field != b.field) return a.field < b.field;
  return a.doc_id < b.doc_id;
}

std::size_t IndexManifest::skipped() const noexcept {
  std::size_t total = 0;
  for (const auto& [reason, count] : skip_counts) total += count;
  return total;
}

std::map<std::string, std::size_t> field_token_counts(const std::set<std::string>& terms) {
  std::map<std::string, std::size_t> counts;
  for (const std::string& term : terms) {
    auto tokens = rdf::tokenize(term);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++counts[t];
  }
  return counts;
}

std::size_t IndexBuilder::add(const rdf::OntologySummary& summary) {
  if (summary.is_empty())
    throw Error(Errc::InvalidArgument, "empty summary for " + summary.url.str());
  const std::size_t id = docs_.size();
  docs_.push_back({id, summary.url, summary.byte_size, summary.classes.size(),
                   summary.properties.size(), summary.relations.size()});
  const std::set<std::string>* sets[] = {&summary.classes, &summary.properties,
                                         &summary.relations};
  for (Field f : kFields)
    for (const auto& [token, tf] : field_token_counts(*sets[static_cast<int>(f)]))
      postings_.push_back({token, f, id, tf});
  return id;
}

Index IndexBuilder::finish() const {
  Index out;
  out.docs = docs_;
  out.postings = postings_;
  std::sort(out.postings.begin(), out.postings.end(), posting_less);
  out.manifest.doc_count = out.docs.size();
  out.manifest.posting_count = out.postings.size();
  for (SkipReason r : kSkipReasons) out.manifest.skip_counts[r] = 0;
  return out;
}

std::string utc_timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

BuildResult build_index(const fs::path& url_list, Transport& transport, const IndexLimits& limits,
                        const fs::path& index_dir, const BuildOptions& options) {
  if (limits.max_ontology_bytes == 0)
    throw Error(Errc::InvalidArgument, "max_ontology_bytes must be > 0");
  auto content = read_file(url_list);
  if (!content) throw Error(Errc::InputUnreadable, url_list.string());
  ensure_dir(index_dir);

  const auto lines = split_lines(*content);
  PolitenessGate gate(std::chrono::milliseconds(limits.politeness_ms));
  RequestOptions request;
  request.max_body_bytes = limits.max_ontology_bytes;
  request.truncate_body = false;
  request.timeout = limits.fetch_timeout;

  IndexBuilder builder;
  BuildResult result;
  std::map<SkipReason, std::size_t> skips;
  for (SkipReason r : kSkipReasons) skips[r] = 0;
  std::set<std::string> processed;

  auto fate_of = [&](std::string_view raw) -> std::optional<SkipReason> {
    std::string_view line = trim(raw);
    if (line.empty() || is_null_literal(line)) return SkipReason::BlankOrNull;
    Url url;
    try {
      url = Url::parse(line);
    } catch (const Error&) {
      return SkipReason::FetchError;
    }
    if (!processed.insert(url.str()).second) return SkipReason::Duplicate;

    FetchResponse resp;
    try {
      resp = fetch(transport, url, request, &gate);
    } catch (const Error& e) {
      return e.code() == Errc::BodyTooLarge ? SkipReason::Oversize : SkipReason::FetchError;
    }
    if (resp.status != 200) return SkipReason::FetchError;
    if (resp.body.size() > limits.max_ontology_bytes) return SkipReason::Oversize;

    std::vector<rdf::Triple> triples;
    try {
      switch (rdf::detect_syntax(resp.body, resp.content_type)) {
        case rdf::Syntax::RdfXml: triples = rdf::parse_rdf_xml(resp.body, resp.final_url); break;
        case rdf::Syntax::Turtle: triples = rdf::parse_turtle(resp.body, resp.final_url); break;
        case rdf::Syntax::Unsupported: return SkipReason::UnsupportedSyntax;
      }
    } catch (const Error&) {
      return SkipReason::ParseError;
    }
    auto summary = rdf::extract_summary(triples, url, resp.body.size());
    if (summary.is_empty()) return SkipReason::EmptyOntology;
    builder.add(summary);
    return std::nullopt;
  };

  for (const std::string& line : lines) {
    auto fate = fate_of(line);
    if (fate) ++skips[*fate];
    result.line_fates.push_back(fate);
  }

  result.index = builder.finish();
  IndexManifest& m = result.index.manifest;
  m.created_at = options.created_at.empty() ? utc_timestamp_now() : options.created_at;
  m.input_line_count = lines.size();
  m.skip_counts = std::move(skips);
  m.max_ontology_bytes = limits.max_ontology_bytes;
  write_index(index_dir, result.index);
  return result;
}

void write_index(const fs::path& dir, const Index& index) {
  ensure_dir(dir);
  const IndexManifest& m = index.manifest;
  Json skips = Json::object();
  for (SkipReason r : kSkipReasons) {
    auto it = m.skip_counts.find(r);
    skips[std::string(to_string(r))] = it == m.skip_counts.end() ? 0 : it->second;
  }
  Json manifest = {
      {"format_version", m.format_version},
      {"created_at", m.created_at},
      {"doc_count", m.doc_count},
      {"posting_count", m.posting_count},
      {"input_line_count", m.input_line_count},
      {"skip_counts", skips},
      {"max_ontology_bytes", m.max_ontology_bytes},
      {"scoring",
       {{"formula", "sum over matched postings of weight(field) * (1 + ln tf)"},
        {"weights", {{"class", 3}, {"property", 2}, {"relation", 1}}}}},
  };

  std::string docs;
  for (const DocRecord& d : index.docs) {
    docs += std::to_string(d.doc_id) + '\t' + d.url.str() + '\t' + std::to_string(d.byte_size) +
            '\t' + std::to_string(d.class_count) + '\t' + std::to_string(d.property_count) +
            '\t' + std::to_string(d.relation_count) + '\n';
  }
  std::string postings;
  for (const Posting& p : index.postings) {
    postings += p.token + '\t' + std::string(to_string(p.field)) + '\t' +
                std::to_string(p.doc_id) + '\t' + std::to_string(p.tf) + '\n';
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(dir / "docs.tsv", docs);
  write_file(dir / "postings.tsv", postings);
}

Index read_index(const fs::path& dir) {
  auto manifest_text = read_file(dir / "manifest.json");
  if (!manifest_text) throw Error(Errc::MissingFile, (dir / "manifest.json").string());
  auto docs_text = read_file(dir / "docs.tsv");
  if (!docs_text) throw Error(Errc::MissingFile, (dir / "docs.tsv").string());
  auto postings_text = read_file(dir / "postings.tsv");
  if (!postings_text) throw Error(Errc::MissingFile, (dir / "postings.tsv").string());

  Index index;
  IndexManifest& m = index.manifest;
  try {
    Json j = Json::parse(*manifest_text);
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kFormatVersion)
      throw Error(Errc::VersionMismatch, "index format " + std::to_string(m.format_version) +
                                             ", expected " + std::to_string(kFormatVersion));
    m.created_at = j.at("created_at").get<std::string>();
    m.doc_count = j.at("doc_count").get<std::size_t>();
    m.posting_count = j.at("posting_count").get<std::size_t>();
    m.input_line_count = j.at("input_line_count").get<std::size_t>();
    m.max_ontology_bytes = j.at("max_ontology_bytes").get<std::size_t>();
    const Json& skips = j.at("skip_counts");
    for (auto it = skips.begin(); it != skips.end(); ++it) {
      auto reason = parse_reason(it.key());
      if (!reason) corrupt("manifest: unknown skip reason '" + it.key() + "'");
      m.skip_counts[*reason] = it.value().get<std::size_t>();
    }
    for (SkipReason r : kSkipReasons)
      if (!m.skip_counts.contains(r))
        corrupt("manifest: missing skip reason '" + std::string(to_string(r)) + "'");
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("manifest.json: ") + e.what());
  }

  auto docs_lines = split_lines(*docs_text);
  for (std::size_t i = 0; i < docs_lines.size(); ++i) {
    std::string where = "docs.tsv line " + std::to_string(i + 1);
    auto f = split_tabs(docs_lines[i]);
    if (f.size() != 6) corrupt(where + ": expected 6 fields");
    DocRecord d;
    d.doc_id = parse_count(f[0], where);
    try {
      d.url = Url::parse(f[1]);
    } catch (const Error&) {
      corrupt(where + ": bad url '" + f[1] + "'");
    }
    if (d.url.str() != f[1]) corrupt(where + ": url '" + f[1] + "' is not normalized");
    d.byte_size = parse_count(f[2], where);
    d.class_count = parse_count(f[3], where);
    d.property_count = parse_count(f[4], where);
    d.relation_count = parse_count(f[5], where);
    index.docs.push_back(std::move(d));
  }

  auto posting_lines = split_lines(*postings_text);
  for (std::size_t i = 0; i < posting_lines.size(); ++i) {
    std::string where = "postings.tsv line " + std::to_string(i + 1);
    auto f = split_tabs(posting_lines[i]);
    if (f.size() != 4) corrupt(where + ": expected 4 fields");
    auto field = parse_field(f[1]);
    if (!field) corrupt(where + ": unknown field '" + f[1] + "'");
    index.postings.push_back({f[0], *field, parse_count(f[2], where), parse_count(f[3], where)});
  }

  validate(index);
  return index;
}

void validate(const Index& index) {
  const IndexManifest& m = index.manifest;
  if (m.doc_count != index.docs.size())
    corrupt("doc_count " + std::to_string(m.doc_count) + " != " +
            std::to_string(index.docs.size()) + " docs");
  if (m.posting_count != index.postings.size())
    corrupt("posting_count " + std::to_string(m.posting_count) + " != " +
            std::to_string(index.postings.size()) + " postings");
  if (m.doc_count + m.skipped() != m.input_line_count)
    corrupt("doc_count + skips != input_line_count");

  for (std::size_t i = 0; i < index.docs.size(); ++i) {
    const DocRecord& d = index.docs[i];
    if (d.doc_id != i) corrupt("doc ids are not dense and ascending at doc " + std::to_string(i));
    if (d.class_count + d.property_count + d.relation_count == 0)
      corrupt("doc " + std::to_string(i) + " has no terms");
  }

  std::vector<bool> has_posting(index.docs.size(), false);
  for (std::size_t i = 0; i < index.postings.size(); ++i) {
    const Posting& p = index.postings[i];
    if (p.token.empty()) corrupt("empty token in posting " + std::to_string(i + 1));
    if (p.tf == 0) corrupt("tf of 0 in posting " + std::to_string(i + 1));
    if (p.doc_id >= index.docs.size())
      corrupt("posting " + std::to_string(i + 1) + " references unknown doc " +
              std::to_string(p.doc_id));
    if (i > 0 && !posting_less(index.postings[i - 1], p))
      corrupt("postings not in sorted unique order at line " + std::to_string(i + 1));
    has_posting[p.doc_id] = true;
  }
  for (std::size_t i = 0; i < has_posting.size(); ++i)
    if (!has_posting[i]) corrupt("doc " + std::to_string(i) + " has no postings");
}

std::string render_skip_report(const IndexManifest& manifest) {
  std::string out;
  for (SkipReason r : kSkipReasons) {
    auto it = manifest.skip_counts.find(r);
    out += std::string(to_string(r)) + '\t' +
           std::to_string(it == manifest.skip_counts.end() ? 0 : it->second) + '\n';
  }
  return out;
}

}  // namespace onto::index
