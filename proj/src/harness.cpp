#include "onto/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "onto/error.hpp"

namespace onto::harness {
namespace fs = std::filesystem;
using Clock = PolitenessGate::Clock;

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(Corpus&& other) noexcept {
  std::lock_guard lock(other.log_mu_);
  entries_ = std::move(other.entries_);
  log_ = std::move(other.log_);
}

Corpus& Corpus::operator=(Corpus&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(log_mu_, other.log_mu_);
    entries_ = std::move(other.entries_);
    log_ = std::move(other.log_);
  }
  return *this;
}

void Corpus::add(const Url& url, CorpusEntry entry) { entries_[url.str()] = std::move(entry); }

const CorpusEntry* Corpus::find(const Url& url) const {
  auto it = entries_.find(url.str());
  return it == entries_.end() ? nullptr : &it->second;
}

void Corpus::set_latency(int latency_ms) {
  for (auto& [url, entry] : entries_) entry.latency_ms = latency_ms;
}

RawResponse Corpus::get(const Url& url, const RequestOptions& options) {
  auto issued = Clock::now();
  {
    std::lock_guard lock(log_mu_);
    log_.push_back({url, options.scheduled_at.value_or(issued), issued});
  }
  const CorpusEntry* entry = find(url);
  if (entry == nullptr) throw Error(Errc::ConnectionFailed, url.str() + " is not in the corpus");
  if (entry->latency_ms > options.timeout.count()) {
    std::this_thread::sleep_for(options.timeout);
    throw Error(Errc::Timeout, url.str());
  }
  if (entry->latency_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(entry->latency_ms));
  RawResponse out;
  out.status = entry->status;
  out.content_type = entry->content_type;
  out.location = entry->location;
  out.body = entry->body;
  if (out.body.size() > options.max_body_bytes) {
    if (!options.truncate_body)
      throw Error(Errc::BodyTooLarge, url.str() + " exceeds " +
                                          std::to_string(options.max_body_bytes) + " bytes");
    out.body.resize(options.max_body_bytes);
  }
  return out;
}

std::vector<RequestRecord> Corpus::request_log() const {
  std::lock_guard lock(log_mu_);
  return log_;
}

void Corpus::clear_log() {
  std::lock_guard lock(log_mu_);
  log_.clear();
}

// ---------------------------------------------------------------------------
// Synthetic site

void SiteSpec::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::SpecInvalid, what); };
  if (page_count < 1) bad("page_count must be >= 1");
  if (ontology_count < 0) bad("ontology_count must be >= 0");
  if (ontology_count > page_count) bad("ontology_count must not exceed page_count");
  if (max_link_depth < 0) bad("max_link_depth must be >= 0");
  if (branching < 1) bad("branching must be >= 1");
  if (host_count < 1) bad("host_count must be >= 1");
  if (latency_ms < 0) bad("latency_ms must be >= 0");
  if (cross_links < 0) bad("cross_links must be >= 0");
  // Tree capacity: sum of branching^d for d in [0, max_link_depth].
  double capacity = 0, level = 1;
  for (int d = 0; d <= max_link_depth && capacity < page_count; ++d, level *= branching)
    capacity += level;
  if (capacity < page_count)
    bad("page_count " + std::to_string(page_count) + " does not fit depth " +
        std::to_string(max_link_depth) + " with branching " + std::to_string(branching));
}

std::set<std::string> GroundTruth::ontologies_within(int max_depth) const {
  std::set<std::string> out;
  for (const auto& [depth, urls] : ontology_urls_by_depth)
    if (max_depth < 0 || depth <= max_depth) out.insert(urls.begin(), urls.end());
  return out;
}

namespace {

constexpr std::string_view kWords[] = {
    "agent",    "organization", "person",   "student",  "course",  "department", "project",
    "event",    "place",        "document", "article",  "species", "gene",       "protein",
    "vehicle",  "engine",       "sensor",   "device",   "process", "activity",   "resource",
    "service",  "product",      "market",   "region",   "river",   "mountain",   "city",
    "country",  "language",     "author",   "book",     "chapter", "music",      "album",
    "artist",   "disease",      "symptom",  "drug",     "patient", "advisor",    "member",
    "part",     "unit",         "measure",  "station",  "route",   "cell",       "tissue",
    "material"};
constexpr std::string_view kAcronyms[] = {"ISBN", "GPS", "DNA", "URL", "HTTP"};

constexpr std::string_view kUpperNs = "http://upper.example/core#";
constexpr std::string_view kFoafNs = "http://xmlns.com/foaf/0.1/";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, n); modulo bias is irrelevant at these sizes.
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 engine_;
};

std::string capitalize(std::string_view w) {
  std::string s(w);
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string word(Rng& rng) { return std::string(kWords[rng.below(std::size(kWords))]); }

std::string class_name(Rng& rng) {
  switch (rng.below(6)) {
    case 0: return capitalize(word(rng)) + capitalize(word(rng));
    case 1: return capitalize(word(rng)) + std::to_string(1 + rng.below(9));
    case 2: return std::string(kAcronyms[rng.below(std::size(kAcronyms))]) + capitalize(word(rng));
    default: return capitalize(word(rng));
  }
}

std::string property_name(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return "has" + capitalize(word(rng));
    case 1: return "is" + capitalize(word(rng)) + "Of";
    case 2: return word(rng) + "_" + word(rng);
    default: return word(rng) + capitalize(word(rng));
  }
}

std::string unique(std::set<std::string>& used, std::string name) {
  std::string candidate = name;
  for (int i = 2; !used.insert(candidate).second; ++i) candidate = name + "X" + std::to_string(i);
  return candidate;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Prefix {
  std::string_view name;
  std::string ns;
};

// Subject-grouped triples of one generated ontology.
struct Group {
  rdf::Term subject;
  std::vector<std::pair<std::string, rdf::Term>> properties;
};

std::vector<Group> group_by_subject(const std::vector<rdf::Triple>& triples) {
  std::vector<Group> groups;
  for (const auto& t : triples) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.subject == t.subject; });
    if (it == groups.end()) {
      groups.push_back({t.subject, {}});
      it = std::prev(groups.end());
    }
    it->properties.emplace_back(t.predicate, t.object);
  }
  return groups;
}

std::optional<std::string> qname(const std::vector<Prefix>& prefixes, const std::string& iri) {
  for (const auto& p : prefixes)
    if (iri.starts_with(p.ns) && iri.size() > p.ns.size())
      return std::string(p.name) + ":" + iri.substr(p.ns.size());
  return std::nullopt;
}

std::string to_rdf_xml(const std::vector<rdf::Triple>& triples, const std::vector<Prefix>& prefixes,
                       const std::string& doc_url, const std::string& doc_ns) {
  const std::string rdf_type = std::string(rdf::ns::kRdf) + "type";
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rdf:RDF";
  for (const auto& p : prefixes) os << "\n    xmlns:" << p.name << "=\"" << p.ns << '"';
  os << "\n    xml:base=\"" << doc_url << "\">\n";
  auto ref = [&](const std::string& iri) {
    return iri.starts_with(doc_ns) ? "#" + iri.substr(doc_ns.size()) : iri;
  };
  for (const Group& g : group_by_subject(triples)) {
    std::size_t first = 0;
    std::string element = "rdf:Description";
    if (!g.properties.empty() && g.properties[0].first == rdf_type &&
        g.properties[0].second.is_iri()) {
      if (auto q = qname(prefixes, g.properties[0].second.value)) {
        element = *q;
        first = 1;
      }
    }
    os << "  <" << element;
    if (g.subject.is_blank())
      os << " rdf:nodeID=\"" << g.subject.value << "\"";
    else
      os << " rdf:about=\"" << xml_escape(ref(g.subject.value)) << "\"";
    if (first == g.properties.size()) {
      os << "/>\n";
      continue;
    }
    os << ">\n";
    for (std::size_t i = first; i < g.properties.size(); ++i) {
      const auto& [pred, obj] = g.properties[i];
      std::string el = qname(prefixes, pred).value();
      os << "    <" << el;
      if (obj.is_iri()) {
        os << " rdf:resource=\"" << xml_escape(ref(obj.value)) << "\"/>\n";
      } else if (obj.is_blank()) {
        os << " rdf:nodeID=\"" << obj.value << "\"/>\n";
      } else {
        if (!obj.datatype.empty()) os << " rdf:datatype=\"" << obj.datatype << '"';
        if (!obj.language.empty()) os << " xml:lang=\"" << obj.language << '"';
        os << '>' << xml_escape(obj.value) << "</" << el << ">\n";
      }
    }
    os << "  </" << element << ">\n";
  }
  os << "</rdf:RDF>\n";
  return os.str();
}

std::string turtle_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string to_turtle(const std::vector<rdf::Triple>& triples, const std::vector<Prefix>& prefixes,
                      const std::string& doc_url) {
  const std::string rdf_type = std::string(rdf::ns::kRdf) + "type";
  std::ostringstream os;
  os << "# generated ontology\n";
  for (const auto& p : prefixes) os << "@prefix " << p.name << ": <" << p.ns << "> .\n";
  os << "@base <" << doc_url << "> .\n\n";
  auto term = [&](const rdf::Term& t) -> std::string {
    if (t.is_blank()) return "_:" + t.value;
    if (t.is_literal()) {
      std::string s = "\"" + turtle_escape(t.value) + "\"";
      if (!t.language.empty()) s += "@" + t.language;
      else if (!t.datatype.empty()) s += "^^" + qname(prefixes, t.datatype).value_or("<" + t.datatype + ">");
      return s;
    }
    if (t.value == doc_url) return "<>";
    return qname(prefixes, t.value).value_or("<" + t.value + ">");
  };
  for (const Group& g : group_by_subject(triples)) {
    os << term(g.subject);
    for (std::size_t i = 0; i < g.properties.size(); ++i) {
      const auto& [pred, obj] = g.properties[i];
      os << (i == 0 ? " " : " ;\n    ");
      os << (pred == rdf_type ? std::string("a") : qname(prefixes, pred).value()) << ' ' << term(obj);
    }
    os << " .\n";
  }
  return os.str();
}

struct GeneratedOntology {
  std::string body;
  std::string content_type;
  rdf::OntologySummary summary;
};

GeneratedOntology make_ontology(Rng& rng, const Url& url, bool turtle) {
  const std::string doc = url.str();
  const std::string ns = doc + "#";
  const std::string rdf(rdf::ns::kRdf), rdfs(rdf::ns::kRdfs), owl(rdf::ns::kOwl),
      xsd(rdf::ns::kXsd);
  const std::string type = rdf + "type";
  std::vector<rdf::Triple> t;
  rdf::OntologySummary s;
  s.url = url;
  auto iri = [](std::string v) { return rdf::Term::iri(std::move(v)); };

  t.push_back({iri(doc), type, iri(owl + "Ontology")});
  t.push_back({iri(doc), rdfs + "comment", rdf::Term::literal("Generated \"test\" ontology", {}, "en")});

  std::set<std::string> used;
  std::vector<std::string> classes;
  const std::size_t class_count = 2 + rng.below(3);
  for (std::size_t i = 0; i < class_count; ++i) {
    std::string name = unique(used, class_name(rng));
    classes.push_back(name);
    s.classes.insert(name);
    t.push_back({iri(ns + name), type, iri(owl + "Class")});
    if (i > 0) {
      const std::string& parent = classes[rng.below(i)];
      t.push_back({iri(ns + name), rdfs + "subClassOf", iri(ns + parent)});
      s.relations.insert(parent);
    } else if (rng.chance(50)) {
      t.push_back({iri(ns + name), rdfs + "subClassOf", iri(std::string(kUpperNs) + "Entity")});
      s.relations.insert("Entity");
    }
    if (rng.chance(40))
      t.push_back({iri(ns + name), rdfs + "label", rdf::Term::literal(name + " label", {}, "en")});
  }

  std::vector<std::string> object_props;
  const std::size_t prop_count = 1 + rng.below(2);
  for (std::size_t i = 0; i < prop_count; ++i) {
    std::string name = unique(used, property_name(rng));
    object_props.push_back(name);
    s.properties.insert(name);
    const std::string& domain = classes[rng.below(classes.size())];
    const std::string& range = classes[rng.below(classes.size())];
    t.push_back({iri(ns + name), type, iri(owl + "ObjectProperty")});
    t.push_back({iri(ns + name), rdfs + "domain", iri(ns + domain)});
    t.push_back({iri(ns + name), rdfs + "range", iri(ns + range)});
    s.relations.insert(domain);
    s.relations.insert(range);
  }

  std::optional<std::string> data_prop;
  if (rng.chance(60)) {
    data_prop = unique(used, property_name(rng));
    s.properties.insert(*data_prop);
    t.push_back({iri(ns + *data_prop), type, iri(owl + "DatatypeProperty")});
    t.push_back({iri(ns + *data_prop), rdfs + "range", iri(xsd + "string")});
    s.relations.insert("string");
  }
  if (rng.chance(30)) {
    std::string name = unique(used, property_name(rng));
    s.properties.insert(name);
    t.push_back({iri(ns + name), type, iri(owl + "AnnotationProperty")});
  }

  // Instance data: typed individuals, property usage and one blank node.
  const std::string first = ns + "item" + std::to_string(1 + rng.below(50));
  const std::string second = ns + "item" + std::to_string(51 + rng.below(50));
  t.push_back({iri(first), type, iri(ns + classes[0])});
  t.push_back({iri(first), ns + object_props[0], iri(second)});
  s.relations.insert(object_props[0]);
  t.push_back({iri(second), ns + object_props[0], rdf::Term::blank("node1")});
  t.push_back({rdf::Term::blank("node1"), type, iri(ns + classes.back())});
  if (data_prop) {
    t.push_back({iri(first), ns + *data_prop, rdf::Term::literal("value <" + std::to_string(rng.below(1000)) + ">", xsd + "string")});
    s.relations.insert(*data_prop);
  }
  if (rng.chance(30)) {
    t.push_back({iri(first), std::string(kFoafNs) + "knows", iri(second)});
    s.relations.insert("knows");
  }

  std::vector<Prefix> prefixes{{"rdf", rdf}, {"rdfs", rdfs}, {"owl", owl}, {"xsd", xsd},
                               {"ex", ns},   {"up", std::string(kUpperNs)},
                               {"foaf", std::string(kFoafNs)}};
  GeneratedOntology out;
  out.body = turtle ? to_turtle(t, prefixes, doc) : to_rdf_xml(t, prefixes, doc, ns);
  out.content_type = turtle ? "text/turtle" : "application/rdf+xml";
  s.triple_count = t.size();
  s.byte_size = out.body.size();
  out.summary = std::move(s);
  return out;
}

std::string host_name(int i) { return "h" + std::to_string(i) + ".example"; }

Url page_url(int id, int host, int kind) {
  Url u;
  u.host = host_name(host);
  if (id == 0) u.path = "/";
  else if (kind == 0) u.path = "/sec" + std::to_string(id) + "/";
  else u.path = "/p/" + std::to_string(id) + ".html";
  return u;
}

// How the page at `from` spells a link to `to`.
std::string link_text(const Url& from, const Url& to, Rng& rng) {
  if (from.host != to.host) return to.str();
  switch (rng.below(4)) {
    case 0: return to.str();
    case 1: return to.path + "#top";
    default: return to.path;
  }
}

}  // namespace

Site make_synthetic_site(const SiteSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto n = static_cast<std::size_t>(spec.page_count);

  std::vector<int> tree_depth(n, 0), children(n, 0);
  std::vector<Url> pages(n);
  std::vector<std::vector<std::size_t>> page_links(n);
  pages[0] = page_url(0, 0, 0);
  std::vector<std::size_t> open{0};
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t slot = rng.below(open.size());
    std::size_t parent = open[slot];
    tree_depth[i] = tree_depth[parent] + 1;
    pages[i] = page_url(static_cast<int>(i), static_cast<int>(rng.below(spec.host_count)),
                        static_cast<int>(rng.below(3)));
    page_links[parent].push_back(i);
    if (++children[parent] >= spec.branching) open.erase(open.begin() + static_cast<long>(slot));
    if (tree_depth[i] < spec.max_link_depth) open.push_back(i);
  }
  for (std::size_t i = 0; i < n && n > 1; ++i)
    for (int k = 0; k < spec.cross_links; ++k) page_links[i].push_back(rng.below(n));

  Site site;
  GroundTruth& truth = site.truth;
  truth.root = pages[0];

  // Ontologies hang off random pages; some are linked twice.
  std::vector<std::vector<std::size_t>> onto_links(n);
  std::vector<Url> ontologies;
  for (int k = 0; k < spec.ontology_count; ++k) {
    bool turtle = k % 2 == 1;
    Url u;
    u.host = host_name(static_cast<int>(rng.below(spec.host_count)));
    u.path = "/onto/" + std::to_string(k) + "/" + (turtle || k % 4 == 0 ? "ontology.owl" : "schema.rdf");
    GeneratedOntology g = make_ontology(rng, u, turtle);
    site.corpus.add(u, {200, g.content_type, std::move(g.body), spec.latency_ms, std::nullopt});
    truth.summaries.emplace(u.str(), std::move(g.summary));
    std::size_t ontology_id = ontologies.size();
    ontologies.push_back(u);
    // The root always carries one, so the depth-0 stratum is never empty.
    std::size_t linking_page = rng.below(n);
    onto_links[k == 0 ? 0 : linking_page].push_back(ontology_id);
    if (rng.chance(25)) onto_links[rng.below(n)].push_back(ontology_id);
  }

  // Pages, with a little noise that the crawler must not count.
  for (std::size_t i = 0; i < n; ++i) {
    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html><head><title>Page " << i << "</title>\n"
         << "<link rel=\"stylesheet\" href=\"/static/site.css\">\n</head>\n<body>\n"
         << "<!-- <a href=\"/commented-out.owl\">hidden</a> -->\n<ul>\n";
    const Url& self = pages[i];
    for (std::size_t child : page_links[i])
      html << "<li><a href=\"" << link_text(self, pages[child], rng) << "\">page " << child
           << "</a></li>\n";
    for (std::size_t o : onto_links[i])
      html << "<li><A HREF='" << link_text(self, ontologies[o], rng) << "'>ontology</A></li>\n";
    if (rng.chance(20)) html << "<li><a href=\"mailto:webmaster@" << self.host << "\">mail</a></li>\n";
    if (rng.chance(20)) html << "<li><a href=\"javascript:void(0)\">menu</a></li>\n";
    if (rng.chance(10)) html << "<li><a href=\"/files/table" << i << ".csv\">data</a></li>\n";
    html << "</ul>\n</body></html>\n";
    site.corpus.add(self, {200, "text/html", html.str(), spec.latency_ms, std::nullopt});
  }
  Url css;
  css.path = "/static/site.css";
  for (int h = 0; h < spec.host_count; ++h) {
    css.host = host_name(h);
    site.corpus.add(css, {200, "text/css", "body{}\n", spec.latency_ms, std::nullopt});
  }

  // Ground truth by breadth-first walk over the generated link graph.
  std::vector<int> depth(n, -1);
  std::deque<std::size_t> queue{0};
  depth[0] = 0;
  while (!queue.empty()) {
    std::size_t p = queue.front();
    queue.pop_front();
    for (std::size_t c : page_links[p]) {
      if (depth[c] < 0) {
        depth[c] = depth[p] + 1;
        queue.push_back(c);
      }
    }
  }
  std::map<std::size_t, int> onto_depth;
  for (std::size_t p = 0; p < n; ++p) {
    if (depth[p] < 0) continue;
    ++truth.pages_per_depth[depth[p]];
    for (std::size_t o : onto_links[p]) {
      auto [it, inserted] = onto_depth.try_emplace(o, depth[p]);
      if (!inserted) it->second = std::min(it->second, depth[p]);
    }
  }
  for (const auto& [o, d] : onto_depth) {
    truth.reachable_ontology_urls.insert(ontologies[o].str());
    truth.ontology_urls_by_depth[d].insert(ontologies[o].str());
  }
  return site;
}

// ---------------------------------------------------------------------------
// Corpus directories

namespace {

constexpr std::string_view kMetaFile = ".corpus-meta.tsv";

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::PathUnreadable, p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string url_path_for(const fs::path& rel) {
  std::string path = "/" + rel.generic_string();
  return path;
}

}  // namespace

std::optional<std::string> media_type_for_path(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::map<std::string, std::string> kTypes{
      {".html", "text/html"},         {".htm", "text/html"},
      {".xhtml", "application/xhtml+xml"},
      {".owl", "application/rdf+xml"}, {".rdf", "application/rdf+xml"},
      {".ttl", "text/turtle"},        {".xml", "application/xml"},
      {".jsonld", "application/ld+json"}, {".json", "application/json"},
      {".txt", "text/plain"},         {".csv", "text/csv"},
      {".css", "text/css"},           {".nt", "application/n-triples"}};
  auto it = kTypes.find(ext);
  if (it == kTypes.end()) return "application/octet-stream";
  return it->second;
}

Corpus corpus_from_dir(const fs::path& dir, const std::string& host) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(Errc::PathUnreadable, dir.string() + " is not a directory");

  std::map<std::string, std::pair<int, std::optional<std::string>>> overrides;
  if (fs::exists(dir / kMetaFile)) {
    std::istringstream meta(read_all(dir / kMetaFile));
    std::string line;
    while (std::getline(meta, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string rel, status, type;
      std::getline(fields, rel, '\t');
      std::getline(fields, status, '\t');
      std::getline(fields, type, '\t');
      int code = 200;
      std::from_chars(status.data(), status.data() + status.size(), code);
      overrides[rel] = {code, type.empty() || type == "-" ? std::nullopt : std::optional(type)};
    }
  }

  Corpus corpus;
  Url base;
  base.host = host;
  fs::recursive_directory_iterator it(dir, ec);
  if (ec) throw Error(Errc::PathUnreadable, dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), dir);
    std::string rel_s = rel.generic_string();
    if (rel_s == kMetaFile) continue;
    CorpusEntry e;
    e.body = read_all(entry.path());
    e.content_type = media_type_for_path(rel);
    if (auto o = overrides.find(rel_s); o != overrides.end()) {
      e.status = o->second.first;
      e.content_type = o->second.second;
    }
    Url u = normalize_url(base, url_path_for(rel));
    if (rel.filename() == "index.html") {
      Url dir_url = u;
      dir_url.path = dir_url.path.substr(0, dir_url.path.size() - std::string("index.html").size());
      corpus.add(dir_url, e);
    }
    corpus.add(u, std::move(e));
  }
  return corpus;
}

Corpus corpus_from_host_dirs(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(Errc::PathUnreadable, dir.string() + " is not a directory");
  Corpus all;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_directory()) continue;
    Corpus one = corpus_from_dir(entry.path(), entry.path().filename().string());
    for (const auto& [url, e] : one.entries()) all.add(Url::parse(url), e);
  }
  return all;
}

void write_corpus_dir(const Corpus& corpus, const std::string& host, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::OutputUnwritable, dir.string() + ": " + ec.message());
  std::string meta;
  for (const auto& [url_s, e] : corpus.entries()) {
    Url url = Url::parse(url_s);
    if (url.host != host || url.query) continue;
    std::string rel = url.path.substr(1);
    if (rel.empty() || rel.back() == '/') rel += "index.html";
    fs::path file = dir / fs::path(rel);
    fs::create_directories(file.parent_path(), ec);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::OutputUnwritable, file.string());
    out << e.body;
    if (e.status != 200 || e.content_type != media_type_for_path(rel))
      meta += rel + '\t' + std::to_string(e.status) + '\t' + e.content_type.value_or("-") + '\n';
  }
  if (!meta.empty()) {
    std::ofstream out(dir / kMetaFile, std::ios::binary | std::ios::trunc);
    out << meta;
  }
}

std::string ground_truth_json(const GroundTruth& truth, const SiteSpec& spec) {
  nlohmann::ordered_json j;
  j["seed_url"] = truth.root.str();
  j["spec"] = {{"seed", spec.seed},
               {"page_count", spec.page_count},
               {"ontology_count", spec.ontology_count},
               {"max_link_depth", spec.max_link_depth},
               {"branching", spec.branching},
               {"host_count", spec.host_count},
               {"latency_ms", spec.latency_ms},
               {"cross_links", spec.cross_links}};
  j["reachable_ontology_urls"] = truth.reachable_ontology_urls;
  nlohmann::ordered_json by_depth = nlohmann::ordered_json::object();
  for (const auto& [d, urls] : truth.ontology_urls_by_depth) by_depth[std::to_string(d)] = urls;
  j["ontology_urls_by_depth"] = by_depth;
  nlohmann::ordered_json pages = nlohmann::ordered_json::object();
  for (const auto& [d, c] : truth.pages_per_depth) pages[std::to_string(d)] = c;
  j["pages_per_depth"] = pages;
  nlohmann::ordered_json summaries = nlohmann::ordered_json::object();
  for (const auto& [url, s] : truth.summaries)
    summaries[url] = {{"classes", s.classes}, {"properties", s.properties}, {"relations", s.relations}};
  j["summaries"] = summaries;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Oracle

std::vector<query::QueryResult> scan_oracle(const std::vector<rdf::OntologySummary>& summaries,
                                            const query::Query& q, std::size_t top_k) {
  if (q.tokens.empty()) throw Error(Errc::EmptyQuery, "no keywords in '" + q.raw + "'");
  constexpr double kWeights[] = {3.0, 2.0, 1.0};
  std::vector<query::QueryResult> results;
  for (const auto& s : summaries) {
    const std::set<std::string>* fields[] = {&s.classes, &s.properties, &s.relations};
    query::QueryResult r;
    r.url = s.url;
    for (const std::string& token : q.tokens) {
      for (int f = 0; f < 3; ++f) {
        std::size_t tf = 0;
        for (const std::string& term : *fields[f]) {
          auto toks = rdf::tokenize(term);
          if (std::find(toks.begin(), toks.end(), token) != toks.end()) ++tf;
        }
        if (tf == 0) continue;
        r.score += kWeights[f] * (1.0 + std::log(static_cast<double>(tf)));
        r.matched[index::kFields[static_cast<std::size_t>(f)]].insert(token);
      }
    }
    if (!r.matched.empty()) results.push_back(std::move(r));
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.url.str() < b.url.str();
  });
  if (results.size() > top_k) results.resize(top_k);
  return results;
}

// ---------------------------------------------------------------------------
// Skip-accounting fixture

SkipFixture make_skip_fixture() {
  SkipFixture fx;
  const std::string host = "http://fixture.example/";
  auto add = [&](const std::string& path, int status, std::optional<std::string> type, std::string body) {
    fx.corpus.add(Url::parse(host + path), {status, std::move(type), std::move(body), 0, std::nullopt});
  };
  auto rdfxml = [](const std::string& cls) {
    return "<?xml version=\"1.0\"?>\n"
           "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
           "         xmlns:owl=\"http://www.w3.org/2002/07/owl#\">\n"
           "  <owl:Class rdf:about=\"#" + cls + "\"/>\n"
           "</rdf:RDF>\n";
  };
  auto turtle = [](const std::string& cls) {
    return "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
           "@prefix ex: <http://fixture.example/terms#> .\n"
           "ex:" + cls + " a owl:Class .\n";
  };

  add("good1.owl", 200, "application/rdf+xml", rdfxml("Person"));
  add("good2.ttl", 200, "text/turtle", turtle("StudentGroup"));
  add("gone.owl", 404, "text/html", "<html>not found</html>");
  add("data.jsonld", 200, "application/ld+json", "{ \"@context\": \"http://schema.org/\", \"@type\": \"Person\" }\n");
  add("notes.txt", 200, "text/plain", "Just some notes about ontologies.\n");
  add("empty1.rdf", 200, "application/rdf+xml",
      "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"/>\n");
  add("empty2.ttl", 200, "text/turtle",
      "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
      "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
      "<> a owl:Ontology ; rdfs:comment \"no terms here\" .\n");
  std::string huge = rdfxml("Huge");
  huge.insert(huge.size() - std::string("</rdf:RDF>\n").size(),
              "<!--" + std::string(kHugeFixtureBytes - huge.size() - 7, 'x') + "-->");
  add("huge.owl", 200, "application/rdf+xml", std::move(huge));
  add("good3.rdf", 200, "application/rdf+xml", rdfxml("ResearchProject"));
  add("good4.owl", 200, "application/rdf+xml", rdfxml("hasAdvisor"));
  add("good5.owl", 200, "text/turtle", turtle("ISBN10Code"));

  fx.lines = {
      host + "good1.owl",
      host + "good2.ttl",
      "",
      host + "good1.owl",
      host + "missing.owl",
      host + "gone.owl",
      "null",
      host + "data.jsonld",
      host + "notes.txt",
      host + "empty1.rdf",
      host + "empty2.ttl",
      host + "huge.owl",
      host + "good3.rdf",
      "HTTP://FIXTURE.example/good2.ttl#section",
      host + "good4.owl",
      host + "good5.owl",
  };
  return fx;
}

// ---------------------------------------------------------------------------
// Bench

std::vector<BenchRow> run_bench(const std::vector<BenchCell>& matrix, const SiteSpec& spec,
                                const BenchOptions& options) {
  if (matrix.empty()) throw Error(Errc::SpecInvalid, "bench matrix is empty");
  spec.validate();
  std::vector<BenchRow> rows;
  for (const BenchCell& cell : matrix) {
    Site site = make_synthetic_site(spec);
    crawl::CrawlConfig config;
    config.seed_urls = {site.truth.root};
    config.max_depth = options.max_depth;
    config.max_pages = cell.max_pages;
    config.worker_count = cell.workers;
    config.politeness_ms = options.politeness_ms;
    config.output_path.clear();
    crawl::CrawlReport report = crawl::crawl(config, site.corpus);
    rows.push_back({cell.workers, cell.max_pages, report.ontologies_found, report.elapsed_ms});
  }
  return rows;
}

std::vector<BenchCell> parse_matrix(std::string_view text) {
  std::vector<BenchCell> cells;
  auto bad = [&] { throw Error(Errc::InvalidArgument, "bad matrix '" + std::string(text) + "', expected W:P,W:P,..."); };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto colon = item.find(':');
    if (colon == std::string_view::npos) bad();
    BenchCell cell;
    auto w = item.substr(0, colon), p = item.substr(colon + 1);
    auto r1 = std::from_chars(w.data(), w.data() + w.size(), cell.workers);
    auto r2 = std::from_chars(p.data(), p.data() + p.size(), cell.max_pages);
    if (r1.ec != std::errc{} || r1.ptr != w.data() + w.size() || r2.ec != std::errc{} ||
        r2.ptr != p.data() + p.size() || cell.workers < 1 || cell.max_pages < 1)
      bad();
    cells.push_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string render_bench_tsv(const std::vector<BenchRow>& rows) {
  std::string out = "workers\tmax_pages\tontologies_found\telapsed_ms\n";
  for (const auto& r : rows)
    out += std::to_string(r.workers) + '\t' + std::to_string(r.max_pages) + '\t' +
           std::to_string(r.ontologies_found) + '\t' + std::to_string(r.elapsed_ms) + '\n';
  return out;
}

std::string render_bench_table(const std::vector<BenchRow>& rows, const std::string& first_url) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "Workers" << std::setw(12) << "Max pages" << std::setw(18)
     << "Ontologies found" << std::setw(14) << "Elapsed, ms" << "First URL\n";
  for (const auto& r : rows)
    os << std::setw(10) << r.workers << std::setw(12) << r.max_pages << std::setw(18)
       << r.ontologies_found << std::setw(14) << r.elapsed_ms << first_url << '\n';
  return os.str();
}

}  // namespace onto::harness
