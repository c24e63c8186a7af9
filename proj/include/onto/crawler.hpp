#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onto/fetch.hpp"
#include "onto/politeness.hpp"
#include "onto/url.hpp"

namespace onto::crawl {

enum class UrlKind { OntologyCandidate, HtmlPage, Other };

std::string_view to_string(UrlKind kind) noexcept;

/// Ontology by ".rdf"/".owl" extension or an RDF media type; page by HTML media
/// type, or, with no media type, by a page-like or missing extension.
UrlKind classify_url(const Url& url, const std::optional<std::string>& content_type);

/// href of <a>/<link> and src of <frame>/<iframe>, normalized against
/// `base`, in document order with per-page duplicates and unsupported schemes
/// dropped. Tolerates malformed markup.
std::vector<Url> extract_links(std::string_view html, const Url& base);

struct CrawlConfig {
  std::vector<Url> seed_urls{Url::parse("http://www.ontologyportal.org")};
  int max_depth = -1;  // -1 = unlimited
  int max_pages = 1000;
  int worker_count = 1;
  int politeness_ms = 300;
  PolitenessGate::Scope politeness_scope = PolitenessGate::Scope::PerHost;
  std::size_t max_body_bytes = 8u << 20;
  std::chrono::milliseconds fetch_timeout{30'000};
  // Empty path: keep results in the report only.
  std::filesystem::path output_path = "urls.txt";

  /// Throws Error{InvalidArgument} naming the violated bound.
  void validate() const;
};

struct FrontierEntry {
  Url url;
  int depth = 0;
};

struct CrawlReport {
  std::size_t pages_fetched = 0;
  std::size_t ontologies_found = 0;
  std::int64_t elapsed_ms = 0;
  std::map<int, std::size_t> status_histogram;
  std::size_t errors = 0;
  CrawlConfig config_echo;
  std::vector<Url> ontology_urls;  // sorted by serialized form
};

/// Breadth-first traversal from the seeds with `worker_count` workers sharing
/// one FIFO frontier and one seen-set. Ontology candidates are recorded
/// without being fetched; at most `max_pages` fetches are issued.
/// Throws Error{InvalidArgument | OutputUnwritable | AllSeedsInvalid}.
CrawlReport crawl(const CrawlConfig& config, Transport& transport);

/// Writes one URL per line, sorted, deduplicated, LF-terminated. Returns the
/// number of lines.
std::size_t write_url_list(const std::vector<Url>& urls, const std::filesystem::path& path);

/// Fixed-width table for humans.
std::string render_table(const CrawlReport& report);
/// "key<TAB>value" lines.
std::string render_kv(const CrawlReport& report);

}  // namespace onto::crawl
