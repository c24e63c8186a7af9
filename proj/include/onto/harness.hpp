#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "onto/crawler.hpp"
#include "onto/fetch.hpp"
#include "onto/query.hpp"
#include "onto/rdf.hpp"

namespace onto::harness {

struct CorpusEntry {
  int status = 200;
  std::optional<std::string> content_type;
  std::string body;
  int latency_ms = 0;
  std::optional<std::string> location;  // for 3xx entries
};

struct RequestRecord {
  Url url;
  PolitenessGate::Clock::time_point scheduled;  // granted slot, or issue time if none
  PolitenessGate::Clock::time_point issued;
};

/// In-memory web: a fixed URL -> response map plus an append-only request
/// log. Absent URLs fail with ConnectionFailed; an entry whose latency
/// exceeds the request timeout fails with Timeout.
class Corpus final : public Transport {
 public:
  Corpus() = default;
  Corpus(Corpus&& other) noexcept;
  Corpus& operator=(Corpus&& other) noexcept;

  void add(const Url& url, CorpusEntry entry);
  const CorpusEntry* find(const Url& url) const;
  const std::map<std::string, CorpusEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Sets every entry's latency.
  void set_latency(int latency_ms);

  RawResponse get(const Url& url, const RequestOptions& options) override;

  std::vector<RequestRecord> request_log() const;
  void clear_log();

 private:
  std::map<std::string, CorpusEntry> entries_;
  mutable std::mutex log_mu_;
  std::vector<RequestRecord> log_;
};

struct SiteSpec {
  std::uint64_t seed = 42;
  int page_count = 200;
  int ontology_count = 25;
  int max_link_depth = 4;
  int branching = 8;
  int host_count = 1;
  int latency_ms = 0;
  int cross_links = 2;  // extra page-to-page links per page

  /// Throws Error{SpecInvalid}.
  void validate() const;
};

struct GroundTruth {
  Url root;
  std::set<std::string> reachable_ontology_urls;
  // Keyed by the smallest depth of a page linking to the ontology.
  std::map<int, std::set<std::string>> ontology_urls_by_depth;
  std::map<int, std::size_t> pages_per_depth;
  std::map<std::string, rdf::OntologySummary> summaries;

  /// Ontology URLs linked from pages at depth <= max_depth (-1: all).
  std::set<std::string> ontologies_within(int max_depth) const;
};

struct Site {
  Corpus corpus;
  GroundTruth truth;
};

/// Seeded link tree of HTML pages with ontology documents in both syntaxes.
/// A pure function of the spec. Throws Error{SpecInvalid}.
Site make_synthetic_site(const SiteSpec& spec);

/// Media type by file extension (html, owl, rdf, ttl, ...).
std::optional<std::string> media_type_for_path(const std::filesystem::path& path);

/// Maps every file under `dir` to http://host/<relative path>. A directory's
/// index.html is also served at the directory URL. An optional
/// ".corpus-meta.tsv" ("path<TAB>status<TAB>content-type") overrides status
/// and media type per file. Throws Error{PathUnreadable}.
Corpus corpus_from_dir(const std::filesystem::path& dir, const std::string& host);

/// Each immediate subdirectory of `dir` is one host's corpus_from_dir().
Corpus corpus_from_host_dirs(const std::filesystem::path& dir);

/// Inverse of corpus_from_dir() for the entries of one host.
void write_corpus_dir(const Corpus& corpus, const std::string& host,
                      const std::filesystem::path& dir);

/// Ground truth as JSON.
std::string ground_truth_json(const GroundTruth& truth, const SiteSpec& spec);

/// Brute-force ranking straight from summaries, without an index.
/// Throws Error{EmptyQuery}.
std::vector<query::QueryResult> scan_oracle(const std::vector<rdf::OntologySummary>& summaries,
                                            const query::Query& query, std::size_t top_k);

/// The constructed list behind the skip-accounting check: 16 lines, whose
/// fates are 5 indexed, 2 duplicate, 2 blank/null, 2 fetch errors,
/// 2 unsupported syntax, 2 empty ontologies and 1 oversize body.
inline constexpr std::size_t kHugeFixtureBytes = 3 * 1024 * 1024 + 1;

struct SkipFixture {
  Corpus corpus;
  std::vector<std::string> lines;
};
SkipFixture make_skip_fixture();

struct BenchCell {
  int workers = 1;
  int max_pages = 500;
};

struct BenchRow {
  int workers = 0;
  int max_pages = 0;
  std::size_t ontologies_found = 0;
  std::int64_t elapsed_ms = 0;
};

struct BenchOptions {
  int politeness_ms = 0;
  int max_depth = -1;
};

/// One crawl per cell over a freshly generated site, run sequentially.
std::vector<BenchRow> run_bench(const std::vector<BenchCell>& matrix, const SiteSpec& spec,
                                const BenchOptions& options = {});

/// Parses "W:P,W:P,...". Throws Error{InvalidArgument}.
std::vector<BenchCell> parse_matrix(std::string_view text);

std::string render_bench_tsv(const std::vector<BenchRow>& rows);
std::string render_bench_table(const std::vector<BenchRow>& rows, const std::string& first_url);

}  // namespace onto::harness
