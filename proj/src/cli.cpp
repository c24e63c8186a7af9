#include "onto/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "onto/crawler.hpp"
#include "onto/error.hpp"
#include "onto/harness.hpp"
#include "onto/http_transport.hpp"
#include "onto/indexer.hpp"
#include "onto/query.hpp"

namespace onto {
namespace {

namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kUsage = 1, kInput = 2, kRuntime = 3 };

struct TransportFlags {
  bool live = false;
  std::string corpus_dir;
  std::string corpus_host;
  std::string layout = "single";

  void add_to(CLI::App& app) {
    auto* l = app.add_flag("--live", live, "Fetch from the live web");
    auto* c = app.add_option("--corpus-dir", corpus_dir, "Serve fetches from a local corpus directory");
    l->excludes(c);
    app.add_option("--corpus-host", corpus_host, "Host the corpus directory is served as");
    app.add_option("--corpus-layout", layout, "single: one host; hosts: one subdirectory per host")
        ->check(CLI::IsMember({"single", "hosts"}));
  }

  // Throws Error{InvalidArgument} on a bad flag combination.
  std::unique_ptr<Transport> make(const std::string& fallback_host) const {
    if (live == !corpus_dir.empty())
      throw Error(Errc::InvalidArgument, "exactly one of --live or --corpus-dir is required");
    if (live) return std::make_unique<HttpTransport>();
    if (layout == "hosts") return std::make_unique<harness::Corpus>(harness::corpus_from_host_dirs(corpus_dir));
    std::string host = corpus_host.empty() ? fallback_host : corpus_host;
    if (host.empty()) throw Error(Errc::InvalidArgument, "--corpus-host is required with --corpus-dir");
    return std::make_unique<harness::Corpus>(harness::corpus_from_dir(corpus_dir, host));
  }
};

struct CrawlFlags {
  std::vector<std::string> seeds{"http://www.ontologyportal.org"};
  int max_depth = -1;
  int max_pages = 0;
  int workers = 1;
  int politeness_ms = 300;
  std::string scope = "host";
  std::string out = "urls.txt";

  void add_to(CLI::App& app, bool pages_required) {
    app.add_option("--seed-url", seeds, "Seed URL (repeatable)")->capture_default_str();
    app.add_option("--max-depth", max_depth, "Link depth limit, -1 for none")->capture_default_str();
    auto* p = app.add_option("--max-pages", max_pages, "Fetch budget");
    if (pages_required) p->required();
    app.add_option("--workers", workers, "Concurrent fetch workers")->capture_default_str();
    app.add_option("--politeness-ms", politeness_ms, "Minimum delay between requests to one host")
        ->capture_default_str();
    app.add_option("--politeness-scope", scope, "host or global")
        ->check(CLI::IsMember({"host", "global"}))
        ->capture_default_str();
    app.add_option("--out", out, "URL list output file")->capture_default_str();
  }

  crawl::CrawlConfig config() const {
    crawl::CrawlConfig c;
    c.seed_urls.clear();
    for (const auto& s : seeds) c.seed_urls.push_back(Url::parse(s));
    c.max_depth = max_depth;
    c.max_pages = max_pages;
    c.worker_count = workers;
    c.politeness_ms = politeness_ms;
    c.politeness_scope =
        scope == "global" ? PolitenessGate::Scope::Global : PolitenessGate::Scope::PerHost;
    c.output_path = out;
    c.validate();
    return c;
  }
};

struct IndexFlags {
  std::string urls = "urls.txt";
  std::string index_dir = "index";
  std::size_t max_bytes = index::kDefaultMaxOntologyBytes;
  int politeness_ms = 300;
  std::string created_at;

  void add_to(CLI::App& app, bool with_urls) {
    if (with_urls) app.add_option("--urls", urls, "URL list written by crawl")->capture_default_str();
    app.add_option("--index-dir", index_dir, "Index directory")->capture_default_str();
    app.add_option("--max-bytes", max_bytes, "Largest ontology body accepted")->capture_default_str();
    app.add_option("--index-politeness-ms", politeness_ms, "Minimum delay between ontology fetches to one host")
        ->capture_default_str();
    app.add_option("--created-at", created_at, "Fixed manifest timestamp (default: now)");
  }
};

struct QueryFlags {
  std::string index_dir = "index";
  std::string query;
  std::size_t top_k = 10;
  std::string format = "text";
  bool all = false;
  std::string explain;

  void add_to(CLI::App& app, bool with_index_dir) {
    if (with_index_dir) app.add_option("--index-dir", index_dir, "Index directory")->capture_default_str();
    app.add_option("--query", query, "Keywords");
    app.add_option("--top-k", top_k, "Maximum number of hits")->capture_default_str();
    app.add_option("--format", format, "text or tsv (adds matched tokens)")
        ->check(CLI::IsMember({"text", "tsv"}))
        ->capture_default_str();
    app.add_flag("--and", all, "Require every keyword to match");
    app.add_option("--explain", explain, "Print the score breakdown for one URL");
  }
};

struct SpecFlags {
  harness::SiteSpec spec;

  void add_to(CLI::App& app) {
    app.add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    app.add_option("--pages", spec.page_count, "HTML pages")->capture_default_str();
    app.add_option("--ontologies", spec.ontology_count, "Ontology documents")->capture_default_str();
    app.add_option("--max-link-depth", spec.max_link_depth, "Depth of the link tree")->capture_default_str();
    app.add_option("--branching", spec.branching, "Children per page")->capture_default_str();
    app.add_option("--hosts", spec.host_count, "Number of hosts")->capture_default_str();
    app.add_option("--latency-ms", spec.latency_ms, "Response latency")->capture_default_str();
    app.add_option("--cross-links", spec.cross_links, "Extra links per page")->capture_default_str();
  }
};

int exit_code(Errc code) {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::UnsupportedScheme:
    case Errc::Malformed:
    case Errc::SpecInvalid:
    case Errc::EmptyQuery:
      return kUsage;
    case Errc::OutputUnwritable:
    case Errc::InputUnreadable:
    case Errc::IndexDirUnwritable:
    case Errc::MissingFile:
    case Errc::CorruptIndex:
    case Errc::VersionMismatch:
    case Errc::PathUnreadable:
    case Errc::UnknownUrl:
      return kInput;
    default:
      return kRuntime;
  }
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int crawl(const CrawlFlags& cf, const TransportFlags& tf, const std::string& format) {
    crawl::CrawlConfig config = cf.config();
    auto transport = tf.make(config.seed_urls.front().host);
    crawl::CrawlReport report = crawl::crawl(config, *transport);
    out_ << (format == "tsv" ? crawl::render_kv(report) : crawl::render_table(report));
    err_ << "wrote " << report.ontology_urls.size() << " URLs to " << config.output_path.string() << '\n';
    return kOk;
  }

  int index(const IndexFlags& xf, const TransportFlags& tf, const std::string& fallback_host) {
    if (!fs::exists(xf.urls)) {
      err_ << "error: URL list '" << xf.urls << "' does not exist; run `onto-seeker crawl` first\n";
      return kInput;
    }
    auto transport = tf.make(fallback_host);
    index::IndexLimits limits;
    limits.max_ontology_bytes = xf.max_bytes;
    limits.politeness_ms = xf.politeness_ms;
    index::BuildOptions options;
    options.created_at = xf.created_at;
    index::BuildResult result = index::build_index(xf.urls, *transport, limits, xf.index_dir, options);
    const auto& m = result.index.manifest;
    out_ << "input_lines\t" << m.input_line_count << "\ndoc_count\t" << m.doc_count
         << "\nposting_count\t" << m.posting_count << "\nskipped\t" << m.skipped() << '\n'
         << index::render_skip_report(m);
    return kOk;
  }

  int query(const QueryFlags& qf, const std::string& index_dir) {
    index::Index idx;
    try {
      idx = index::read_index(index_dir);
    } catch (const Error& e) {
      err_ << "error: " << e.what() << "; run `onto-seeker index` first\n";
      return kInput;
    }
    query::Query q = query::parse_query(qf.query);
    query::SearchIndex search(std::move(idx));
    if (!qf.explain.empty()) {
      out_ << query::render_explain(search.explain(q, Url::parse(qf.explain)));
      return kOk;
    }
    auto hits = search.search(q, qf.top_k, qf.all ? query::MatchMode::All : query::MatchMode::Any);
    out_ << query::render_results(hits, qf.format == "tsv");
    return kOk;
  }

  int gen_corpus(const harness::SiteSpec& spec, const std::string& out_dir) {
    harness::Site site = harness::make_synthetic_site(spec);
    fs::path site_dir = fs::path(out_dir) / "site";
    if (spec.host_count == 1) {
      harness::write_corpus_dir(site.corpus, site.truth.root.host, site_dir);
    } else {
      for (int h = 0; h < spec.host_count; ++h) {
        std::string host = "h" + std::to_string(h) + ".example";
        harness::write_corpus_dir(site.corpus, host, site_dir / host);
      }
    }
    fs::path truth_path = fs::path(out_dir) / "ground_truth.json";
    std::ofstream truth(truth_path, std::ios::binary | std::ios::trunc);
    if (!truth) throw Error(Errc::OutputUnwritable, truth_path.string());
    truth << harness::ground_truth_json(site.truth, spec);
    out_ << "corpus\t" << site_dir.string() << "\nseed_url\t" << site.truth.root.str() << "\nentries\t"
         << site.corpus.size() << "\nreachable_ontologies\t" << site.truth.reachable_ontology_urls.size()
         << "\nground_truth\t" << truth_path.string() << '\n';
    return kOk;
  }

  int bench(const std::string& matrix, const harness::SiteSpec& spec,
            const harness::BenchOptions& options, const std::string& format) {
    auto cells = harness::parse_matrix(matrix);
    auto rows = harness::run_bench(cells, spec, options);
    if (format == "tsv")
      out_ << harness::render_bench_tsv(rows);
    else
      out_ << harness::render_bench_table(rows, "http://h0.example/");
    return kOk;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ontology crawler, indexer and keyword search", "onto-seeker"};
  app.set_version_flag("--version", std::string(ONTO_SEEKER_VERSION));
  app.require_subcommand(1);

  TransportFlags crawl_tf, index_tf, pipe_tf;
  CrawlFlags crawl_cf, pipe_cf;
  IndexFlags index_xf, pipe_xf;
  QueryFlags query_qf, pipe_qf;
  SpecFlags gen_sf, bench_sf;
  std::string crawl_format = "table", gen_out = "corpus", matrix, bench_format = "table";
  harness::BenchOptions bench_opts;

  auto* crawl_cmd = app.add_subcommand("crawl", "Collect ontology URLs into a list file");
  crawl_tf.add_to(*crawl_cmd);
  crawl_cf.add_to(*crawl_cmd, true);
  crawl_cmd->add_option("--format", crawl_format, "table or tsv")->check(CLI::IsMember({"table", "tsv"}));

  auto* index_cmd = app.add_subcommand("index", "Fetch listed ontologies and write the index");
  index_tf.add_to(*index_cmd);
  index_xf.add_to(*index_cmd, true);

  auto* query_cmd = app.add_subcommand("query", "Search an index by keywords");
  query_qf.add_to(*query_cmd, true);
  query_cmd->get_option("--query")->required();

  auto* pipe_cmd = app.add_subcommand("pipeline", "crawl, then index, then optionally query");
  pipe_tf.add_to(*pipe_cmd);
  pipe_cf.add_to(*pipe_cmd, true);
  pipe_xf.add_to(*pipe_cmd, false);
  pipe_qf.add_to(*pipe_cmd, false);

  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic site and its ground truth");
  gen_sf.add_to(*gen_cmd);
  gen_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Crawl synthetic sites over a workers:pages matrix");
  bench_sf.add_to(*bench_cmd);
  bench_cmd->add_option("--matrix", matrix, "W:P,W:P,...")->required();
  bench_cmd->add_option("--politeness-ms", bench_opts.politeness_ms, "Politeness delay")->capture_default_str();
  bench_cmd->add_option("--max-depth", bench_opts.max_depth, "Link depth limit")->capture_default_str();
  bench_cmd->add_option("--format", bench_format, "table or tsv")->check(CLI::IsMember({"table", "tsv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Runner run(out, err);
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "crawl") return run.crawl(crawl_cf, crawl_tf, crawl_format);
    if (command == "index") return run.index(index_xf, index_tf, "");
    if (command == "query") return run.query(query_qf, query_qf.index_dir);
    if (command == "gen-corpus") return run.gen_corpus(gen_sf.spec, gen_out);
    if (command == "bench") return run.bench(matrix, bench_sf.spec, bench_opts, bench_format);

    // pipeline: each stage runs only if the previous one succeeded.
    std::string stage = "crawl";
    try {
      pipe_xf.urls = pipe_cf.out;
      int rc = run.crawl(pipe_cf, pipe_tf, "table");
      if (rc != kOk) return rc;
      stage = "index";
      rc = run.index(pipe_xf, pipe_tf, Url::parse(pipe_cf.seeds.front()).host);
      if (rc != kOk || pipe_qf.query.empty()) return rc;
      stage = "query";
      return run.query(pipe_qf, pipe_xf.index_dir);
    } catch (const Error& e) {
      err << "error: " << stage << " stage: " << e.what() << '\n';
      return exit_code(e.code());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace onto
