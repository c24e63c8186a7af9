#include "onto/crawler.hpp"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "onto/error.hpp"

namespace onto::crawl {
namespace {

bool is_rdf_media_type(std::string_view t) {
  return t == "application/rdf+xml" || t == "text/turtle" || t == "application/x-turtle";
}

bool is_page_extension(std::string_view ext) {
  static constexpr std::string_view kPage[] = {"",    "html", "htm",  "xhtml", "shtml",
                                               "php", "asp",  "aspx", "jsp"};
  return std::find(std::begin(kPage), std::end(kPage), ext) != std::end(kPage);
}

struct SharedState {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<FrontierEntry> frontier;
  std::unordered_set<std::string> seen;
  std::set<std::string> ontologies;
  std::size_t in_flight = 0;
  std::size_t issued = 0;
  std::map<int, std::size_t> histogram;
  std::size_t errors = 0;
  std::size_t seed_successes = 0;
};

class CrawlRun {
 public:
  CrawlRun(const CrawlConfig& config, Transport& transport)
      : config_(config),
        transport_(transport),
        gate_(std::chrono::milliseconds(config.politeness_ms), config.politeness_scope) {
    options_.max_body_bytes = config.max_body_bytes;
    options_.truncate_body = true;
    options_.timeout = config.fetch_timeout;
  }

  void seed() {
    for (const Url& url : config_.seed_urls) {
      if (!state_.seen.insert(url.str()).second) continue;
      if (classify_url(url, std::nullopt) == UrlKind::OntologyCandidate) {
        state_.ontologies.insert(url.str());
        ++state_.seed_successes;
      } else {
        state_.frontier.push_back({url, 0});
      }
    }
  }

  void run() {
    if (config_.worker_count == 1) {
      worker();
      return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(static_cast<std::size_t>(config_.worker_count));
    for (int i = 0; i < config_.worker_count; ++i) workers.emplace_back([this] { worker(); });
  }

  SharedState& state() { return state_; }

 private:
  struct Outcome {
    std::optional<int> status;
    std::optional<Url> ontology;
    std::vector<Url> links;
    Url final_url;
  };

  void worker() {
    const auto budget = static_cast<std::size_t>(config_.max_pages);
    std::unique_lock lock(state_.mu);
    for (;;) {
      state_.cv.wait(lock, [&] {
        return state_.issued >= budget || !state_.frontier.empty() || state_.in_flight == 0;
      });
      if (state_.issued >= budget || state_.frontier.empty()) break;
      FrontierEntry entry = std::move(state_.frontier.front());
      state_.frontier.pop_front();
      ++state_.issued;
      ++state_.in_flight;
      lock.unlock();

      Outcome outcome = process(entry);

      lock.lock();
      merge(entry, outcome);
      --state_.in_flight;
      state_.cv.notify_all();
    }
    state_.cv.notify_all();
  }

  Outcome process(const FrontierEntry& entry) {
    Outcome out;
    out.final_url = entry.url;
    try {
      FetchResponse resp = fetch(transport_, entry.url, options_, &gate_);
      out.status = resp.status;
      out.final_url = resp.final_url;
      switch (classify_url(resp.final_url, resp.content_type)) {
        case UrlKind::OntologyCandidate:
          if (resp.status >= 200 && resp.status < 300) out.ontology = resp.final_url;
          break;
        case UrlKind::HtmlPage:
          if (resp.status >= 200 && resp.status < 300)
            out.links = extract_links(resp.body, resp.final_url);
          break;
        case UrlKind::Other:
          break;
      }
    } catch (const Error&) {
    }
    return out;
  }

  // Called with the state lock held.
  void merge(const FrontierEntry& entry, Outcome& outcome) {
    if (!outcome.status) {
      ++state_.errors;
      return;
    }
    ++state_.histogram[*outcome.status];
    if (entry.depth == 0) ++state_.seed_successes;
    state_.seen.insert(outcome.final_url.str());
    if (outcome.ontology) state_.ontologies.insert(outcome.ontology->str());

    const bool may_descend = config_.max_depth < 0 || entry.depth < config_.max_depth;
    for (Url& link : outcome.links) {
      UrlKind kind = classify_url(link, std::nullopt);
      if (kind == UrlKind::Other) continue;
      if (kind == UrlKind::HtmlPage && !may_descend) continue;
      if (!state_.seen.insert(link.str()).second) continue;
      if (kind == UrlKind::OntologyCandidate)
        state_.ontologies.insert(link.str());
      else
        state_.frontier.push_back({std::move(link), entry.depth + 1});
    }
  }

  const CrawlConfig& config_;
  Transport& transport_;
  PolitenessGate gate_;
  RequestOptions options_;
  SharedState state_;
};

}  // namespace

std::string_view to_string(UrlKind kind) noexcept {
  switch (kind) {
    case UrlKind::OntologyCandidate: return "ontology";
    case UrlKind::HtmlPage: return "page";
    case UrlKind::Other: return "other";
  }
  return "other";
}

UrlKind classify_url(const Url& url, const std::optional<std::string>& content_type) {
  const std::string ext = url.extension();
  if (ext == "rdf" || ext == "owl") return UrlKind::OntologyCandidate;
  if (content_type) {
    if (is_rdf_media_type(*content_type)) return UrlKind::OntologyCandidate;
    if (*content_type == "text/html" || *content_type == "application/xhtml+xml")
      return UrlKind::HtmlPage;
    return UrlKind::Other;
  }
  return is_page_extension(ext) ? UrlKind::HtmlPage : UrlKind::Other;
}

void CrawlConfig::validate() const {
  if (seed_urls.empty()) throw Error(Errc::InvalidArgument, "at least one seed URL is required");
  if (max_depth < -1) throw Error(Errc::InvalidArgument, "max_depth must be >= -1");
  if (max_pages < 1) throw Error(Errc::InvalidArgument, "max_pages must be >= 1");
  if (worker_count < 1) throw Error(Errc::InvalidArgument, "worker_count must be >= 1");
  if (politeness_ms < 0) throw Error(Errc::InvalidArgument, "politeness_ms must be >= 0");
  if (max_body_bytes == 0) throw Error(Errc::InvalidArgument, "max_body_bytes must be > 0");
}

CrawlReport crawl(const CrawlConfig& config, Transport& transport) {
  config.validate();
  if (!config.output_path.empty()) {
    std::ofstream probe(config.output_path, std::ios::app);
    if (!probe) throw Error(Errc::OutputUnwritable, config.output_path.string());
  }

  auto start = std::chrono::steady_clock::now();
  CrawlRun run(config, transport);
  run.seed();
  run.run();
  auto elapsed = std::chrono::steady_clock::now() - start;

  SharedState& state = run.state();
  if (state.seed_successes == 0)
    throw Error(Errc::AllSeedsInvalid, "no seed URL could be fetched");

  CrawlReport report;
  report.pages_fetched = state.issued;
  report.errors = state.errors;
  report.status_histogram = std::move(state.histogram);
  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  report.config_echo = config;
  for (const auto& s : state.ontologies) report.ontology_urls.push_back(Url::parse(s));
  report.ontologies_found = report.ontology_urls.size();
  if (!config.output_path.empty()) write_url_list(report.ontology_urls, config.output_path);
  return report;
}

std::size_t write_url_list(const std::vector<Url>& urls, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(urls.size());
  for (const Url& u : urls) lines.push_back(u.str());
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::OutputUnwritable, path.string());
  for (const auto& line : lines) out << line << '\n';
  out.flush();
  if (!out) throw Error(Errc::OutputUnwritable, path.string());
  return lines.size();
}

namespace {

std::string seeds_joined(const CrawlConfig& c) {
  std::string out;
  for (const Url& u : c.seed_urls) {
    if (!out.empty()) out += ',';
    out += u.str();
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> report_fields(const CrawlReport& r) {
  const CrawlConfig& c = r.config_echo;
  std::vector<std::pair<std::string, std::string>> kv{
      {"seed_urls", seeds_joined(c)},
      {"max_depth", std::to_string(c.max_depth)},
      {"max_pages", std::to_string(c.max_pages)},
      {"workers", std::to_string(c.worker_count)},
      {"politeness_ms", std::to_string(c.politeness_ms)},
      {"politeness_scope", c.politeness_scope == PolitenessGate::Scope::PerHost ? "host" : "global"},
      {"pages_fetched", std::to_string(r.pages_fetched)},
      {"ontologies_found", std::to_string(r.ontologies_found)},
      {"elapsed_ms", std::to_string(r.elapsed_ms)},
      {"errors", std::to_string(r.errors)},
  };
  for (const auto& [status, count] : r.status_histogram)
    kv.emplace_back("status_" + std::to_string(status), std::to_string(count));
  return kv;
}

}  // namespace

std::string render_kv(const CrawlReport& report) {
  std::string out;
  for (const auto& [k, v] : report_fields(report)) out += k + '\t' + v + '\n';
  return out;
}

std::string render_table(const CrawlReport& report) {
  std::ostringstream os;
  for (const auto& [k, v] : report_fields(report))
    os << std::left << std::setw(18) << k << ' ' << v << '\n';
  return os.str();
}

}  // namespace onto::crawl
