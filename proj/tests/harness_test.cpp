#include <gtest/gtest.h>

#include <deque>
#include <regex>

#include "onto/crawler.hpp"
#include "onto/error.hpp"
#include "onto/harness.hpp"
#include "onto/indexer.hpp"
#include "test_util.hpp"

using onto::Errc;
using onto::Error;
using onto::Url;
namespace h = onto::harness;
namespace t = onto::test;

namespace {

// Walks the corpus with a regex href scan and a hand-rolled resolver for the
// three link spellings the generator uses, independent of the crawler.
struct Walk {
  std::set<std::string> ontologies;
  std::map<std::string, int> ontology_depth;
};

Walk walk_corpus(const h::Corpus& corpus, const std::string& root) {
  static const std::regex href(R"re(href\s*=\s*["']([^"']*)["'])re", std::regex::icase);
  Walk w;
  std::map<std::string, int> depth{{root, 0}};
  std::deque<std::string> queue{root};
  while (!queue.empty()) {
    std::string page = queue.front();
    queue.pop_front();
    auto it = corpus.entries().find(page);
    if (it == corpus.entries().end() || it->second.content_type != "text/html") continue;
    std::string host = page.substr(0, page.find('/', 7));
    const std::string& body = it->second.body;
    std::string no_comments = std::regex_replace(body, std::regex("<!--[\\s\\S]*?-->"), "");
    for (std::sregex_iterator m(no_comments.begin(), no_comments.end(), href), end; m != end; ++m) {
      std::string target = (*m)[1];
      if (target.rfind("mailto:", 0) == 0 || target.rfind("javascript:", 0) == 0) continue;
      target = target.substr(0, target.find('#'));
      if (target.rfind("http", 0) != 0) target = host + target;
      bool onto = target.ends_with(".owl") || target.ends_with(".rdf");
      if (onto) {
        w.ontologies.insert(target);
        auto [d, fresh] = w.ontology_depth.try_emplace(target, depth[page]);
        if (!fresh) d->second = std::min(d->second, depth[page]);
      } else if (!depth.count(target)) {
        depth[target] = depth[page] + 1;
        queue.push_back(target);
      }
    }
  }
  return w;
}

}  // namespace

TEST(SyntheticSite, Deterministic) {
  auto a = h::make_synthetic_site({});
  auto b = h::make_synthetic_site({});
  ASSERT_EQ(a.corpus.size(), b.corpus.size());
  for (const auto& [url, e] : a.corpus.entries()) {
    ASSERT_TRUE(b.corpus.entries().count(url));
    EXPECT_EQ(e.body, b.corpus.entries().at(url).body);
    EXPECT_EQ(e.content_type, b.corpus.entries().at(url).content_type);
  }
  h::SiteSpec other;
  other.seed = 43;
  auto c = h::make_synthetic_site(other);
  EXPECT_NE(c.truth.summaries.begin()->second, a.truth.summaries.begin()->second);
}

TEST(SyntheticSite, SinglePage) {
  h::SiteSpec spec;
  spec.page_count = 1;
  spec.ontology_count = 0;
  auto site = h::make_synthetic_site(spec);
  EXPECT_TRUE(site.truth.reachable_ontology_urls.empty());
  EXPECT_TRUE(site.truth.summaries.empty());
  EXPECT_TRUE(site.corpus.find(site.truth.root) != nullptr);
  EXPECT_EQ(site.truth.pages_per_depth.at(0), 1u);
}

TEST(SyntheticSite, GroundTruthMatchesIndependentWalk) {
  h::SiteSpec spec;
  spec.seed = 42;
  spec.page_count = 200;
  spec.ontology_count = 25;
  spec.max_link_depth = 4;
  auto site = h::make_synthetic_site(spec);
  EXPECT_EQ(site.truth.reachable_ontology_urls.size(), 25u);
  auto w = walk_corpus(site.corpus, site.truth.root.str());
  EXPECT_EQ(w.ontologies, site.truth.reachable_ontology_urls);
  for (const auto& [d, urls] : site.truth.ontology_urls_by_depth)
    for (const auto& u : urls) EXPECT_EQ(w.ontology_depth.at(u), d) << u;
}

TEST(SyntheticSite, SummariesMatchParsedDocuments) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    h::SiteSpec spec;
    spec.seed = seed;
    spec.host_count = 2;
    auto site = h::make_synthetic_site(spec);
    std::size_t turtle = 0, xml = 0;
    for (const auto& [url, expected] : site.truth.summaries) {
      const auto* e = site.corpus.find(Url::parse(url));
      ASSERT_NE(e, nullptr);
      auto syntax = onto::rdf::detect_syntax(e->body, e->content_type);
      auto triples = syntax == onto::rdf::Syntax::Turtle ? onto::rdf::parse_turtle(e->body, Url::parse(url))
                                                         : onto::rdf::parse_rdf_xml(e->body, Url::parse(url));
      (syntax == onto::rdf::Syntax::Turtle ? turtle : xml)++;
      auto got = onto::rdf::extract_summary(triples, Url::parse(url), e->body.size());
      EXPECT_EQ(got, expected) << url;
    }
    EXPECT_GT(turtle, 0u);
    EXPECT_GT(xml, 0u);
  }
}

TEST(SyntheticSite, TermsAreMultiToken) {
  auto site = h::make_synthetic_site({});
  std::size_t multi = 0, total = 0;
  for (const auto& [url, s] : site.truth.summaries)
    for (const auto& c : s.classes) {
      ++total;
      if (onto::rdf::tokenize(c).size() > 1) ++multi;
    }
  EXPECT_GT(multi, 0u);
  EXPECT_GT(total, multi);
}

TEST(SyntheticSite, InvalidSpecs) {
  auto invalid = [](auto mutate) {
    h::SiteSpec spec;
    mutate(spec);
    try {
      h::make_synthetic_site(spec);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::SpecInvalid);
    }
  };
  invalid([](auto& s) { s.ontology_count = s.page_count + 1; });
  invalid([](auto& s) { s.page_count = 0; });
  invalid([](auto& s) { s.max_link_depth = 1, s.branching = 2; });
  invalid([](auto& s) { s.host_count = 0; });
}

TEST(CorpusFromDir, Examples) {
  t::TempDir dir;
  t::spit(dir / "a.html", "<p>");
  t::spit(dir / "b.owl", "<rdf:RDF/>");
  auto c = h::corpus_from_dir(dir.path(), "h.example");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.find(Url::parse("http://h.example/a.html"))->content_type, "text/html");
  EXPECT_EQ(c.find(Url::parse("http://h.example/b.owl"))->content_type, "application/rdf+xml");

  t::TempDir empty;
  EXPECT_EQ(h::corpus_from_dir(empty.path(), "h.example").size(), 0u);

  t::TempDir nested;
  t::spit(nested / "x/y.ttl", "");
  auto n = h::corpus_from_dir(nested.path(), "h.example");
  ASSERT_NE(n.find(Url::parse("http://h.example/x/y.ttl")), nullptr);
  EXPECT_EQ(n.find(Url::parse("http://h.example/x/y.ttl"))->content_type, "text/turtle");

  try {
    h::corpus_from_dir(dir / "absent", "h.example");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PathUnreadable);
  }
}

TEST(CorpusFromDir, IndexAliasAndMetaSidecar) {
  t::TempDir dir;
  t::spit(dir / "index.html", "home");
  t::spit(dir / "gone.owl", "");
  t::spit(dir / "turtle.owl", "@prefix a: <http://a/> .");
  t::spit(dir / ".corpus-meta.tsv", "gone.owl\t404\ttext/html\nturtle.owl\t200\ttext/turtle\n");
  auto c = h::corpus_from_dir(dir.path(), "h.example");
  EXPECT_EQ(c.find(Url::parse("http://h.example/"))->body, "home");
  EXPECT_EQ(c.find(Url::parse("http://h.example/gone.owl"))->status, 404);
  EXPECT_EQ(c.find(Url::parse("http://h.example/turtle.owl"))->content_type, "text/turtle");
  EXPECT_EQ(c.find(Url::parse("http://h.example/.corpus-meta.tsv")), nullptr);
}

TEST(CorpusDir, WriteThenReadRoundTrips) {
  h::SiteSpec spec;
  spec.host_count = 2;
  auto site = h::make_synthetic_site(spec);
  t::TempDir dir;
  h::write_corpus_dir(site.corpus, "h0.example", dir / "h0.example");
  h::write_corpus_dir(site.corpus, "h1.example", dir / "h1.example");
  auto back = h::corpus_from_host_dirs(dir.path());
  for (const auto& [url, e] : site.corpus.entries()) {
    const auto* b = back.find(Url::parse(url));
    ASSERT_NE(b, nullptr) << url;
    EXPECT_EQ(b->body, e.body);
    EXPECT_EQ(b->content_type, e.content_type) << url;
    EXPECT_EQ(b->status, e.status);
  }
}

TEST(CorpusTransport, LogsEveryRequest) {
  h::Corpus c;
  c.add(Url::parse("http://a/x"), {200, "text/html", "", 0, {}});
  onto::RequestOptions opts;
  c.get(Url::parse("http://a/x"), opts);
  EXPECT_THROW(c.get(Url::parse("http://a/y"), opts), Error);
  auto log = c.request_log();
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].url.str(), "http://a/y");
  c.clear_log();
  EXPECT_TRUE(c.request_log().empty());
}

TEST(ScanOracle, Examples) {
  onto::rdf::OntologySummary s;
  s.url = Url::parse("http://x/a.owl");
  s.classes = {"Person"};
  auto hits = h::scan_oracle({s}, onto::query::parse_query("person"), 10);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_DOUBLE_EQ(hits[0].score, 3.0);
  EXPECT_TRUE(h::scan_oracle({}, onto::query::parse_query("person"), 10).empty());
  EXPECT_THROW(h::scan_oracle({s}, onto::query::Query{"", {}}, 10), Error);
}

TEST(ScanOracle, AgreesWithSearchOnGeneratedCorpus) {
  auto site = h::make_synthetic_site({});
  onto::index::IndexBuilder b;
  std::vector<onto::rdf::OntologySummary> summaries;
  for (const auto& [url, s] : site.truth.summaries) {
    b.add(s);
    summaries.push_back(s);
  }
  auto idx = b.finish();
  idx.manifest.input_line_count = summaries.size();
  onto::query::SearchIndex search(idx);
  for (const char* text : {"person", "has part", "isbn", "entity string", "of"}) {
    auto query = onto::query::parse_query(text);
    auto got = search.search(query, 10);
    auto want = h::scan_oracle(summaries, query, 10);
    ASSERT_EQ(got.size(), want.size()) << text;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].url, want[i].url);
      EXPECT_NEAR(got[i].score, want[i].score, 1e-9);
    }
  }
}

TEST(SkipFixture, Shape) {
  auto fx = h::make_skip_fixture();
  EXPECT_EQ(fx.lines.size(), 16u);
  const auto* huge = fx.corpus.find(Url::parse("http://fixture.example/huge.owl"));
  ASSERT_NE(huge, nullptr);
  EXPECT_EQ(huge->body.size(), onto::index::kDefaultMaxOntologyBytes + 1);
}

TEST(Bench, EqualCountsOnUnboundedBudget) {
  auto rows = h::run_bench({{1, 500}, {2, 500}}, {});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].ontologies_found, rows[1].ontologies_found);
  EXPECT_EQ(rows[0].ontologies_found, 25u);
  EXPECT_EQ(rows[1].workers, 2);
}

TEST(Bench, ParallelFetchOverlaps) {
  h::SiteSpec spec;
  spec.page_count = 60;
  spec.ontology_count = 5;
  spec.latency_ms = 10;
  auto rows = h::run_bench({{1, 500}, {4, 500}}, spec);
  EXPECT_LT(rows[1].elapsed_ms, rows[0].elapsed_ms);
}

TEST(Bench, RenderAndParse) {
  auto cells = h::parse_matrix("1:500,2:1000,4:7000");
  ASSERT_EQ(cells.size(), 3u);
  EXPECT_EQ(cells[2].workers, 4);
  EXPECT_EQ(cells[2].max_pages, 7000);
  for (const char* bad : {"", "1", "1:", "a:5", "0:5", "1:5,", "1:5:6"}) EXPECT_THROW(h::parse_matrix(bad), Error) << bad;
  EXPECT_THROW(h::run_bench({}, {}), Error);
  std::vector<h::BenchRow> rows{{1, 500, 25, 12}};
  EXPECT_EQ(h::render_bench_tsv(rows), "workers\tmax_pages\tontologies_found\telapsed_ms\n1\t500\t25\t12\n");
  EXPECT_NE(h::render_bench_table(rows, "http://h0.example/").find("http://h0.example/"), std::string::npos);
}
