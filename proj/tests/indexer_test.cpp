#include <gtest/gtest.h>

#include <json.hpp>

#include "onto/error.hpp"
#include "onto/harness.hpp"
#include "onto/indexer.hpp"
#include "test_util.hpp"

using onto::Errc;
using onto::Error;
using onto::Url;
using onto::index::SkipReason;
namespace ix = onto::index;
namespace t = onto::test;

namespace {

ix::IndexLimits fast_limits() {
  ix::IndexLimits l;
  l.politeness_ms = 0;
  return l;
}

std::string write_lines(const t::TempDir& dir, const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  auto path = dir / "urls.txt";
  t::spit(path, text);
  return path.string();
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InvalidArgument;
}

ix::BuildResult build_fixture(const t::TempDir& dir, const std::string& sub = "index") {
  auto fx = onto::harness::make_skip_fixture();
  auto list = write_lines(dir, fx.lines);
  return ix::build_index(list, fx.corpus, fast_limits(), dir / sub, {"2026-01-01T00:00:00Z"});
}

}  // namespace

TEST(BuildIndex, SkipAccountingFixture) {
  t::TempDir dir;
  auto r = build_fixture(dir);
  const auto& m = r.index.manifest;
  EXPECT_EQ(m.doc_count, 5u);
  EXPECT_EQ(m.input_line_count, 16u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::Duplicate), 2u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::BlankOrNull), 2u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::FetchError), 2u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::UnsupportedSyntax), 2u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::EmptyOntology), 2u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::Oversize), 1u);
  EXPECT_EQ(m.skip_counts.at(SkipReason::ParseError), 0u);
  EXPECT_EQ(m.doc_count + m.skipped(), 16u);

  // Each line's fate, as the fixture was built.
  using F = std::optional<SkipReason>;
  std::vector<F> expected{F{},
                          F{},
                          SkipReason::BlankOrNull,
                          SkipReason::Duplicate,
                          SkipReason::FetchError,
                          SkipReason::FetchError,
                          SkipReason::BlankOrNull,
                          SkipReason::UnsupportedSyntax,
                          SkipReason::UnsupportedSyntax,
                          SkipReason::EmptyOntology,
                          SkipReason::EmptyOntology,
                          SkipReason::Oversize,
                          F{},
                          SkipReason::Duplicate,
                          F{},
                          F{}};
  EXPECT_EQ(r.line_fates, expected);
}

TEST(BuildIndex, OversizeBoundary) {
  t::TempDir dir;
  onto::harness::Corpus c;
  std::string body = "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\" "
                     "xmlns:owl=\"http://www.w3.org/2002/07/owl#\"><owl:Class rdf:about=\"http://x/o#A\"/>";
  std::string exact = body + "<!--" + std::string(ix::kDefaultMaxOntologyBytes - body.size() - 17, ' ') + "--></rdf:RDF>";
  ASSERT_EQ(exact.size(), ix::kDefaultMaxOntologyBytes);
  c.add(Url::parse("http://x/exact.owl"), {200, "application/rdf+xml", exact, 0, {}});
  c.add(Url::parse("http://x/over.owl"), {200, "application/rdf+xml", exact + " ", 0, {}});
  auto list = write_lines(dir, {"http://x/exact.owl", "http://x/over.owl"});
  auto r = ix::build_index(list, c, fast_limits(), dir / "index", {"t"});
  EXPECT_EQ(r.index.manifest.doc_count, 1u);
  EXPECT_EQ(r.line_fates[1], SkipReason::Oversize);
  EXPECT_EQ(r.index.docs[0].byte_size, ix::kDefaultMaxOntologyBytes);
}

TEST(BuildIndex, EmptyInput) {
  t::TempDir dir;
  onto::harness::Corpus c;
  auto list = write_lines(dir, {});
  auto r = ix::build_index(list, c, fast_limits(), dir / "index", {"t"});
  EXPECT_EQ(r.index.manifest.doc_count, 0u);
  EXPECT_EQ(t::slurp(dir / "index/docs.tsv"), "");
  EXPECT_EQ(t::slurp(dir / "index/postings.tsv"), "");
  auto back = ix::read_index(dir / "index");
  EXPECT_EQ(back, r.index);
}

TEST(BuildIndex, ParseErrorsAndMalformedLines) {
  t::TempDir dir;
  onto::harness::Corpus c;
  c.add(Url::parse("http://x/bad.owl"), {200, "application/rdf+xml", "<rdf:RDF", 0, {}});
  c.add(Url::parse("http://x/bad.ttl"), {200, "text/turtle", "ex:A a ex:B .", 0, {}});
  c.add(Url::parse("http://x/moved.owl"), {301, {}, "", 0, std::string("/bad.owl")});
  auto list = write_lines(dir, {"http://x/bad.owl", "http://x/bad.ttl", "not a url", "  NULL  ", "http://x/moved.owl"});
  auto r = ix::build_index(list, c, fast_limits(), dir / "index", {"t"});
  EXPECT_EQ(r.line_fates[0], SkipReason::ParseError);
  EXPECT_EQ(r.line_fates[1], SkipReason::ParseError);
  EXPECT_EQ(r.line_fates[2], SkipReason::FetchError);
  EXPECT_EQ(r.line_fates[3], SkipReason::BlankOrNull);
  EXPECT_EQ(r.line_fates[4], SkipReason::ParseError);
}

TEST(BuildIndex, InputAndOutputErrors) {
  t::TempDir dir;
  onto::harness::Corpus c;
  EXPECT_EQ(code_of([&] { ix::build_index(dir / "missing.txt", c, fast_limits(), dir / "index"); }),
            Errc::InputUnreadable);
  auto list = write_lines(dir, {});
  t::spit(dir / "file", "x");
  EXPECT_EQ(code_of([&] { ix::build_index(list, c, fast_limits(), dir / "file/index"); }), Errc::IndexDirUnwritable);
}

TEST(WriteIndex, SinglePostingLine) {
  t::TempDir dir;
  ix::IndexBuilder b;
  onto::rdf::OntologySummary s;
  s.url = Url::parse("http://x/p.owl");
  s.classes = {"Person"};
  s.byte_size = 42;
  b.add(s);
  ix::Index idx = b.finish();
  idx.manifest.created_at = "t";
  idx.manifest.input_line_count = 1;
  ix::write_index(dir.path(), idx);
  EXPECT_EQ(t::slurp(dir / "postings.tsv"), "person\tclass\t0\t1\n");
  EXPECT_EQ(t::slurp(dir / "docs.tsv"), "0\thttp://x/p.owl\t42\t1\t0\t0\n");
  auto m = nlohmann::json::parse(t::slurp(dir / "manifest.json"));
  EXPECT_EQ(m["format_version"], 1);
  EXPECT_EQ(m["doc_count"], 1);
  EXPECT_EQ(m["skip_counts"].size(), 7u);
}

TEST(WriteIndex, DeterministicRebuild) {
  t::TempDir dir;
  build_fixture(dir, "a");
  build_fixture(dir, "b");
  EXPECT_EQ(t::snapshot(dir / "a"), t::snapshot(dir / "b"));
}

TEST(FieldTokenCounts, CountsTermsNotOccurrences) {
  auto counts = ix::field_token_counts({"hasPart", "PartOfPart", "Whole"});
  EXPECT_EQ(counts.at("part"), 2u);
  EXPECT_EQ(counts.at("has"), 1u);
  EXPECT_EQ(counts.at("whole"), 1u);
}

TEST(ReadIndex, RoundTrip) {
  t::TempDir dir;
  auto r = build_fixture(dir);
  EXPECT_EQ(ix::read_index(dir / "index"), r.index);
}

TEST(ReadIndex, ShuffledPostingsAreCorrupt) {
  t::TempDir dir;
  build_fixture(dir);
  auto lines = t::lines_of(t::slurp(dir / "index/postings.tsv"));
  ASSERT_GE(lines.size(), 2u);
  std::reverse(lines.begin(), lines.end());
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  t::spit(dir / "index/postings.tsv", text);
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "index"); }), Errc::CorruptIndex);
}

TEST(ReadIndex, VersionBumpIsMismatch) {
  t::TempDir dir;
  build_fixture(dir);
  auto m = nlohmann::ordered_json::parse(t::slurp(dir / "index/manifest.json"));
  m["format_version"] = 2;
  t::spit(dir / "index/manifest.json", m.dump(2));
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "index"); }), Errc::VersionMismatch);
}

TEST(ReadIndex, StructuralFaults) {
  t::TempDir dir;
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "nothing"); }), Errc::MissingFile);
  build_fixture(dir);
  auto manifest = t::slurp(dir / "index/manifest.json");
  auto postings = t::slurp(dir / "index/postings.tsv");
  std::filesystem::remove(dir / "index/docs.tsv");
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "index"); }), Errc::MissingFile);
  build_fixture(dir);
  t::spit(dir / "index/postings.tsv", postings + "zzz\tclass\t99\t1\n");
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "index"); }), Errc::CorruptIndex);
  t::spit(dir / "index/postings.tsv", postings);
  t::spit(dir / "index/manifest.json", "{ not json");
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "index"); }), Errc::CorruptIndex);
  auto m = nlohmann::ordered_json::parse(manifest);
  m["doc_count"] = 4;
  t::spit(dir / "index/manifest.json", m.dump(2));
  EXPECT_EQ(code_of([&] { ix::read_index(dir / "index"); }), Errc::CorruptIndex);
}

TEST(SkipReport, FixedOrder) {
  t::TempDir dir;
  auto r = build_fixture(dir);
  EXPECT_EQ(ix::render_skip_report(r.index.manifest),
            "blank_or_null\t2\nduplicate\t2\nfetch_error\t2\nunsupported_syntax\t2\n"
            "parse_error\t0\nempty_ontology\t2\noversize\t1\n");
}
