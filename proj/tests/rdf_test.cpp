#include <gtest/gtest.h>

#include "onto/error.hpp"
#include "onto/rdf.hpp"
#include "test_util.hpp"

using onto::Errc;
using onto::Error;
using onto::Url;
using namespace onto::rdf;
namespace t = onto::test;

namespace {

const std::string kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const std::string kOwlNs = "http://www.w3.org/2002/07/owl#";
const std::string kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
const std::string kType = kRdfNs + "type";

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::InvalidArgument;
}

std::string xml(const std::string& inner) {
  return "<rdf:RDF xmlns:rdf=\"" + kRdfNs + "\" xmlns:rdfs=\"" + kRdfsNs + "\" xmlns:owl=\"" + kOwlNs +
         "\" xmlns:ex=\"http://x/ns#\">" + inner + "</rdf:RDF>";
}

}  // namespace

TEST(DetectSyntax, Examples) {
  EXPECT_EQ(detect_syntax("<?xml version=\"1.0\"?><rdf:RDF xmlns:rdf=\"" + kRdfNs + "\"/>", std::nullopt),
            Syntax::RdfXml);
  EXPECT_EQ(detect_syntax("@prefix ex: <http://x/> .\nex:A a ex:B .", std::nullopt), Syntax::Turtle);
  EXPECT_EQ(detect_syntax("{ \"@context\": \"http://schema.org/\" }", std::nullopt), Syntax::Unsupported);
}

TEST(DetectSyntax, MediaTypeWinsAndSniffing) {
  EXPECT_EQ(detect_syntax("ex:A a ex:B .", "text/turtle"), Syntax::Turtle);
  EXPECT_EQ(detect_syntax("<x/>", "application/rdf+xml"), Syntax::RdfXml);
  EXPECT_EQ(detect_syntax("{}", "application/ld+json"), Syntax::Unsupported);
  EXPECT_EQ(detect_syntax("\xEF\xBB\xBF<!-- c --><!DOCTYPE r [<!ENTITY a 'b'>]>\n<r:RDF xmlns:r=\"" + kRdfNs + "\">",
                          "application/xml"),
            Syntax::RdfXml);
  EXPECT_EQ(detect_syntax("<rdf:RDF xmlns:rdf=\"http://wrong/\">", std::nullopt), Syntax::Unsupported);
  EXPECT_EQ(detect_syntax("# comment\nPREFIX ex: <http://x/>\n", "text/plain"), Syntax::Turtle);
  EXPECT_EQ(detect_syntax("<html><body>hi</body></html>", "text/html"), Syntax::Unsupported);
  EXPECT_EQ(detect_syntax("", std::nullopt), Syntax::Unsupported);
}

TEST(RdfXml, DescriptionWithType) {
  auto triples = parse_rdf_xml(
      xml("<rdf:Description rdf:about=\"#A\"><rdf:type rdf:resource=\"" + kOwlNs + "Class\"/></rdf:Description>"),
      Url::parse("http://x/o.owl"));
  ASSERT_EQ(triples.size(), 1u);
  EXPECT_EQ(triples[0], (Triple{Term::iri("http://x/o.owl#A"), kType, Term::iri(kOwlNs + "Class")}));
}

TEST(RdfXml, TypedNode) {
  auto triples = parse_rdf_xml(xml("<owl:Class rdf:about=\"#A\"/>"), Url::parse("http://x/o.owl"));
  ASSERT_EQ(triples.size(), 1u);
  EXPECT_EQ(triples[0], (Triple{Term::iri("http://x/o.owl#A"), kType, Term::iri(kOwlNs + "Class")}));
}

TEST(RdfXml, EmptyDocument) {
  EXPECT_TRUE(parse_rdf_xml("<rdf:RDF xmlns:rdf=\"" + kRdfNs + "\"/>", Url::parse("http://x/o.owl")).empty());
}

TEST(RdfXml, LiteralsBlanksAndAttributes) {
  auto triples = parse_rdf_xml(
      xml("<rdf:Description rdf:ID=\"a\" ex:short=\"v\" rdf:type=\"http://x/ns#T\">"
          "<ex:name xml:lang=\"fr\">nom</ex:name>"
          "<ex:n rdf:datatype=\"http://www.w3.org/2001/XMLSchema#int\">5</ex:n>"
          "<ex:link rdf:nodeID=\"b\"/>"
          "<ex:inner><ex:Thing rdf:about=\"http://y/t\"/></ex:inner>"
          "<ex:anon/>"
          "</rdf:Description>"
          "<rdf:Description rdf:nodeID=\"b\" ex:p=\"q\"/>"),
      "http://x/doc");
  std::set<Triple> got(triples.begin(), triples.end());
  auto a = Term::iri("http://x/doc#a");
  EXPECT_TRUE(got.count({a, "http://x/ns#short", Term::literal("v")}));
  EXPECT_TRUE(got.count({a, kType, Term::iri("http://x/ns#T")}));
  EXPECT_TRUE(got.count({a, "http://x/ns#name", Term::literal("nom", {}, "fr")}));
  EXPECT_TRUE(got.count({a, "http://x/ns#n", Term::literal("5", "http://www.w3.org/2001/XMLSchema#int")}));
  EXPECT_TRUE(got.count({a, "http://x/ns#inner", Term::iri("http://y/t")}));
  EXPECT_TRUE(got.count({Term::iri("http://y/t"), kType, Term::iri("http://x/ns#Thing")}));
  EXPECT_TRUE(got.count({a, "http://x/ns#anon", Term::literal("")}));
  // the same nodeID names the same blank node
  Term link_obj, b_subj;
  for (const auto& tr : triples) {
    if (tr.predicate == "http://x/ns#link") link_obj = tr.object;
    if (tr.predicate == "http://x/ns#p") b_subj = tr.subject;
  }
  EXPECT_TRUE(link_obj.is_blank());
  EXPECT_EQ(link_obj, b_subj);
  EXPECT_EQ(triples.size(), 9u);
}

TEST(RdfXml, XmlBaseAndEntities) {
  auto triples = parse_rdf_xml(
      "<!DOCTYPE rdf:RDF [<!ENTITY ex 'http://e/ns#'>]>"
      "<rdf:RDF xmlns:rdf=\"" + kRdfNs + "\" xml:base=\"http://b/base.owl\">"
      "<rdf:Description rdf:about=\"&ex;A\"><rdf:type rdf:resource=\"#C\"/></rdf:Description>"
      "</rdf:RDF>",
      "http://ignored/");
  ASSERT_EQ(triples.size(), 1u);
  EXPECT_EQ(triples[0].subject.value, "http://e/ns#A");
  EXPECT_EQ(triples[0].object.value, "http://b/base.owl#C");
}

TEST(RdfXml, UnsupportedConstructs) {
  Url base = Url::parse("http://x/o.owl");
  EXPECT_EQ(code_of([&] { parse_rdf_xml(xml("<rdf:Description><ex:p rdf:parseType=\"Resource\"/></rdf:Description>"), base); }),
            Errc::UnsupportedConstruct);
  EXPECT_EQ(code_of([&] { parse_rdf_xml(xml("<rdf:Bag><rdf:li>a</rdf:li></rdf:Bag>"), base); }),
            Errc::UnsupportedConstruct);
  EXPECT_EQ(code_of([&] { parse_rdf_xml(xml("<rdf:Description><ex:p rdf:ID=\"s\">x</ex:p></rdf:Description>"), base); }),
            Errc::UnsupportedConstruct);
}

TEST(RdfXml, MalformedXml) {
  Url base = Url::parse("http://x/o.owl");
  EXPECT_EQ(code_of([&] { parse_rdf_xml(xml("<owl:Class rdf:about=\"#A\">"), base); }), Errc::XmlMalformed);
  EXPECT_EQ(code_of([&] { parse_rdf_xml("<rdf:RDF xmlns:rdf=\"" + kRdfNs + "\"><undeclared:x/></rdf:RDF>", base); }),
            Errc::XmlMalformed);
  EXPECT_EQ(code_of([&] { parse_rdf_xml("", base); }), Errc::XmlMalformed);
  try {
    parse_rdf_xml("<rdf:RDF xmlns:rdf=\"" + kRdfNs + "\">\n\n  <a></b>", base);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("3:"), std::string::npos) << e.what();
  }
}

TEST(RdfXml, EntityExpansionBounded) {
  std::string bomb = "<!DOCTYPE r [<!ENTITY a 'aaaaaaaaaa'>";
  char prev = 'a';
  for (char c = 'b'; c <= 'k'; ++c, ++prev)
    bomb += std::string("<!ENTITY ") + c + " '&" + prev + ";&" + prev + ";&" + prev + ";&" + prev + ";&" + prev +
            ";&" + prev + ";&" + prev + ";&" + prev + ";&" + prev + ";&" + prev + ";'>";
  bomb += "]><rdf:RDF xmlns:rdf=\"" + kRdfNs + "\"><rdf:Description rdf:about=\"&k;\"/></rdf:RDF>";
  EXPECT_EQ(code_of([&] { parse_rdf_xml(bomb, "http://x/"); }), Errc::XmlMalformed);
}

TEST(Turtle, SimpleTriple) {
  auto triples = parse_turtle("@prefix ex: <http://x/> . ex:A a ex:B .", Url::parse("http://x/o.ttl"));
  ASSERT_EQ(triples.size(), 1u);
  EXPECT_EQ(triples[0], (Triple{Term::iri("http://x/A"), kType, Term::iri("http://x/B")}));
}

TEST(Turtle, ObjectList) {
  auto triples = parse_turtle("@prefix ex: <http://x/> . ex:A ex:p ex:B , ex:C .", Url::parse("http://x/o.ttl"));
  ASSERT_EQ(triples.size(), 2u);
  EXPECT_EQ(triples[0].subject, triples[1].subject);
  EXPECT_EQ(triples[0].predicate, triples[1].predicate);
  EXPECT_EQ(triples[0].object.value, "http://x/B");
  EXPECT_EQ(triples[1].object.value, "http://x/C");
}

TEST(Turtle, CollectionUnsupported) {
  EXPECT_EQ(code_of([] { parse_turtle("@prefix ex: <http://x/> . ex:A ex:p ( ex:B ) .", Url::parse("http://x/o.ttl")); }),
            Errc::UnsupportedConstruct);
  EXPECT_EQ(code_of([] { parse_turtle("@prefix ex: <http://x/> . ex:A ex:p [ ex:q ex:B ] .", Url::parse("http://x/o.ttl")); }),
            Errc::UnsupportedConstruct);
  EXPECT_EQ(code_of([] { parse_turtle("@prefix ex: <http://x/> . ex:A ex:p \"\"\"long\"\"\" .", Url::parse("http://x/o.ttl")); }),
            Errc::UnsupportedConstruct);
}

TEST(Turtle, LiteralsAndDirectives) {
  auto triples = parse_turtle(
      "PREFIX ex: <http://x/ns#>\n"
      "BASE <http://b/dir/>\n"
      "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
      "<rel> ex:s \"a\\\"b\\n\" ; ex:l 'chat'@fr ; ex:d \"5\"^^xsd:int ;\n"
      "  ex:i -12 ; ex:dec 3.5 ; ex:dbl 1e3 ; ex:b true ; ex:u <\\u0041> ; ex:k _:n1 .\n"
      "_:n1 ex:p ex:o .  # trailing comment\n",
      "http://ignored/");
  const std::string xsd = "http://www.w3.org/2001/XMLSchema#";
  ASSERT_EQ(triples.size(), 10u);
  Term s = Term::iri("http://b/dir/rel");
  EXPECT_EQ(triples[0], (Triple{s, "http://x/ns#s", Term::literal("a\"b\n")}));
  EXPECT_EQ(triples[1].object, Term::literal("chat", {}, "fr"));
  EXPECT_EQ(triples[2].object, Term::literal("5", xsd + "int"));
  EXPECT_EQ(triples[3].object, Term::literal("-12", xsd + "integer"));
  EXPECT_EQ(triples[4].object, Term::literal("3.5", xsd + "decimal"));
  EXPECT_EQ(triples[5].object, Term::literal("1e3", xsd + "double"));
  EXPECT_EQ(triples[6].object, Term::literal("true", xsd + "boolean"));
  EXPECT_EQ(triples[7].object, Term::iri("http://b/dir/A"));
  EXPECT_TRUE(triples[8].object.is_blank());
  EXPECT_EQ(triples[9].subject, triples[8].object);
}

TEST(Turtle, Errors) {
  Url base = Url::parse("http://x/o.ttl");
  EXPECT_EQ(code_of([&] { parse_turtle("nope:A a nope:B .", base); }), Errc::UndefinedPrefix);
  EXPECT_EQ(code_of([&] { parse_turtle("@prefix ex: <http://x/> . ex:A ex:p ex:B", base); }), Errc::SyntaxError);
  EXPECT_EQ(code_of([&] { parse_turtle("@prefix ex: <http://x/> . ex:A ex:p \"open .", base); }), Errc::SyntaxError);
  try {
    parse_turtle("@prefix ex: <http://x/> .\nex:A ex:p ;", base);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("2:"), std::string::npos) << e.what();
  }
}

TEST(Turtle, EmptyDocument) {
  EXPECT_TRUE(parse_turtle("# nothing\n", "http://x/").empty());
  EXPECT_TRUE(parse_turtle("", "http://x/").empty());
}

TEST(LocalName, Examples) {
  EXPECT_EQ(local_name("http://x/onto#Person"), "Person");
  EXPECT_EQ(local_name("http://x/onto/hasPart"), "hasPart");
  EXPECT_EQ(local_name("urn:isbn:123"), "urn:isbn:123");
  EXPECT_EQ(local_name("http://x/onto/"), "http://x/onto/");
}

TEST(Tokenize, Examples) {
  using V = std::vector<std::string>;
  EXPECT_EQ(tokenize("hasPart"), (V{"has", "part"}));
  EXPECT_EQ(tokenize("AgentOfOrganization"), (V{"agent", "of", "organization"}));
  EXPECT_EQ(tokenize("ISBN10"), (V{"isbn", "10"}));
}

TEST(Tokenize, Boundaries) {
  using V = std::vector<std::string>;
  EXPECT_EQ(tokenize("XMLParser"), (V{"xml", "parser"}));
  EXPECT_EQ(tokenize("part_of-whole"), (V{"part", "of", "whole"}));
  EXPECT_EQ(tokenize("Person"), (V{"person"}));
  EXPECT_EQ(tokenize("sensor2Reading"), (V{"sensor", "2", "reading"}));
  EXPECT_EQ(tokenize("__"), (V{"__"}));
  EXPECT_EQ(tokenize("urn:isbn:123"), (V{"urn", "isbn", "123"}));
  EXPECT_FALSE(tokenize("a b").empty());
}

TEST(ExtractSummary, SubclassExample) {
  // classes: the subject typed owl:Class; relations: the subClassOf object.
  std::vector<Triple> triples{
      {Term::iri("http://x/o#Student"), kType, Term::iri(kOwlNs + "Class")},
      {Term::iri("http://x/o#Student"), kRdfsNs + "subClassOf", Term::iri("http://x/o#Person")}};
  auto s = extract_summary(triples, Url::parse("http://x/o"), 10);
  EXPECT_EQ(s.classes, std::set<std::string>{"Student"});
  EXPECT_TRUE(s.properties.empty());
  EXPECT_EQ(s.relations, std::set<std::string>{"Person"});
}

TEST(ExtractSummary, UsageExample) {
  std::vector<Triple> triples{{Term::iri("http://x/o#x"), "http://x/o#hasAdvisor", Term::iri("http://x/o#y")}};
  auto s = extract_summary(triples, Url::parse("http://x/o"), 10);
  EXPECT_TRUE(s.classes.empty());
  EXPECT_TRUE(s.properties.empty());
  EXPECT_EQ(s.relations, std::set<std::string>{"hasAdvisor"});
}

TEST(ExtractSummary, Empty) {
  auto s = extract_summary({}, Url::parse("http://x/o"), 0);
  EXPECT_TRUE(s.is_empty());
  EXPECT_EQ(s.triple_count, 0u);
}

TEST(ExtractSummary, PropertiesBlanksAndReserved) {
  std::vector<Triple> triples{
      {Term::iri("http://x/o#p"), kType, Term::iri(kOwlNs + "DatatypeProperty")},
      {Term::iri("http://x/o#q"), kType, Term::iri(kRdfNs + "Property")},
      {Term::blank("b"), kType, Term::iri(kOwlNs + "Class")},
      {Term::iri("http://x/o#p"), kRdfsNs + "range", Term::blank("b")},
      {Term::iri("http://x/o#p"), kRdfsNs + "label", Term::literal("P")},
      {Term::iri("http://x/o#C"), kType, Term::iri(kRdfsNs + "Class")}};
  auto s = extract_summary(triples, Url::parse("http://x/o"), 10);
  EXPECT_EQ(s.classes, std::set<std::string>{"C"});
  EXPECT_EQ(s.properties, (std::set<std::string>{"p", "q"}));
  EXPECT_TRUE(s.relations.empty());
  EXPECT_EQ(s.triple_count, 6u);
  EXPECT_EQ(s.byte_size, 10u);
}

TEST(Fixture, BothSyntaxesParse) {
  auto a = parse_rdf_xml(t::slurp(t::fixture("rdf/university.rdf")), "http://example.org/univ");
  auto b = parse_turtle(t::slurp(t::fixture("rdf/university.ttl")), "http://example.org/univ");
  EXPECT_EQ(a.size(), 8u);
  EXPECT_EQ(b.size(), 8u);
}
