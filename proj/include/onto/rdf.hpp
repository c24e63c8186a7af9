#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "onto/url.hpp"

namespace onto::rdf {

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
}  // namespace ns

struct Term {
  enum class Kind : unsigned char { Iri, Blank, Literal };

  Kind kind = Kind::Iri;
  std::string value;     // IRI, blank label (document-scoped) or lexical form
  std::string datatype;  // literals only, may be empty
  std::string language;  // literals only, may be empty

  static Term iri(std::string v) { return {Kind::Iri, std::move(v), {}, {}}; }
  static Term blank(std::string label) { return {Kind::Blank, std::move(label), {}, {}}; }
  static Term literal(std::string lexical, std::string datatype = {}, std::string lang = {}) {
    return {Kind::Literal, std::move(lexical), std::move(datatype), std::move(lang)};
  }

  bool is_iri() const noexcept { return kind == Kind::Iri; }
  bool is_blank() const noexcept { return kind == Kind::Blank; }
  bool is_literal() const noexcept { return kind == Kind::Literal; }

  auto operator<=>(const Term&) const = default;
};

/// Subjects are IRIs or blank nodes; predicates are always IRIs.
struct Triple {
  Term subject;
  std::string predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

enum class Syntax { RdfXml, Turtle, Unsupported };

std::string_view to_string(Syntax s) noexcept;

/// A recognized RDF media type wins; otherwise the body is sniffed for an
/// rdf:RDF root element or a leading Turtle directive.
Syntax detect_syntax(std::string_view body, const std::optional<std::string>& content_type);

/// RDF/XML subset: rdf:RDF root, rdf:Description and typed node elements,
/// rdf:about/ID/nodeID/resource, nested nodes, literal properties with
/// rdf:datatype and xml:lang, property attributes, xml:base.
/// Throws Error{XmlMalformed} or Error{UnsupportedConstruct} for
/// rdf:parseType, containers and reification.
std::vector<Triple> parse_rdf_xml(std::string_view body, const Url& base);
std::vector<Triple> parse_rdf_xml(std::string_view body, std::string_view base_iri);

/// Turtle subset: @prefix/@base/PREFIX/BASE, IRIs, prefixed names, "a",
/// ";" and "," lists, "_:x" labels, short string literals with ^^ and @,
/// numeric and boolean literals. Collections, "[ ]" and long strings raise
/// Error{UnsupportedConstruct}; other faults raise Error{SyntaxError} or
/// Error{UndefinedPrefix}, each with a "line:column:" prefix.
std::vector<Triple> parse_turtle(std::string_view body, const Url& base);
std::vector<Triple> parse_turtle(std::string_view body, std::string_view base_iri);

/// Text after the last '#', else after the last '/', else the whole IRI.
std::string local_name(std::string_view iri);

/// Splits a term into lowercase keyword tokens at camelCase transitions,
/// letter/digit boundaries and separator characters. An uppercase run stays
/// one token ("ISBN10" -> isbn, 10; "XMLParser" -> xml, parser). Never
/// returns an empty list for a non-empty term.
std::vector<std::string> tokenize(std::string_view term);

struct OntologySummary {
  Url url;
  std::set<std::string> classes;
  std::set<std::string> properties;
  std::set<std::string> relations;
  std::size_t triple_count = 0;
  std::size_t byte_size = 0;

  bool is_empty() const noexcept {
    return classes.empty() && properties.empty() && relations.empty();
  }
  bool operator==(const OntologySummary&) const = default;
};

/// Namespaces whose predicates are vocabulary plumbing rather than relations.
std::vector<std::string> default_reserved_namespaces();

/// classes: subjects typed owl:Class/rdfs:Class. properties: subjects typed
/// owl:ObjectProperty/DatatypeProperty/AnnotationProperty or rdf:Property.
/// relations: predicates outside the reserved namespaces, plus IRI objects of
/// rdfs:subClassOf/subPropertyOf/domain/range. Blank nodes and literals
/// never contribute names.
OntologySummary extract_summary(std::span<const Triple> triples, const Url& url,
                                std::size_t byte_size);
OntologySummary extract_summary(std::span<const Triple> triples, const Url& url,
                                std::size_t byte_size,
                                std::span<const std::string> reserved_namespaces);

}  // namespace onto::rdf
