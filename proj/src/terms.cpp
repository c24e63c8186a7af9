#include <algorithm>
#include <cctype>

#include "onto/rdf.hpp"

namespace onto::rdf {
namespace {

enum class CharClass { Upper, Lower, Digit, Separator };

CharClass char_class(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x80) return CharClass::Lower;  // non-ASCII letters have no case here
  if (std::isupper(u)) return CharClass::Upper;
  if (std::islower(u)) return CharClass::Lower;
  if (std::isdigit(u)) return CharClass::Digit;
  return CharClass::Separator;
}

bool is_letter(CharClass c) { return c == CharClass::Upper || c == CharClass::Lower; }

}  // namespace

std::string local_name(std::string_view iri) {
  auto cut = iri.rfind('#');
  if (cut == std::string_view::npos) cut = iri.rfind('/');
  if (cut == std::string_view::npos) return std::string(iri);
  auto tail = iri.substr(cut + 1);
  return tail.empty() ? std::string(iri) : std::string(tail);
}

std::vector<std::string> tokenize(std::string_view term) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < term.size(); ++i) {
    CharClass cls = char_class(term[i]);
    CharClass prev = i > 0 ? char_class(term[i - 1]) : CharClass::Separator;
    CharClass next = i + 1 < term.size() ? char_class(term[i + 1]) : CharClass::Separator;
    switch (cls) {
      case CharClass::Separator:
        flush();
        continue;
      case CharClass::Digit:
        if (is_letter(prev)) flush();
        break;
      case CharClass::Upper:
        if (prev == CharClass::Lower || prev == CharClass::Digit) flush();
        else if (prev == CharClass::Upper && next == CharClass::Lower) flush();
        break;
      case CharClass::Lower:
        if (prev == CharClass::Digit) flush();
        break;
    }
    current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(term[i]))));
  }
  flush();
  if (tokens.empty() && !term.empty()) {
    std::string whole;
    for (char c : term) {
      auto u = static_cast<unsigned char>(c);
      whole.push_back(u <= 0x20 || u == 0x7F ? '_' : static_cast<char>(std::tolower(u)));
    }
    tokens.push_back(std::move(whole));
  }
  return tokens;
}

std::vector<std::string> default_reserved_namespaces() {
  return {std::string(ns::kRdf), std::string(ns::kRdfs), std::string(ns::kOwl),
          std::string(ns::kXsd)};
}

OntologySummary extract_summary(std::span<const Triple> triples, const Url& url,
                                std::size_t byte_size) {
  auto reserved = default_reserved_namespaces();
  return extract_summary(triples, url, byte_size, reserved);
}

OntologySummary extract_summary(std::span<const Triple> triples, const Url& url,
                                std::size_t byte_size,
                                std::span<const std::string> reserved_namespaces) {
  const std::string rdf_type = std::string(ns::kRdf) + "type";
  const std::string class_types[] = {std::string(ns::kOwl) + "Class",
                                     std::string(ns::kRdfs) + "Class"};
  const std::string property_types[] = {
      std::string(ns::kOwl) + "ObjectProperty", std::string(ns::kOwl) + "DatatypeProperty",
      std::string(ns::kOwl) + "AnnotationProperty", std::string(ns::kRdf) + "Property"};
  const std::string axioms[] = {
      std::string(ns::kRdfs) + "subClassOf", std::string(ns::kRdfs) + "subPropertyOf",
      std::string(ns::kRdfs) + "domain", std::string(ns::kRdfs) + "range"};

  auto contains = [](const auto& list, const std::string& s) {
    return std::find(std::begin(list), std::end(list), s) != std::end(list);
  };
  auto is_reserved = [&](const std::string& iri) {
    return std::any_of(reserved_namespaces.begin(), reserved_namespaces.end(),
                       [&](const std::string& ns) { return iri.starts_with(ns); });
  };
  auto add = [](std::set<std::string>& set, const std::string& iri) {
    if (!iri.empty()) set.insert(local_name(iri));
  };

  OntologySummary out;
  out.url = url;
  out.byte_size = byte_size;
  out.triple_count = triples.size();
  for (const Triple& t : triples) {
    if (t.predicate == rdf_type && t.subject.is_iri() && t.object.is_iri()) {
      if (contains(class_types, t.object.value)) add(out.classes, t.subject.value);
      if (contains(property_types, t.object.value)) add(out.properties, t.subject.value);
    }
    if (!is_reserved(t.predicate)) add(out.relations, t.predicate);
    if (t.object.is_iri() && contains(axioms, t.predicate)) add(out.relations, t.object.value);
  }
  return out;
}

}  // namespace onto::rdf
