#include <map>
#include <optional>

#include "onto/error.hpp"
#include "onto/iri.hpp"
#include "onto/rdf.hpp"
#include "xml.hpp"

namespace onto::rdf {
namespace {

constexpr std::string_view kXmlNs = "http://www.w3.org/XML/1998/namespace";

struct Name {
  std::string ns;
  std::string local;
  std::string iri() const { return ns + local; }
  bool is_rdf(std::string_view l) const { return ns == ns::kRdf && local == l; }
};

struct Scope {
  std::map<std::string, std::string> prefixes;
  std::string base;
  std::string lang;
};

class RdfXmlReader {
 public:
  RdfXmlReader(std::string_view doc, std::string base) : doc_(doc), base_(std::move(base)) {}

  std::vector<Triple> run() {
    xml::Element root = xml::parse(doc_);
    Scope scope;
    scope.prefixes["xml"] = std::string(kXmlNs);
    scope.base = base_;
    enter(root, scope);
    Name name = element_name(root, scope);
    if (name.is_rdf("RDF")) {
      for (const xml::Element& child : root.children) node(child, scope);
    } else {
      node(root, scope);
    }
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(Errc code, const xml::Element& el, const std::string& msg) const {
    auto [line, col] = xml::line_column(doc_, el.offset);
    throw Error(code, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  // Applies xmlns, xml:base and xml:lang of `el` to `scope`.
  void enter(const xml::Element& el, Scope& scope) const {
    for (const auto& a : el.attributes) {
      if (a.qname == "xmlns")
        scope.prefixes[""] = a.value;
      else if (a.qname.starts_with("xmlns:"))
        scope.prefixes[a.qname.substr(6)] = a.value;
    }
    for (const auto& a : el.attributes) {
      if (a.qname == "xml:base")
        scope.base = std::string(strip_fragment(resolve_iri(scope.base, a.value)));
      else if (a.qname == "xml:lang")
        scope.lang = a.value;
    }
  }

  Name resolve(const xml::Element& el, std::string_view qname, const Scope& scope,
               bool is_attribute) const {
    auto colon = qname.find(':');
    std::string prefix = colon == std::string_view::npos ? "" : std::string(qname.substr(0, colon));
    std::string local(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
    if (prefix.empty() && is_attribute) return {"", local};
    auto it = scope.prefixes.find(prefix);
    if (it == scope.prefixes.end()) {
      if (prefix.empty()) return {"", local};
      fail(Errc::XmlMalformed, el, "undeclared namespace prefix '" + prefix + "'");
    }
    return {it->second, local};
  }

  Name element_name(const xml::Element& el, const Scope& scope) const {
    Name n = resolve(el, el.qname, scope, false);
    if (n.ns.empty()) fail(Errc::XmlMalformed, el, "element <" + el.qname + "> has no namespace");
    return n;
  }

  struct Attrs {
    std::optional<std::string> about, id, node_id, resource, datatype, parse_type, bag_id, type;
    std::vector<std::pair<Name, std::string>> properties;
  };

  Attrs attributes(const xml::Element& el, const Scope& scope) const {
    Attrs out;
    for (const auto& a : el.attributes) {
      if (a.qname == "xmlns" || a.qname.starts_with("xmlns:") || a.qname.starts_with("xml:"))
        continue;
      Name n = resolve(el, a.qname, scope, true);
      // Unqualified about/resource/ID are legacy spellings of the rdf: forms.
      std::string_view local = n.local;
      bool syntax = n.ns == ns::kRdf || n.ns.empty();
      if (syntax && local == "about") {
        out.about = a.value;
      } else if (syntax && local == "ID") {
        out.id = a.value;
      } else if (syntax && local == "nodeID") {
        out.node_id = a.value;
      } else if (syntax && local == "resource") {
        out.resource = a.value;
      } else if (syntax && local == "datatype") {
        out.datatype = a.value;
      } else if (syntax && local == "parseType") {
        out.parse_type = a.value;
      } else if (syntax && local == "bagID") {
        out.bag_id = a.value;
      } else if (n.ns == ns::kRdf && local == "type") {
        out.type = a.value;
      } else if (n.ns.empty()) {
        continue;
      } else if (n.ns == ns::kRdf && (local == "li" || local.starts_with('_'))) {
        fail(Errc::UnsupportedConstruct, el, "containers (rdf:" + n.local + ")");
      } else {
        out.properties.emplace_back(std::move(n), a.value);
      }
    }
    return out;
  }

  std::string fresh_blank() { return "anon#" + std::to_string(++blank_counter_); }

  std::string id_iri(const Scope& scope, const std::string& id) const {
    return std::string(strip_fragment(scope.base)) + "#" + id;
  }

  static bool is_container(const Name& n) {
    return n.ns == ns::kRdf && (n.local == "Bag" || n.local == "Seq" || n.local == "Alt");
  }

  Term node(const xml::Element& el, Scope scope) {
    enter(el, scope);
    Name name = element_name(el, scope);
    if (is_container(name))
      fail(Errc::UnsupportedConstruct, el, "containers (rdf:" + name.local + ")");
    if (name.is_rdf("li") || name.is_rdf("RDF"))
      fail(Errc::XmlMalformed, el, "rdf:" + name.local + " cannot be a node element");
    Attrs attrs = attributes(el, scope);
    if (attrs.bag_id) fail(Errc::UnsupportedConstruct, el, "reification (rdf:bagID)");
    if (attrs.parse_type) fail(Errc::UnsupportedConstruct, el, "rdf:parseType on node element");
    if (attrs.resource || attrs.datatype)
      fail(Errc::XmlMalformed, el, "rdf:resource/rdf:datatype on node element <" + el.qname + ">");
    int ids = (attrs.about ? 1 : 0) + (attrs.id ? 1 : 0) + (attrs.node_id ? 1 : 0);
    if (ids > 1) fail(Errc::XmlMalformed, el, "conflicting rdf:about/rdf:ID/rdf:nodeID");

    Term subject;
    if (attrs.about)
      subject = Term::iri(resolve_iri(scope.base, *attrs.about));
    else if (attrs.id)
      subject = Term::iri(id_iri(scope, *attrs.id));
    else if (attrs.node_id)
      subject = Term::blank(*attrs.node_id);
    else
      subject = Term::blank(fresh_blank());

    if (!name.is_rdf("Description"))
      out_.push_back({subject, std::string(ns::kRdf) + "type", Term::iri(name.iri())});
    if (attrs.type)
      out_.push_back(
          {subject, std::string(ns::kRdf) + "type", Term::iri(resolve_iri(scope.base, *attrs.type))});
    for (const auto& [pred, value] : attrs.properties)
      out_.push_back({subject, pred.iri(), Term::literal(value, {}, scope.lang)});

    if (el.has_nonspace_text) fail(Errc::XmlMalformed, el, "text inside node element <" + el.qname + ">");
    for (const xml::Element& child : el.children) property(child, subject, scope);
    return subject;
  }

  void property(const xml::Element& el, const Term& subject, Scope scope) {
    enter(el, scope);
    Name name = element_name(el, scope);
    if (name.ns == ns::kRdf && (name.local == "li" || name.local.starts_with('_')))
      fail(Errc::UnsupportedConstruct, el, "containers (rdf:" + name.local + ")");
    Attrs attrs = attributes(el, scope);
    if (attrs.parse_type)
      fail(Errc::UnsupportedConstruct, el, "rdf:parseType=\"" + *attrs.parse_type + "\"");
    if (attrs.id || attrs.bag_id)
      fail(Errc::UnsupportedConstruct, el, "reification (rdf:ID on property element)");
    if (attrs.about) fail(Errc::XmlMalformed, el, "rdf:about on property element <" + el.qname + ">");
    const std::string predicate = name.iri();

    if (!el.children.empty()) {
      if (el.children.size() > 1)
        fail(Errc::XmlMalformed, el, "property element <" + el.qname + "> has several node children");
      if (el.has_nonspace_text)
        fail(Errc::XmlMalformed, el, "mixed content in property element <" + el.qname + ">");
      if (attrs.resource || attrs.node_id || attrs.datatype || !attrs.properties.empty() || attrs.type)
        fail(Errc::XmlMalformed, el, "property element <" + el.qname + "> has both attributes and a node");
      Term object = node(el.children.front(), scope);
      out_.push_back({subject, predicate, std::move(object)});
      return;
    }

    const bool empty_property = attrs.resource || attrs.node_id || !attrs.properties.empty() ||
                                attrs.type;
    if (empty_property) {
      if (el.has_nonspace_text)
        fail(Errc::XmlMalformed, el, "text in resource-valued property <" + el.qname + ">");
      if (attrs.resource && attrs.node_id)
        fail(Errc::XmlMalformed, el, "both rdf:resource and rdf:nodeID");
      Term object = attrs.resource  ? Term::iri(resolve_iri(scope.base, *attrs.resource))
                    : attrs.node_id ? Term::blank(*attrs.node_id)
                                    : Term::blank(fresh_blank());
      out_.push_back({subject, predicate, object});
      if (attrs.type)
        out_.push_back({object, std::string(ns::kRdf) + "type",
                        Term::iri(resolve_iri(scope.base, *attrs.type))});
      for (const auto& [pred, value] : attrs.properties)
        out_.push_back({object, pred.iri(), Term::literal(value, {}, scope.lang)});
      return;
    }

    if (attrs.datatype)
      out_.push_back({subject, predicate,
                      Term::literal(el.text, resolve_iri(scope.base, *attrs.datatype), {})});
    else
      out_.push_back({subject, predicate, Term::literal(el.text, {}, scope.lang)});
  }

  std::string_view doc_;
  std::string base_;
  std::vector<Triple> out_;
  unsigned blank_counter_ = 0;
};

}  // namespace

std::vector<Triple> parse_rdf_xml(std::string_view body, std::string_view base_iri) {
  return RdfXmlReader(body, std::string(strip_fragment(base_iri))).run();
}

std::vector<Triple> parse_rdf_xml(std::string_view body, const Url& base) {
  return parse_rdf_xml(body, base.str());
}

}  // namespace onto::rdf
