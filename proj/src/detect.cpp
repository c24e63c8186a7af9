#include <cctype>

#include "onto/rdf.hpp"
#include "xml.hpp"

namespace onto::rdf {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void skip_space(std::string_view& s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
}

bool skip_past(std::string_view& s, std::string_view terminator) {
  auto end = s.find(terminator);
  if (end == std::string_view::npos) return false;
  s.remove_prefix(end + terminator.size());
  return true;
}

bool starts_with_keyword(std::string_view s, std::string_view kw, bool case_insensitive) {
  if (s.size() <= kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    char c = case_insensitive ? static_cast<char>(std::toupper(static_cast<unsigned char>(s[i]))) : s[i];
    if (c != kw[i]) return false;
  }
  return is_space(s[kw.size()]);
}

// Skips a DOCTYPE including a bracketed internal subset.
bool skip_doctype(std::string_view& s) {
  int brackets = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '[') {
      ++brackets;
    } else if (c == ']') {
      --brackets;
    } else if (c == '>' && brackets <= 0) {
      s.remove_prefix(i + 1);
      return true;
    }
  }
  return false;
}

// True when the first element is RDF in the rdf namespace declared on it.
bool root_is_rdf(std::string_view s) {
  for (;;) {
    skip_space(s);
    if (s.starts_with("<?")) {
      if (!skip_past(s, "?>")) return false;
    } else if (s.starts_with("<!--")) {
      if (!skip_past(s, "-->")) return false;
    } else if (s.starts_with("<!DOCTYPE")) {
      if (!skip_doctype(s)) return false;
    } else {
      break;
    }
  }
  if (!s.starts_with('<')) return false;
  auto close = s.find('>');
  if (close == std::string_view::npos) return false;
  std::string tag(s.substr(0, close + 1));
  if (tag.size() >= 2 && tag[tag.size() - 2] != '/') tag.insert(tag.size() - 1, "/");
  try {
    // Parse only the start tag. Entity references in attributes may refer to
    // the DOCTYPE, so those are not expanded here.
    std::string cleaned;
    for (std::size_t i = 0; i < tag.size(); ++i) {
      if (tag[i] == '&') {
        auto semi = tag.find(';', i);
        if (semi != std::string::npos) {
          cleaned += "x";
          i = semi;
          continue;
        }
      }
      cleaned.push_back(tag[i]);
    }
    xml::Element root = xml::parse(cleaned);
    auto colon = root.qname.find(':');
    std::string prefix = colon == std::string::npos ? "" : root.qname.substr(0, colon);
    std::string local = colon == std::string::npos ? root.qname : root.qname.substr(colon + 1);
    if (local != "RDF") return false;
    std::string decl = prefix.empty() ? "xmlns" : "xmlns:" + prefix;
    for (const auto& a : root.attributes)
      if (a.qname == decl) return a.value == ns::kRdf;
    return false;
  } catch (...) {
    return false;
  }
}

}  // namespace

std::string_view to_string(Syntax s) noexcept {
  switch (s) {
    case Syntax::RdfXml: return "rdfxml";
    case Syntax::Turtle: return "turtle";
    case Syntax::Unsupported: return "unsupported";
  }
  return "unsupported";
}

Syntax detect_syntax(std::string_view body, const std::optional<std::string>& content_type) {
  if (content_type) {
    if (*content_type == "application/rdf+xml") return Syntax::RdfXml;
    if (*content_type == "text/turtle" || *content_type == "application/x-turtle")
      return Syntax::Turtle;
  }
  if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3);
  std::string_view s = body;
  skip_space(s);
  if (s.starts_with('<') && root_is_rdf(s)) return Syntax::RdfXml;
  // Turtle may open with comment lines before its first directive.
  while (s.starts_with('#')) {
    auto nl = s.find('\n');
    s = nl == std::string_view::npos ? std::string_view{} : s.substr(nl + 1);
    skip_space(s);
  }
  if (s.starts_with("@prefix") || s.starts_with("@base") || starts_with_keyword(s, "PREFIX", true) ||
      starts_with_keyword(s, "BASE", true))
    return Syntax::Turtle;
  return Syntax::Unsupported;
}

}  // namespace onto::rdf
