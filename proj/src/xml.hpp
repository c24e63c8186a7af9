#pragma once

// Minimal non-validating XML reader producing a small DOM. Handles the
// prolog (XML declaration, comments, PIs, DOCTYPE with internal ENTITY
// declarations), elements, attributes, character data, CDATA and character
// or entity references. Namespaces are left to the caller.

#include <string>
#include <utility>
#include <string_view>
#include <vector>

namespace onto::xml {

struct Attribute {
  std::string qname;
  std::string value;
};

struct Element {
  std::string qname;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  std::string text;             // concatenated character data
  bool has_nonspace_text = false;
  std::size_t offset = 0;  // of the '<' in the source document
};

/// Throws Error{XmlMalformed} with a "line:column:" prefix.
Element parse(std::string_view document);

/// 1-based line and column of a byte offset.
std::pair<int, int> line_column(std::string_view document, std::size_t offset);

}  // namespace onto::xml
