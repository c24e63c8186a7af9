#pragma once

#include <string>
#include <string_view>

namespace onto {

// Generic RFC 3986 reference resolution over IRI strings. Unlike Url this
// accepts any scheme (urn:, file:, tag:) since RDF documents use them freely.

std::string remove_dot_segments(std::string_view path);

/// Resolves `ref` against `base`. An empty base leaves `ref` unchanged.
std::string resolve_iri(std::string_view base, std::string_view ref);

/// `iri` with any "#fragment" removed.
std::string_view strip_fragment(std::string_view iri) noexcept;

}  // namespace onto
