#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace onto {

/// An absolute, normalized http(s) address. Never carries a fragment.
struct Url {
  std::string scheme = "http";
  std::string host;
  int port = 80;
  std::string path = "/";
  std::optional<std::string> query;

  /// Parses an absolute URL and normalizes it. Throws Error{Malformed} or
  /// Error{UnsupportedScheme}.
  static Url parse(std::string_view text);

  std::string str() const;

  /// Lowercased extension of the final path segment, without the dot.
  std::string extension() const;

  auto operator<=>(const Url&) const = default;
};

int default_port(std::string_view scheme) noexcept;

/// Resolves a link attribute value against `base`: strips the fragment,
/// lowercases scheme and host, collapses "." and ".." segments and
/// percent-encodes bytes that may not appear raw in a URL.
Url normalize_url(const Url& base, std::string_view href);

}  // namespace onto

template <>
struct std::hash<onto::Url> {
  std::size_t operator()(const onto::Url& u) const noexcept {
    return std::hash<std::string>{}(u.str());
  }
};
