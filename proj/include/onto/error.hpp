#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace onto {

enum class Errc {
  InvalidArgument,
  // net
  UnsupportedScheme,
  Malformed,
  Timeout,
  ConnectionFailed,
  TooManyRedirects,
  BodyTooLarge,
  // crawler
  OutputUnwritable,
  AllSeedsInvalid,
  // rdf
  XmlMalformed,
  UnsupportedConstruct,
  SyntaxError,
  UndefinedPrefix,
  // indexer
  InputUnreadable,
  IndexDirUnwritable,
  MissingFile,
  CorruptIndex,
  VersionMismatch,
  // query
  EmptyQuery,
  UnknownUrl,
  // harness
  SpecInvalid,
  PathUnreadable,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure surfaced by the library. The message names the violated
/// rule or, for parsers, carries a "line:column:" prefix.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace onto
