#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onto/fetch.hpp"
#include "onto/rdf.hpp"
#include "onto/url.hpp"

namespace onto::index {

inline constexpr int kFormatVersion = 1;
inline constexpr std::size_t kDefaultMaxOntologyBytes = 3u * 1024 * 1024;

enum class Field { Class, Property, Relation };
inline constexpr std::array<Field, 3> kFields{Field::Class, Field::Property, Field::Relation};

std::string_view to_string(Field f) noexcept;
std::optional<Field> parse_field(std::string_view s) noexcept;

enum class SkipReason {
  BlankOrNull,
  Duplicate,
  FetchError,
  UnsupportedSyntax,
  ParseError,
  EmptyOntology,
  Oversize,
};
inline constexpr std::array<SkipReason, 7> kSkipReasons{
    SkipReason::BlankOrNull,   SkipReason::Duplicate,  SkipReason::FetchError,
    SkipReason::UnsupportedSyntax, SkipReason::ParseError, SkipReason::EmptyOntology,
    SkipReason::Oversize};

std::string_view to_string(SkipReason r) noexcept;

struct IndexLimits {
  std::size_t max_ontology_bytes = kDefaultMaxOntologyBytes;
  int politeness_ms = 300;
  std::chrono::milliseconds fetch_timeout{30'000};
};

struct DocRecord {
  std::size_t doc_id = 0;
  Url url;
  std::size_t byte_size = 0;
  std::size_t class_count = 0;
  std::size_t property_count = 0;
  std::size_t relation_count = 0;
  bool operator==(const DocRecord&) const = default;
};

struct Posting {
  std::string token;
  Field field = Field::Class;
  std::size_t doc_id = 0;
  std::size_t tf = 1;
  bool operator==(const Posting&) const = default;
};

/// Canonical posting order: token, then class < property < relation, then doc.
bool posting_less(const Posting& a, const Posting& b) noexcept;

struct IndexManifest {
  int format_version = kFormatVersion;
  std::string created_at;
  std::size_t doc_count = 0;
  std::size_t posting_count = 0;
  std::size_t input_line_count = 0;
  std::map<SkipReason, std::size_t> skip_counts;  // every reason present, zero or not
  std::size_t max_ontology_bytes = kDefaultMaxOntologyBytes;

  std::size_t skipped() const noexcept;
  bool operator==(const IndexManifest&) const = default;
};

struct Index {
  std::vector<DocRecord> docs;
  std::vector<Posting> postings;
  IndexManifest manifest;
  bool operator==(const Index&) const = default;
};

/// Accumulates summaries into doc records and postings. Summaries that are
/// empty are rejected; doc ids follow insertion order.
class IndexBuilder {
 public:
  /// Returns the assigned doc id.
  std::size_t add(const rdf::OntologySummary& summary);

  /// Docs and sorted postings; the manifest counts match but skip accounting
  /// and created_at are left to the caller.
  Index finish() const;

 private:
  std::vector<DocRecord> docs_;
  std::vector<Posting> postings_;
};

/// tf for a token in one field: the number of terms whose tokenization
/// contains it.
std::map<std::string, std::size_t> field_token_counts(const std::set<std::string>& terms);

struct BuildOptions {
  std::string created_at;  // empty: current UTC time
};

struct BuildResult {
  Index index;
  // For each input line: the skip reason, or nullopt when indexed.
  std::vector<std::optional<SkipReason>> line_fates;
};

/// Indexes every URL in the list in file order, applying the skip rules, and
/// writes the index directory. Throws Error{InputUnreadable | IndexDirUnwritable}.
BuildResult build_index(const std::filesystem::path& url_list, Transport& transport,
                        const IndexLimits& limits, const std::filesystem::path& index_dir,
                        const BuildOptions& options = {});

/// Writes manifest.json, docs.tsv and postings.tsv. Throws Error{IndexDirUnwritable}.
void write_index(const std::filesystem::path& dir, const Index& index);

/// Reads and validates an index directory. Throws Error{MissingFile |
/// CorruptIndex | VersionMismatch}.
Index read_index(const std::filesystem::path& dir);

/// Checks every structural invariant of an in-memory index; throws
/// Error{CorruptIndex} naming the first violation.
void validate(const Index& index);

/// "reason<TAB>count" lines in fixed reason order.
std::string render_skip_report(const IndexManifest& manifest);

std::string utc_timestamp_now();

}  // namespace onto::index
