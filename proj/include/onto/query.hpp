#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "onto/indexer.hpp"
#include "onto/url.hpp"

namespace onto::query {

struct Query {
  std::string raw;
  std::vector<std::string> tokens;  // deduplicated, first occurrence kept
};

/// Splits on whitespace and tokenizes each keyword. Throws Error{EmptyQuery}.
Query parse_query(std::string_view raw);

enum class MatchMode { Any, All };

/// Field weights of the ranking function.
double field_weight(index::Field f) noexcept;

/// One matched (token, field) posting's share of a document score.
double contribution(index::Field f, std::size_t tf) noexcept;

struct QueryResult {
  Url url;
  double score = 0.0;
  std::map<index::Field, std::set<std::string>> matched;
};

struct ScoreLine {
  std::string token;
  index::Field field = index::Field::Class;
  std::size_t tf = 0;
  double contrib = 0.0;
};

/// Read-only view of a validated index with token lookup. Safe for
/// concurrent searches.
class SearchIndex {
 public:
  explicit SearchIndex(index::Index index);

  /// Ranked hits: score descending, then URL ascending. At most top_k.
  std::vector<QueryResult> search(const Query& query, std::size_t top_k,
                                  MatchMode mode = MatchMode::Any) const;

  /// Per (token, field) contributions for one document; they sum to that
  /// document's search() score. Throws Error{UnknownUrl}.
  std::vector<ScoreLine> explain(const Query& query, const Url& url) const;

  const index::Index& data() const noexcept { return index_; }

 private:
  std::vector<ScoreLine> score_lines(const Query& query, std::size_t doc_id) const;

  index::Index index_;
  // token -> postings for that token, in canonical order
  std::unordered_map<std::string, std::vector<const index::Posting*>> by_token_;
  std::unordered_map<std::string, std::size_t> by_url_;
};

/// Orders results the way search() does.
void sort_results(std::vector<QueryResult>& results);

/// "rank<TAB>score<TAB>url", score with 6 decimals; with `detail`, a trailing
/// "field:token,token;field:token" column.
std::string render_results(const std::vector<QueryResult>& results, bool detail);

/// "token field tf=N contrib=X" lines.
std::string render_explain(const std::vector<ScoreLine>& lines);

}  // namespace onto::query
