#include "onto/query.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "onto/error.hpp"
#include "onto/rdf.hpp"

namespace onto::query {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Up to six decimals, trailing zeros trimmed but one kept: 3.0, 4.386294.
std::string short_decimal(double v) {
  std::string s = fixed6(v);
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

}  // namespace

Query parse_query(std::string_view raw) {
  Query q;
  q.raw = std::string(raw);
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t start = i;
    while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    if (start == i) continue;
    for (auto& tok : rdf::tokenize(raw.substr(start, i - start)))
      if (seen.insert(tok).second) q.tokens.push_back(std::move(tok));
  }
  if (q.tokens.empty()) throw Error(Errc::EmptyQuery, "no keywords in '" + q.raw + "'");
  return q;
}

double field_weight(index::Field f) noexcept {
  switch (f) {
    case index::Field::Class: return 3.0;
    case index::Field::Property: return 2.0;
    case index::Field::Relation: return 1.0;
  }
  return 0.0;
}

double contribution(index::Field f, std::size_t tf) noexcept {
  return field_weight(f) * (1.0 + std::log(static_cast<double>(tf)));
}

SearchIndex::SearchIndex(index::Index idx) : index_(std::move(idx)) {
  index::validate(index_);
  for (const auto& p : index_.postings) by_token_[p.token].push_back(&p);
  for (const auto& d : index_.docs) by_url_.emplace(d.url.str(), d.doc_id);
}

std::vector<ScoreLine> SearchIndex::score_lines(const Query& query, std::size_t doc_id) const {
  std::vector<ScoreLine> lines;
  for (const std::string& token : query.tokens) {
    auto it = by_token_.find(token);
    if (it == by_token_.end()) continue;
    for (const index::Posting* p : it->second)
      if (p->doc_id == doc_id) lines.push_back({token, p->field, p->tf, contribution(p->field, p->tf)});
  }
  return lines;
}

std::vector<QueryResult> SearchIndex::search(const Query& query, std::size_t top_k,
                                             MatchMode mode) const {
  if (query.tokens.empty()) throw Error(Errc::EmptyQuery, "no keywords in '" + query.raw + "'");
  struct Acc {
    double score = 0.0;
    std::map<index::Field, std::set<std::string>> matched;
    std::size_t tokens_hit = 0;
  };
  std::map<std::size_t, Acc> acc;
  // Token order then canonical posting order, the same summation order as
  // score_lines(), so explain() reproduces scores exactly.
  for (const std::string& token : query.tokens) {
    auto it = by_token_.find(token);
    if (it == by_token_.end()) continue;
    std::set<std::size_t> docs_for_token;
    for (const index::Posting* p : it->second) {
      Acc& a = acc[p->doc_id];
      a.score += contribution(p->field, p->tf);
      a.matched[p->field].insert(token);
      docs_for_token.insert(p->doc_id);
    }
    for (std::size_t d : docs_for_token) ++acc[d].tokens_hit;
  }
  std::vector<QueryResult> results;
  for (auto& [doc_id, a] : acc) {
    if (mode == MatchMode::All && a.tokens_hit != query.tokens.size()) continue;
    results.push_back({index_.docs[doc_id].url, a.score, std::move(a.matched)});
  }
  sort_results(results);
  if (results.size() > top_k) results.resize(top_k);
  return results;
}

std::vector<ScoreLine> SearchIndex::explain(const Query& query, const Url& url) const {
  auto it = by_url_.find(url.str());
  if (it == by_url_.end()) throw Error(Errc::UnknownUrl, url.str() + " is not indexed");
  return score_lines(query, it->second);
}

void sort_results(std::vector<QueryResult>& results) {
  std::sort(results.begin(), results.end(), [](const QueryResult& a, const QueryResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.url.str() < b.url.str();
  });
}

std::string render_results(const std::vector<QueryResult>& results, bool detail) {
  std::string out;
  std::size_t rank = 1;
  for (const QueryResult& r : results) {
    out += std::to_string(rank++) + '\t' + fixed6(r.score) + '\t' + r.url.str();
    if (detail) {
      std::string matched;
      for (const auto& [field, tokens] : r.matched) {
        if (!matched.empty()) matched += ';';
        matched += std::string(index::to_string(field)) + ':';
        bool first = true;
        for (const auto& t : tokens) {
          if (!first) matched += ',';
          matched += t;
          first = false;
        }
      }
      out += '\t' + matched;
    }
    out += '\n';
  }
  return out;
}

std::string render_explain(const std::vector<ScoreLine>& lines) {
  std::string out;
  for (const ScoreLine& l : lines)
    out += l.token + ' ' + std::string(index::to_string(l.field)) + " tf=" + std::to_string(l.tf) +
           " contrib=" + short_decimal(l.contrib) + '\n';
  return out;
}

}  // namespace onto::query
