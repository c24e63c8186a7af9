#include "onto/fetch.hpp"

#include <algorithm>
#include <cctype>

#include "onto/error.hpp"

namespace onto {
namespace {

bool is_redirect(int status) {
  return status == 301 || status == 302 || status == 303 || status == 307 || status == 308;
}

}  // namespace

std::optional<std::string> media_type(std::string_view value) {
  value = value.substr(0, value.find(';'));
  while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front())))
    value.remove_prefix(1);
  while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back())))
    value.remove_suffix(1);
  if (value.empty()) return std::nullopt;
  std::string out(value);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

FetchResponse fetch(Transport& transport, const Url& url, const RequestOptions& options,
                    PolitenessGate* gate) {
  auto start = std::chrono::steady_clock::now();
  Url current = url;
  RawResponse raw;
  for (int hop = 0;; ++hop) {
    RequestOptions hop_options = options;
    if (gate != nullptr) hop_options.scheduled_at = gate->wait_for_slot(current.host);
    raw = transport.get(current, hop_options);
    if (raw.status < 200 || raw.status >= 600)
      throw Error(Errc::ConnectionFailed,
                  "invalid status " + std::to_string(raw.status) + " from " + current.str());
    if (!is_redirect(raw.status) || !raw.location) break;
    if (hop == kMaxRedirects)
      throw Error(Errc::TooManyRedirects, "more than " + std::to_string(kMaxRedirects) +
                                              " redirects starting at " + url.str());
    try {
      current = normalize_url(current, *raw.location);
    } catch (const Error& e) {
      throw Error(Errc::ConnectionFailed, "bad redirect target: " + std::string(e.what()));
    }
  }

  if (raw.body.size() > options.max_body_bytes) {
    if (!options.truncate_body)
      throw Error(Errc::BodyTooLarge, current.str() + " exceeds " +
                                          std::to_string(options.max_body_bytes) + " bytes");
    raw.body.resize(options.max_body_bytes);
  }

  FetchResponse out;
  out.final_url = std::move(current);
  out.status = raw.status;
  out.content_type = raw.content_type ? media_type(*raw.content_type) : std::nullopt;
  out.body = std::move(raw.body);
  out.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return out;
}

}  // namespace onto
