#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "onto/politeness.hpp"
#include "onto/url.hpp"

namespace onto {

struct RequestOptions {
  std::size_t max_body_bytes = 16u << 20;
  // Past max_body_bytes the body is cut when true, else BodyTooLarge is thrown.
  bool truncate_body = false;
  std::chrono::milliseconds timeout{30'000};
  // Slot granted by a PolitenessGate; recorded by transports that keep a log.
  std::optional<PolitenessGate::Clock::time_point> scheduled_at;
};

/// One hop as seen by a transport. Redirects are not followed here.
struct RawResponse {
  int status = 0;
  std::optional<std::string> content_type;
  std::optional<std::string> location;
  std::string body;
};

struct FetchResponse {
  Url final_url;
  int status = 0;
  std::optional<std::string> content_type;  // lowercase, parameters stripped
  std::string body;
  std::int64_t elapsed_ms = 0;
};

/// Source of documents. Implementations must allow concurrent get() calls and
/// throw Error{Timeout | ConnectionFailed | BodyTooLarge} on transport failure.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual RawResponse get(const Url& url, const RequestOptions& options) = 0;
};

inline constexpr int kMaxRedirects = 5;

/// Issues a GET and follows up to kMaxRedirects redirects. Non-2xx statuses are
/// returned, not thrown. When `gate` is given every hop waits for its slot;
/// otherwise the caller must already have honored politeness for `url`.
FetchResponse fetch(Transport& transport, const Url& url, const RequestOptions& options,
                    PolitenessGate* gate = nullptr);

/// "Text/HTML; charset=utf-8" -> "text/html".
std::optional<std::string> media_type(std::string_view header_value);

}  // namespace onto
