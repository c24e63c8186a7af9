#pragma once

#include <string>

#include "onto/fetch.hpp"

namespace onto {

/// "onto-seeker/<version>", or $ONTO_SEEKER_UA when set.
std::string default_user_agent();

/// HTTP/1.1 transport for live crawling. No cookies, no robots.txt, no
/// scripts. https:// needs the library built against OpenSSL.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::string user_agent = default_user_agent());

  RawResponse get(const Url& url, const RequestOptions& options) override;

  const std::string& user_agent() const noexcept { return user_agent_; }

 private:
  std::string user_agent_;
};

}  // namespace onto
