#include "onto/http_transport.hpp"

#include <cstdlib>

#include <httplib.h>

#include "onto/error.hpp"

#ifndef ONTO_SEEKER_VERSION
#define ONTO_SEEKER_VERSION "0.0.0"
#endif

namespace onto {

std::string default_user_agent() {
  if (const char* ua = std::getenv("ONTO_SEEKER_UA"); ua != nullptr && *ua != '\0') return ua;
  return std::string("onto-seeker/") + ONTO_SEEKER_VERSION;
}

HttpTransport::HttpTransport(std::string user_agent) : user_agent_(std::move(user_agent)) {}

RawResponse HttpTransport::get(const Url& url, const RequestOptions& options) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.scheme == "https")
    throw Error(Errc::ConnectionFailed, "https not available in this build: " + url.str());
#endif
  httplib::Client client(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
  auto secs = options.timeout.count() / 1000;
  auto usecs = (options.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  client.set_follow_location(false);
  client.set_keep_alive(false);

  httplib::Headers headers{{"User-Agent", user_agent_}, {"Accept", "*/*"}};
  std::string target = url.path + (url.query ? "?" + *url.query : "");

  RawResponse out;
  bool overflow = false;
  auto on_response = [&](const httplib::Response& r) {
    out.status = r.status;
    if (r.has_header("Content-Type")) out.content_type = r.get_header_value("Content-Type");
    if (r.has_header("Location")) out.location = r.get_header_value("Location");
    return true;
  };
  auto on_data = [&](const char* data, std::size_t len) {
    std::size_t room = options.max_body_bytes - out.body.size();
    if (len > room) {
      out.body.append(data, room);
      overflow = true;
      return false;
    }
    out.body.append(data, len);
    return true;
  };

  auto result = client.Get(target, headers, on_response, on_data);
  if (overflow) {
    if (options.truncate_body) return out;
    throw Error(Errc::BodyTooLarge,
                url.str() + " exceeds " + std::to_string(options.max_body_bytes) + " bytes");
  }
  if (!result) {
    auto err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
      throw Error(Errc::Timeout, url.str() + ": " + httplib::to_string(err));
    throw Error(Errc::ConnectionFailed, url.str() + ": " + httplib::to_string(err));
  }
  return out;
}

}  // namespace onto
