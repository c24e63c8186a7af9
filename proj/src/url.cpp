#include "onto/url.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "onto/error.hpp"
#include "onto/iri.hpp"

namespace onto {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// Percent-encodes bytes that are not allowed raw and upper-cases existing
// escapes so that normalization is idempotent.
std::string encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    if (c == '%' && i + 2 < s.size() && is_hex(s[i + 1]) && is_hex(s[i + 2])) {
      out.push_back('%');
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(s[i + 1]))));
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(s[i + 2]))));
      i += 2;
      continue;
    }
    bool raw_ok = c > 0x20 && c < 0x7F && c != '"' && c != '<' && c != '>' && c != '\\' &&
                  c != '^' && c != '`' && c != '{' && c != '|' && c != '}' && c != '%';
    if (raw_ok) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string clean(std::string_view href) {
  while (!href.empty() && is_ws(href.front())) href.remove_prefix(1);
  while (!href.empty() && is_ws(href.back())) href.remove_suffix(1);
  std::string out;
  out.reserve(href.size());
  for (char c : href)
    if (c != '\t' && c != '\n' && c != '\r') out.push_back(c);
  if (auto hash = out.find('#'); hash != std::string::npos) out.erase(hash);
  return out;
}

// Returns the scheme if `s` starts with one, else empty.
std::string_view scheme_of(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return {};
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    if (c == ':') return s.substr(0, i);
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return {};
  }
  return {};
}

void set_authority(Url& u, std::string_view auth) {
  if (auto at = auth.rfind('@'); at != std::string_view::npos) auth = auth.substr(at + 1);
  std::string_view host = auth;
  std::string_view port;
  if (auth.starts_with('[')) {
    auto close = auth.find(']');
    if (close == std::string_view::npos) throw Error(Errc::Malformed, "unterminated IPv6 host");
    host = auth.substr(0, close + 1);
    auto rest = auth.substr(close + 1);
    if (!rest.empty()) {
      if (rest[0] != ':') throw Error(Errc::Malformed, "garbage after IPv6 host");
      port = rest.substr(1);
    }
  } else if (auto colon = auth.rfind(':'); colon != std::string_view::npos) {
    host = auth.substr(0, colon);
    port = auth.substr(colon + 1);
  }
  if (host.empty()) throw Error(Errc::Malformed, "empty host");
  u.host = lower(host);
  if (!host.starts_with('[')) {
    for (char c : u.host) {
      bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' || c == '_';
      if (!ok) throw Error(Errc::Malformed, "invalid character in host '" + u.host + "'");
    }
  }
  u.port = default_port(u.scheme);
  if (!port.empty()) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc{} || ptr != port.data() + port.size() || value < 1 || value > 65535)
      throw Error(Errc::Malformed, "bad port '" + std::string(port) + "'");
    u.port = value;
  }
}

void set_path_query(Url& u, std::string_view rest) {
  std::string_view path = rest;
  u.query.reset();
  if (auto q = rest.find('?'); q != std::string_view::npos) {
    path = rest.substr(0, q);
    u.query = encode(rest.substr(q + 1));
  }
  std::string p = remove_dot_segments(path);
  if (p.empty() || p[0] != '/') p.insert(p.begin(), '/');
  u.path = encode(p);
}

Url resolve(const Url* base, std::string_view raw) {
  std::string href = clean(raw);
  std::string_view ref = href;
  Url out;
  if (auto scheme = scheme_of(ref); !scheme.empty()) {
    out.scheme = lower(scheme);
    if (out.scheme != "http" && out.scheme != "https")
      throw Error(Errc::UnsupportedScheme, "scheme '" + out.scheme + "' in '" + href + "'");
    ref.remove_prefix(scheme.size() + 1);
    if (!ref.starts_with("//")) throw Error(Errc::Malformed, "missing authority in '" + href + "'");
  } else if (base == nullptr) {
    throw Error(Errc::Malformed, "relative reference '" + href + "' without base");
  } else {
    out.scheme = base->scheme;
  }

  if (ref.starts_with("//")) {
    ref.remove_prefix(2);
    auto end = ref.find_first_of("/?");
    set_authority(out, ref.substr(0, end));
    set_path_query(out, end == std::string_view::npos ? std::string_view{} : ref.substr(end));
    return out;
  }

  out.host = base->host;
  out.port = base->port;
  if (ref.empty()) {
    out.path = base->path;
    out.query = base->query;
  } else if (ref.starts_with('/')) {
    set_path_query(out, ref);
  } else if (ref.starts_with('?')) {
    out.path = base->path;
    out.query = encode(ref.substr(1));
  } else {
    auto dir = base->path.substr(0, base->path.rfind('/') + 1);
    set_path_query(out, dir + std::string(ref));
  }
  return out;
}

}  // namespace

int default_port(std::string_view scheme) noexcept { return scheme == "https" ? 443 : 80; }

Url Url::parse(std::string_view text) { return resolve(nullptr, text); }

Url normalize_url(const Url& base, std::string_view href) { return resolve(&base, href); }

std::string Url::str() const {
  std::string out = scheme + "://" + host;
  if (port != default_port(scheme)) out += ":" + std::to_string(port);
  out += path;
  if (query) out += "?" + *query;
  return out;
}

std::string Url::extension() const {
  auto seg = std::string_view(path).substr(path.rfind('/') + 1);
  auto dot = seg.rfind('.');
  if (dot == std::string_view::npos) return {};
  return lower(seg.substr(dot + 1));
}

}  // namespace onto
