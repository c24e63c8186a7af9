#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "onto/crawler.hpp"
#include "onto/error.hpp"

namespace onto::crawl {
namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return lower(x) == lower(y); });
}

std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i)
    if (iequals(hay.substr(i, needle.size()), needle)) return i;
  return std::string_view::npos;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp == 0 || cp > 0x10FFFF) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Character references that realistically show up inside href values.
std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    if (name.starts_with('#') && name.size() > 1) {
      bool hex = name[1] == 'x' || name[1] == 'X';
      auto digits = name.substr(hex ? 2 : 1);
      char* end = nullptr;
      std::string d(digits);
      unsigned long cp = std::strtoul(d.c_str(), &end, hex ? 16 : 10);
      if (d.empty() || *end != '\0') {
        out.push_back('&');
        continue;
      }
      append_utf8(out, cp);
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else {
      out.push_back('&');
      continue;
    }
    i = semi;
  }
  return out;
}

struct Tag {
  std::string name;  // lowercased
  std::vector<std::pair<std::string, std::string>> attrs;
  bool complete = false;  // false when input ended before '>'
};

// Parses the tag starting at html[pos] == '<'. Returns the position after '>'.
std::size_t scan_tag(std::string_view html, std::size_t pos, Tag& tag) {
  std::size_t i = pos + 1;
  while (i < html.size() && !is_space(html[i]) && html[i] != '>' && html[i] != '/')
    tag.name.push_back(lower(html[i++]));
  while (i < html.size()) {
    while (i < html.size() && (is_space(html[i]) || html[i] == '/')) ++i;
    if (i >= html.size()) break;
    if (html[i] == '>') {
      tag.complete = true;
      break;
    }
    std::string key;
    while (i < html.size() && !is_space(html[i]) && html[i] != '=' && html[i] != '>')
      key.push_back(lower(html[i++]));
    while (i < html.size() && is_space(html[i])) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && is_space(html[i])) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        char q = html[i++];
        auto end = html.find(q, i);
        if (end == std::string_view::npos) end = html.size();
        value = html.substr(i, end - i);
        i = end + 1;
      } else {
        while (i < html.size() && !is_space(html[i]) && html[i] != '>') value.push_back(html[i++]);
      }
    }
    if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
  }
  return std::min(i + 1, html.size());
}

const std::string* attr(const Tag& tag, std::string_view key) {
  for (const auto& [k, v] : tag.attrs)
    if (k == key) return &v;
  return nullptr;
}

}  // namespace

std::vector<Url> extract_links(std::string_view html, const Url& base) {
  std::vector<Url> out;
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while ((i = html.find('<', i)) != std::string_view::npos) {
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 >= html.size() || !std::isalpha(static_cast<unsigned char>(html[i + 1]))) {
      ++i;
      continue;
    }
    Tag tag;
    i = scan_tag(html, i, tag);
    if (tag.name == "script" || tag.name == "style") {
      auto close = ifind(html, "</" + tag.name, i);
      i = close == std::string_view::npos ? html.size() : close;
      continue;
    }
    const std::string* ref = nullptr;
    if (tag.name == "a" || tag.name == "link")
      ref = attr(tag, "href");
    else if (tag.name == "frame" || tag.name == "iframe")
      ref = attr(tag, "src");
    if (ref == nullptr || !tag.complete) continue;
    try {
      Url url = normalize_url(base, decode_entities(*ref));
      if (seen.insert(url.str()).second) out.push_back(std::move(url));
    } catch (const Error&) {
      // unsupported scheme or unparseable: not a crawlable link
    }
  }
  return out;
}

}  // namespace onto::crawl
