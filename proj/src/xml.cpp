#include "xml.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

#include "onto/error.hpp"

namespace onto::xml {
namespace {

constexpr int kMaxDepth = 512;
constexpr std::size_t kMaxEntityExpansion = 8u << 20;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return is_name_start(c) || std::isdigit(u) || c == '-' || c == '.';
}

void append_utf8(std::string& out, unsigned long cp) {
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

class Reader {
 public:
  explicit Reader(std::string_view doc) : doc_(doc) {
    if (doc_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  Element document() {
    prolog();
    if (eof() || peek() != '<') fail("expected root element");
    Element root = element(0);
    misc();
    if (!eof()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    auto [line, col] = position();
    throw Error(Errc::XmlMalformed, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  std::pair<int, int> position() const { return line_column(doc_, pos_); }

  bool eof() const { return pos_ >= doc_.size(); }
  char peek() const { return doc_[pos_]; }
  bool looking_at(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!looking_at(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_space() {
    while (!eof() && is_space(peek())) ++pos_;
  }

  void skip_past(std::string_view terminator, const char* what) {
    auto end = doc_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
  }

  std::string name() {
    if (eof() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    return std::string(doc_.substr(start, pos_ - start));
  }

  std::string quoted() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted value");
    char q = doc_[pos_++];
    auto end = doc_.find(q, pos_);
    if (end == std::string_view::npos) fail("unterminated quoted value");
    std::string raw(doc_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return raw;
  }

  void misc() {
    for (;;) {
      skip_space();
      if (looking_at("<!--")) {
        skip_past("-->", "comment");
      } else if (looking_at("<?")) {
        skip_past("?>", "processing instruction");
      } else {
        return;
      }
    }
  }

  void prolog() {
    misc();
    if (looking_at("<!DOCTYPE")) {
      doctype();
      misc();
    }
  }

  void doctype() {
    expect("<!DOCTYPE");
    skip_space();
    name();
    for (;;) {
      skip_space();
      if (eof()) fail("unterminated DOCTYPE");
      char c = peek();
      if (c == '>') {
        ++pos_;
        return;
      }
      if (c == '"' || c == '\'') {
        quoted();
      } else if (c == '[') {
        ++pos_;
        internal_subset();
      } else if (is_name_start(c)) {
        name();  // SYSTEM / PUBLIC
      } else {
        fail("unexpected character in DOCTYPE");
      }
    }
  }

  void internal_subset() {
    for (;;) {
      skip_space();
      if (eof()) fail("unterminated DOCTYPE internal subset");
      if (peek() == ']') {
        ++pos_;
        return;
      }
      if (looking_at("<!--")) {
        skip_past("-->", "comment");
      } else if (looking_at("<?")) {
        skip_past("?>", "processing instruction");
      } else if (looking_at("<!ENTITY")) {
        pos_ += 8;
        skip_space();
        bool parameter = false;
        if (!eof() && peek() == '%') {
          parameter = true;
          ++pos_;
          skip_space();
        }
        std::string ent = name();
        skip_space();
        std::string value;
        bool external = false;
        if (!eof() && (peek() == '"' || peek() == '\'')) {
          value = quoted();
        } else {
          external = true;
        }
        while (!eof() && peek() != '>') {
          if (peek() == '"' || peek() == '\'')
            quoted();
          else
            ++pos_;
        }
        expect(">");
        if (!parameter && !external) entities_.try_emplace(ent, std::move(value));
      } else if (looking_at("<!")) {
        // ELEMENT, ATTLIST, NOTATION
        while (!eof() && peek() != '>') {
          if (peek() == '"' || peek() == '\'')
            quoted();
          else
            ++pos_;
        }
        expect(">");
      } else if (peek() == '%') {
        skip_past(";", "parameter entity reference");
      } else {
        fail("unexpected content in DOCTYPE internal subset");
      }
    }
  }

  // Expands references in `raw` into `out`.
  void decode(std::string_view raw, std::string& out, int depth) {
    if (depth > 16) fail("entity expansion too deep");
    for (std::size_t i = 0; i < raw.size(); ++i) {
      char c = raw[i];
      if (c != '&') {
        out.push_back(c);
        continue;
      }
      auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity reference");
      auto ref = raw.substr(i + 1, semi - i - 1);
      i = semi;
      if (ref.starts_with('#')) {
        bool hex = ref.size() > 1 && ref[1] == 'x';
        std::string digits(ref.substr(hex ? 2 : 1));
        char* end = nullptr;
        unsigned long cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
        if (digits.empty() || *end != '\0' || cp == 0 || cp > 0x10FFFF)
          fail("bad character reference '&" + std::string(ref) + ";'");
        append_utf8(out, cp);
      } else if (ref == "lt") {
        out.push_back('<');
      } else if (ref == "gt") {
        out.push_back('>');
      } else if (ref == "amp") {
        out.push_back('&');
      } else if (ref == "quot") {
        out.push_back('"');
      } else if (ref == "apos") {
        out.push_back('\'');
      } else if (auto it = entities_.find(std::string(ref)); it != entities_.end()) {
        decode(it->second, out, depth + 1);
      } else {
        fail("undefined entity '&" + std::string(ref) + ";'");
      }
      if (out.size() > kMaxEntityExpansion) fail("entity expansion limit exceeded");
    }
  }

  std::string attribute_value() {
    std::string raw = quoted();
    if (raw.find('<') != std::string::npos) fail("'<' in attribute value");
    std::string out;
    decode(raw, out, 0);
    for (char& c : out)
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return out;
  }

  Element element(int depth) {
    if (depth > kMaxDepth) fail("elements nested too deeply");
    Element el;
    el.offset = pos_;
    expect("<");
    el.qname = name();
    for (;;) {
      bool spaced = !eof() && is_space(peek());
      skip_space();
      if (eof()) fail("unterminated start tag <" + el.qname + ">");
      if (looking_at("/>")) {
        pos_ += 2;
        return el;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (!spaced) fail("expected whitespace before attribute");
      std::string attr = name();
      skip_space();
      expect("=");
      skip_space();
      for (const auto& a : el.attributes)
        if (a.qname == attr) fail("duplicate attribute '" + attr + "'");
      el.attributes.push_back({std::move(attr), attribute_value()});
    }
    content(el, depth);
    return el;
  }

  void content(Element& el, int depth) {
    for (;;) {
      if (eof()) fail("unclosed element <" + el.qname + ">");
      if (looking_at("</")) {
        pos_ += 2;
        std::string closing = name();
        if (closing != el.qname)
          fail("mismatched end tag </" + closing + ">, expected </" + el.qname + ">");
        skip_space();
        expect(">");
        return;
      }
      if (looking_at("<!--")) {
        skip_past("-->", "comment");
      } else if (looking_at("<![CDATA[")) {
        pos_ += 9;
        auto end = doc_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        append_text(el, doc_.substr(pos_, end - pos_));
        pos_ = end + 3;
      } else if (looking_at("<?")) {
        skip_past("?>", "processing instruction");
      } else if (peek() == '<') {
        el.children.push_back(element(depth + 1));
      } else {
        auto end = doc_.find('<', pos_);
        if (end == std::string_view::npos) end = doc_.size();
        std::string decoded;
        decode(doc_.substr(pos_, end - pos_), decoded, 0);
        pos_ = end;
        append_text(el, decoded);
      }
    }
  }

  static void append_text(Element& el, std::string_view text) {
    el.text += text;
    for (char c : text)
      if (!is_space(c)) el.has_nonspace_text = true;
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> entities_;
};

}  // namespace

Element parse(std::string_view document) { return Reader(document).document(); }

std::pair<int, int> line_column(std::string_view document, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < document.size(); ++i) {
    if (document[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace onto::xml
