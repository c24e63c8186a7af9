#include <cctype>
#include <map>

#include "onto/error.hpp"
#include "onto/iri.hpp"
#include "onto/rdf.hpp"

namespace onto::rdf {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool is_high(char c) { return static_cast<unsigned char>(c) >= 0x80; }

bool is_pn_char(char c) {
  return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || is_high(c);
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

class TurtleReader {
 public:
  TurtleReader(std::string_view doc, std::string base) : doc_(doc), base_(std::move(base)) {
    if (doc_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  std::vector<Triple> run() {
    for (;;) {
      skip();
      if (eof()) break;
      statement();
    }
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(Errc code, const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < doc_.size(); ++i) {
      if (doc_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(code, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }

  bool eof() const { return pos_ >= doc_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < doc_.size() ? doc_[pos_ + ahead] : '\0';
  }
  bool looking_at(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  bool looking_at_keyword(std::string_view kw) const {
    if (doc_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(doc_[pos_ + i])) != kw[i]) return false;
    char after = peek(kw.size());
    return !is_pn_char(after) && after != ':';
  }

  void skip() {
    while (!eof()) {
      if (is_ws(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (!eof() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip();
    if (peek() != c) fail(Errc::SyntaxError, std::string("expected '") + c + "'");
    ++pos_;
  }

  void statement() {
    if (looking_at("@prefix")) {
      pos_ += 7;
      prefix_decl();
      expect('.');
    } else if (looking_at("@base")) {
      pos_ += 5;
      base_decl();
      expect('.');
    } else if (looking_at_keyword("PREFIX")) {
      pos_ += 6;
      prefix_decl();
    } else if (looking_at_keyword("BASE")) {
      pos_ += 4;
      base_decl();
    } else {
      triples();
      expect('.');
    }
  }

  void prefix_decl() {
    skip();
    std::string prefix;
    while (!eof() && (is_pn_char(peek()) || peek() == '.')) prefix.push_back(doc_[pos_++]);
    if (peek() != ':') fail(Errc::SyntaxError, "expected ':' in prefix declaration");
    ++pos_;
    skip();
    prefixes_[prefix] = iriref();
  }

  void base_decl() {
    skip();
    base_ = iriref();
  }

  void triples() {
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  void predicate_object_list(const Term& subject) {
    for (;;) {
      skip();
      std::string predicate = verb();
      for (;;) {
        Term object = object_term();
        out_.push_back({subject, predicate, std::move(object)});
        skip();
        if (peek() != ',') break;
        ++pos_;
      }
      skip();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip();
      }
      if (peek() == '.' || peek() == ']' || eof()) return;
    }
  }

  void reject_unsupported() {
    char c = peek();
    if (c == '(') fail(Errc::UnsupportedConstruct, "collections '( )'");
    if (c == '[') fail(Errc::UnsupportedConstruct, "anonymous blank nodes '[ ]'");
  }

  Term subject_term() {
    skip();
    reject_unsupported();
    if (peek() == '<') return Term::iri(iriref());
    if (looking_at("_:")) return blank_node();
    if (peek() == '"' || peek() == '\'' || is_digit(peek()))
      fail(Errc::SyntaxError, "literal in subject position");
    return Term::iri(prefixed_name());
  }

  std::string verb() {
    if (peek() == 'a') {
      char after = peek(1);
      if (is_ws(after) || after == '<' || after == '"' || after == '_' || after == '#') {
        ++pos_;
        return std::string(ns::kRdf) + "type";
      }
    }
    if (peek() == '<') return iriref();
    reject_unsupported();
    if (looking_at("_:")) fail(Errc::SyntaxError, "blank node in predicate position");
    return prefixed_name();
  }

  Term object_term() {
    skip();
    reject_unsupported();
    char c = peek();
    if (c == '<') return Term::iri(iriref());
    if (looking_at("_:")) return blank_node();
    if (c == '"' || c == '\'') return string_literal();
    if (is_digit(c) || c == '+' || c == '-' || (c == '.' && is_digit(peek(1)))) return numeric();
    if (looking_at("true") && !is_pn_char(peek(4)) && peek(4) != ':') {
      pos_ += 4;
      return Term::literal("true", std::string(ns::kXsd) + "boolean");
    }
    if (looking_at("false") && !is_pn_char(peek(5)) && peek(5) != ':') {
      pos_ += 5;
      return Term::literal("false", std::string(ns::kXsd) + "boolean");
    }
    if (eof()) fail(Errc::SyntaxError, "unexpected end of input, expected object");
    return Term::iri(prefixed_name());
  }

  unsigned long hex_escape(int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = peek();
      if (!is_hex(h)) fail(Errc::SyntaxError, "bad \\u escape");
      cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(h))
                                                    ? h - '0'
                                                    : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
      ++pos_;
    }
    if (cp > 0x10FFFF) fail(Errc::SyntaxError, "code point out of range");
    return cp;
  }

  std::string iriref() {
    if (peek() != '<') fail(Errc::SyntaxError, "expected IRI");
    ++pos_;
    std::string raw;
    for (;;) {
      if (eof()) fail(Errc::SyntaxError, "unterminated IRI");
      char c = doc_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        char e = peek();
        ++pos_;
        if (e == 'u')
          append_utf8(raw, hex_escape(4));
        else if (e == 'U')
          append_utf8(raw, hex_escape(8));
        else
          fail(Errc::SyntaxError, "bad escape in IRI");
        continue;
      }
      if (is_ws(c) || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`')
        fail(Errc::SyntaxError, std::string("character '") + c + "' not allowed in IRI");
      raw.push_back(c);
    }
    return resolve_iri(base_, raw);
  }

  std::string prefixed_name() {
    std::size_t start = pos_;
    std::string prefix;
    while (!eof() && (is_pn_char(peek()) || peek() == '.')) prefix.push_back(doc_[pos_++]);
    if (peek() != ':') {
      pos_ = start;
      if (eof()) fail(Errc::SyntaxError, "unexpected end of input");
      fail(Errc::SyntaxError, std::string("unexpected character '") + peek() + "'");
    }
    ++pos_;
    std::string local;
    while (!eof()) {
      char c = peek();
      if (is_pn_char(c) || c == ':') {
        local.push_back(c);
        ++pos_;
      } else if (c == '.' && (is_pn_char(peek(1)) || peek(1) == ':' || peek(1) == '%')) {
        local.push_back(c);
        ++pos_;
      } else if (c == '%' && is_hex(peek(1)) && is_hex(peek(2))) {
        local.append(doc_.substr(pos_, 3));
        pos_ += 3;
      } else if (c == '\\' && pos_ + 1 < doc_.size()) {
        local.push_back(peek(1));
        pos_ += 2;
      } else {
        break;
      }
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) {
      pos_ = start;
      fail(Errc::UndefinedPrefix, "prefix '" + prefix + ":' is not declared");
    }
    return it->second + local;
  }

  Term blank_node() {
    pos_ += 2;
    std::string label;
    while (!eof() && (is_pn_char(peek()) || (peek() == '.' && is_pn_char(peek(1)))))
      label.push_back(doc_[pos_++]);
    if (label.empty()) fail(Errc::SyntaxError, "empty blank node label");
    return Term::blank(std::move(label));
  }

  Term string_literal() {
    char q = peek();
    if (looking_at(std::string(3, q))) fail(Errc::UnsupportedConstruct, "multi-line string literals");
    ++pos_;
    std::string value;
    for (;;) {
      if (eof()) fail(Errc::SyntaxError, "unterminated string literal");
      char c = doc_[pos_++];
      if (c == q) break;
      if (c == '\n' || c == '\r') fail(Errc::SyntaxError, "line break in string literal");
      if (c != '\\') {
        value.push_back(c);
        continue;
      }
      char e = peek();
      ++pos_;
      switch (e) {
        case 't': value.push_back('\t'); break;
        case 'b': value.push_back('\b'); break;
        case 'n': value.push_back('\n'); break;
        case 'r': value.push_back('\r'); break;
        case 'f': value.push_back('\f'); break;
        case '"': value.push_back('"'); break;
        case '\'': value.push_back('\''); break;
        case '\\': value.push_back('\\'); break;
        case 'u': append_utf8(value, hex_escape(4)); break;
        case 'U': append_utf8(value, hex_escape(8)); break;
        default: fail(Errc::SyntaxError, "bad escape in string literal");
      }
    }
    if (peek() == '@') {
      ++pos_;
      std::string lang;
      while (!eof() && (is_alpha(peek()) || is_digit(peek()) || peek() == '-'))
        lang.push_back(doc_[pos_++]);
      if (lang.empty()) fail(Errc::SyntaxError, "empty language tag");
      return Term::literal(std::move(value), {}, std::move(lang));
    }
    if (looking_at("^^")) {
      pos_ += 2;
      std::string datatype = peek() == '<' ? iriref() : prefixed_name();
      return Term::literal(std::move(value), std::move(datatype));
    }
    return Term::literal(std::move(value));
  }

  Term numeric() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    bool digits = false, dot = false, exponent = false;
    while (is_digit(peek())) {
      ++pos_;
      digits = true;
    }
    if (peek() == '.' && is_digit(peek(1))) {
      dot = true;
      ++pos_;
      while (is_digit(peek())) ++pos_;
      digits = true;
    }
    if (digits && (peek() == 'e' || peek() == 'E')) {
      exponent = true;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!is_digit(peek())) fail(Errc::SyntaxError, "bad exponent");
      while (is_digit(peek())) ++pos_;
    }
    if (!digits) fail(Errc::SyntaxError, "bad numeric literal");
    std::string_view xsd = exponent ? "double" : dot ? "decimal" : "integer";
    return Term::literal(std::string(doc_.substr(start, pos_ - start)),
                         std::string(ns::kXsd) + std::string(xsd));
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::string base_;
  std::map<std::string, std::string> prefixes_;
  std::vector<Triple> out_;
};

}  // namespace

std::vector<Triple> parse_turtle(std::string_view body, std::string_view base_iri) {
  return TurtleReader(body, std::string(base_iri)).run();
}

std::vector<Triple> parse_turtle(std::string_view body, const Url& base) {
  return parse_turtle(body, base.str());
}

}  // namespace onto::rdf
