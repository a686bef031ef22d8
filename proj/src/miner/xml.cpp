#include "tepgnn/miner/xml.hpp"

#include <cstdint>
#include <vector>

namespace tepgnn::miner {

MalformedReport::MalformedReport(const std::string& what, std::size_t offset)
    : std::runtime_error("malformed report at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}

namespace {

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.'; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Scanner {
 public:
  Scanner(std::string_view xml, const XmlHandler& h) : s_(xml), h_(h) {}

  void run() {
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    bool seen_root = false;
    while (pos_ < s_.size()) {
      if (s_[pos_] != '<') {
        std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != '<') {
          if (s_[pos_] == '&') {
            std::string sink;
            decode_entity(sink);
          } else {
            ++pos_;
          }
        }
        if (stack_.empty()) {
          for (std::size_t i = start; i < pos_; ++i) {
            if (!is_space(s_[i])) fail("text outside the root element", i);
          }
        }
        continue;
      }
      if (starts("<?")) {
        skip_past("?>", "unterminated processing instruction");
      } else if (starts("<!--")) {
        skip_past("-->", "unterminated comment");
      } else if (starts("<![CDATA[")) {
        if (stack_.empty()) fail("CDATA outside the root element", pos_);
        skip_past("]]>", "unterminated CDATA section");
      } else if (starts("<!DOCTYPE")) {
        skip_doctype();
      } else if (starts("</")) {
        end_tag();
      } else {
        if (stack_.empty() && seen_root) fail("second root element", pos_);
        seen_root = true;
        start_tag();
      }
    }
    if (!stack_.empty()) fail("unclosed element <" + stack_.back() + ">", s_.size());
    if (!seen_root) fail("no root element", s_.size());
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) { throw MalformedReport(what, at); }

  bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  void skip_past(std::string_view end, const char* what) {
    std::size_t at = s_.find(end, pos_);
    if (at == std::string_view::npos) fail(what, pos_);
    pos_ = at + end.size();
  }

  void skip_doctype() {
    std::size_t start = pos_;
    int depth = 0;
    for (; pos_ < s_.size(); ++pos_) {
      if (s_[pos_] == '[') ++depth;
      if (s_[pos_] == ']') --depth;
      if (s_[pos_] == '>' && depth == 0) {
        ++pos_;
        return;
      }
    }
    fail("unterminated DOCTYPE", start);
  }

  void skip_space() {
    while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
  }

  std::string name() {
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !is_name_start(s_[pos_])) fail("expected a name", pos_);
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  void decode_entity(std::string& out) {
    std::size_t start = pos_;
    std::size_t semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("bad entity reference", start);
    std::string_view ent = s_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent.size() > 1 && ent[0] == '#') {
      bool hex = ent[1] == 'x';
      std::string_view digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) fail("bad character reference", start);
      std::uint32_t cp = 0;
      for (char c : digits) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else fail("bad character reference", start);
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail("character reference out of range", start);
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity &" + std::string(ent) + ";", start);
    }
  }

  void start_tag() {
    XmlElement el;
    el.offset = pos_;
    ++pos_;
    el.name = name();
    while (true) {
      std::size_t before = pos_;
      skip_space();
      if (pos_ >= s_.size()) fail("unterminated start tag <" + el.name + ">", el.offset);
      if (starts("/>")) {
        pos_ += 2;
        if (h_.open) h_.open(el);
        if (h_.close) h_.close(el.name);
        return;
      }
      if (s_[pos_] == '>') {
        ++pos_;
        if (h_.open) h_.open(el);
        stack_.push_back(el.name);
        return;
      }
      if (before == pos_) fail("expected whitespace before attribute", pos_);
      std::size_t attr_at = pos_;
      std::string key = name();
      skip_space();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '=' after attribute " + key, pos_);
      ++pos_;
      skip_space();
      if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted value", pos_);
      char quote = s_[pos_];
      std::size_t value_at = pos_++;
      std::string value;
      while (true) {
        if (pos_ >= s_.size()) fail("unterminated attribute value", value_at);
        char c = s_[pos_];
        if (c == quote) break;
        if (c == '<') fail("'<' in attribute value", pos_);
        if (c == '&') {
          decode_entity(value);
        } else {
          value += c;
          ++pos_;
        }
      }
      ++pos_;
      if (el.attrs.contains(key)) fail("duplicate attribute " + key, attr_at);
      el.attrs.emplace(key, std::move(value));
      el.attr_offsets.emplace(std::move(key), value_at);
    }
  }

  void end_tag() {
    std::size_t start = pos_;
    pos_ += 2;
    std::string n = name();
    skip_space();
    if (pos_ >= s_.size() || s_[pos_] != '>') fail("unterminated end tag", start);
    ++pos_;
    if (stack_.empty()) fail("unexpected </" + n + ">", start);
    if (stack_.back() != n) fail("</" + n + "> closes <" + stack_.back() + ">", start);
    stack_.pop_back();
    if (h_.close) h_.close(n);
  }

  std::string_view s_;
  const XmlHandler& h_;
  std::size_t pos_ = 0;
  std::vector<std::string> stack_;
};

}  // namespace

void scan_xml(std::string_view xml, const XmlHandler& handler) { Scanner(xml, handler).run(); }

}  // namespace tepgnn::miner
