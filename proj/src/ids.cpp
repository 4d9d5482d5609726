#include "radical/ids.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <unordered_set>

#include "radical/utf8.hpp"

namespace radical::ids {
namespace {

std::string hex_codepoint(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

bool is_entity_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '+' || c == '-';
}

// Extended description characters outside the base twelve.
bool is_extended_idc(char32_t cp) {
  return (cp >= 0x2FFC && cp <= 0x2FFF) || cp == 0x31EF;
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view s, std::size_t line, std::size_t column)
      : s_(s), line_(line), column_offset_(column) {}

  Expression parse_all() {
    if (s_.empty()) fail("empty expression", 0);
    Expression e = parse();
    if (pos_ != s_.size()) fail("trailing characters after expression", chars_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t char_index) {
    throw ParseError(what, line_, column_offset_ + char_index + 1);
  }

  Expression parse() {
    if (pos_ >= s_.size()) fail("premature end of expression: missing operand", chars_);
    const std::size_t start_char = chars_;
    if (s_[pos_] == '&') return parse_entity();
    char32_t cp;
    try {
      cp = utf8::next(s_, pos_);
    } catch (const utf8::DecodeError& e) {
      fail(e.what(), start_char);
    }
    ++chars_;
    if (is_idc(cp)) {
      std::vector<Expression> children;
      const int arity = idc_arity(cp);
      children.reserve(arity);
      for (int i = 0; i < arity; ++i) children.push_back(parse());
      return Expression::op(cp, std::move(children));
    }
    if (is_extended_idc(cp))
      fail("unsupported description character " + hex_codepoint(cp), start_char);
    if (cp < 0x20 || cp == ' ' || cp == 0x7F)
      fail("control or space character in expression", start_char);
    return Expression::leaf(cp);
  }

  Expression parse_entity() {
    const std::size_t start = pos_;
    const std::size_t start_char = chars_;
    std::size_t i = pos_ + 1;
    while (i < s_.size() && is_entity_char(s_[i])) ++i;
    if (i >= s_.size() || s_[i] != ';' || i == pos_ + 1)
      fail("unterminated entity reference", start_char);
    pos_ = i + 1;
    chars_ += pos_ - start;  // entity tokens are ASCII
    return Expression::entity(std::string(s_.substr(start, pos_ - start)));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t column_offset_;
  std::size_t pos_ = 0;
  std::size_t chars_ = 0;
};

char32_t parse_codepoint_field(std::string_view f, std::size_t line) {
  if (f.size() < 6 || f.size() > 8 || f[0] != 'U' || f[1] != '+')
    throw ParseError("malformed codepoint field '" + std::string(f) + "'", line, 1);
  unsigned value = 0;
  const char* first = f.data() + 2;
  const char* last = f.data() + f.size();
  auto [ptr, ec] = std::from_chars(first, last, value, 16);
  if (ec != std::errc() || ptr != last || value > 0x10FFFF ||
      (value >= 0xD800 && value <= 0xDFFF))
    throw ParseError("malformed codepoint field '" + std::string(f) + "'", line, 1);
  return static_cast<char32_t>(value);
}

Variant parse_variant_field(std::string_view f, std::size_t line,
                            std::size_t column) {
  Variant v{Expression::leaf(0), TagSet{}};
  std::string_view expr = f;
  if (!f.empty() && f.back() == ']') {
    const auto open = f.rfind('[');
    if (open == std::string_view::npos)
      throw ParseError("unbalanced tag bracket", line,
                       column + utf8::length(f));
    const std::string_view letters = f.substr(open + 1, f.size() - open - 2);
    const std::size_t tag_column = column + utf8::length(f.substr(0, open));
    if (letters.empty()) throw ParseError("empty tag group", line, tag_column);
    for (char c : letters) {
      if (c < 'A' || c > 'Z')
        throw ParseError(std::string("invalid source tag '") + c + "'", line,
                         tag_column);
      SourceTag t(c);
      if (v.tags.contains(t))
        throw ParseError(std::string("duplicate source tag '") + c + "'", line,
                         tag_column);
      v.tags.insert(t);
    }
    expr = f.substr(0, open);
  }
  if (expr.empty()) throw ParseError("empty expression", line, column);
  v.expression = parse_ids_expression(expr, line, column - 1);
  return v;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line,
                       std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

SourceTag::SourceTag(char letter) : letter_(letter) {
  if (letter < 'A' || letter > 'Z')
    throw std::invalid_argument(std::string("source tag must be an uppercase letter, got '") +
                                letter + "'");
}

std::vector<SourceTag> parse_tag_list(std::string_view s) {
  std::vector<SourceTag> out;
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    out.emplace_back(c);
  }
  if (out.empty()) throw std::invalid_argument("empty tag preference list");
  return out;
}

const std::vector<SourceTag>& default_preference() {
  static const std::vector<SourceTag> kDefault = parse_tag_list("GTHJKV");
  return kDefault;
}

std::string TagSet::letters() const {
  std::string out;
  for (int i = 0; i < 26; ++i)
    if (bits_.test(i)) out.push_back(static_cast<char>('A' + i));
  return out;
}

void Expression::serialize_to(std::string& out) const {
  if (const auto* c = as_char()) {
    utf8::append(out, c->cp);
  } else if (const auto* e = as_entity()) {
    out += e->token;
  } else {
    const auto& o = std::get<Operator>(node);
    utf8::append(out, o.idc);
    for (const auto& child : o.children) child.serialize_to(out);
  }
}

std::string Expression::serialize() const {
  std::string out;
  serialize_to(out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* c = a.as_char()) return c->cp == b.as_char()->cp;
  if (const auto* e = a.as_entity()) return e->token == b.as_entity()->token;
  const auto& oa = std::get<Operator>(a.node);
  const auto& ob = std::get<Operator>(b.node);
  return oa.idc == ob.idc && oa.children == ob.children;
}

bool is_entity_token(std::string_view s) {
  if (s.size() < 3 || s.front() != '&' || s.back() != ';') return false;
  return std::all_of(s.begin() + 1, s.end() - 1, is_entity_char);
}

Expression parse_ids_expression(std::string_view s, std::size_t line,
                                std::size_t column_offset) {
  return ExpressionParser(s, line, column_offset).parse_all();
}

std::vector<Entry> parse_ids_file(std::string_view text, ParseStats* stats) {
  std::vector<Entry> entries;
  std::unordered_set<char32_t> seen;
  ParseStats local;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      ++local.blank_lines;
      continue;
    }
    if (line.starts_with(";;") || line.starts_with("#")) {
      ++local.comment_lines;
      continue;
    }

    std::vector<std::string_view> fields;
    std::size_t fpos = 0;
    while (true) {
      const auto tab = line.find('\t', fpos);
      fields.push_back(line.substr(fpos, tab == std::string_view::npos
                                             ? std::string_view::npos
                                             : tab - fpos));
      if (tab == std::string_view::npos) break;
      fpos = tab + 1;
    }
    if (fields.size() < 3)
      throw ParseError("expected codepoint, glyph and at least one expression",
                       line_no, 1);

    Entry entry;
    entry.codepoint = parse_codepoint_field(fields[0], line_no);
    const std::size_t glyph_column = utf8::length(fields[0]) + 2;
    const auto glyph = utf8::single(fields[1]);
    if (!glyph || *glyph != entry.codepoint)
      throw ParseError("glyph does not match codepoint " +
                           std::string(fields[0]),
                       line_no, glyph_column);
    entry.glyph = std::string(fields[1]);
    if (!seen.insert(entry.codepoint).second)
      throw ParseError("duplicate codepoint " + std::string(fields[0]),
                       line_no, 1);

    std::size_t column = glyph_column + utf8::length(fields[1]) + 1;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      entry.variants.push_back(parse_variant_field(fields[i], line_no, column));
      column += utf8::length(fields[i]) + 1;
    }
    local.variants += entry.variants.size();
    entries.push_back(std::move(entry));
  }
  local.lines = line_no;
  local.entries = entries.size();
  if (stats) *stats = local;
  return entries;
}

const Expression& select_variant(const Entry& entry,
                                 std::span<const SourceTag> preference) {
  for (SourceTag tag : preference)
    for (const auto& v : entry.variants)
      if (v.tags.contains(tag)) return v.expression;
  for (const auto& v : entry.variants)
    if (v.tags.empty()) return v.expression;
  return entry.variants.front().expression;
}

}  // namespace radical::ids
