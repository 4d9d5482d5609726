#ifndef RADICAL_IDS_HPP_
#define RADICAL_IDS_HPP_

// Ideographic Description Sequence (IDS) dictionary parsing.
//
// A dictionary line looks like
//
//   U+4E43<TAB>乃<TAB>⿻𠄌乀[GTK]<TAB>⿻丿𠄎[J]
//
// i.e. a codepoint, the glyph it names, and one or more prefix-notation
// expressions, each optionally suffixed by a bracketed group of region tags.

#include <bitset>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace radical::ids {

// Ideographic description characters U+2FF0..U+2FFB.
constexpr char32_t kFirstIdc = 0x2FF0;
constexpr char32_t kLastIdc = 0x2FFB;

constexpr bool is_idc(char32_t cp) { return cp >= kFirstIdc && cp <= kLastIdc; }

// ⿲ and ⿳ take three operands, every other IDC takes two.
constexpr int idc_arity(char32_t idc) {
  return (idc == 0x2FF2 || idc == 0x2FF3) ? 3 : 2;
}

class ParseError : public std::runtime_error {
 public:
  // line and column are 1-based; column counts characters, not bytes.
  // Zero means "not applicable".
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// A region tag: one uppercase ASCII letter (G, H, T, J, K, V, ...).
class SourceTag {
 public:
  explicit SourceTag(char letter);
  char letter() const { return letter_; }
  friend bool operator==(SourceTag, SourceTag) = default;

 private:
  char letter_;
};

// Parses "GTHJKV" or "G,T,H" into an ordered tag list. Throws
// std::invalid_argument on anything that is not an uppercase letter.
std::vector<SourceTag> parse_tag_list(std::string_view s);

const std::vector<SourceTag>& default_preference();

class TagSet {
 public:
  void insert(SourceTag t) { bits_.set(t.letter() - 'A'); }
  bool contains(SourceTag t) const { return bits_.test(t.letter() - 'A'); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  // Letters in alphabetical order.
  std::string letters() const;
  friend bool operator==(const TagSet&, const TagSet&) = default;

 private:
  std::bitset<26> bits_;
};

struct Expression;

struct Operator {
  char32_t idc;
  std::vector<Expression> children;
};

struct CharLeaf {
  char32_t cp;
};

// An unencoded component such as "&CDP-8B5E;". Stored verbatim.
struct EntityLeaf {
  std::string token;
};

struct Expression {
  std::variant<CharLeaf, EntityLeaf, Operator> node;

  static Expression leaf(char32_t cp) { return {CharLeaf{cp}}; }
  static Expression entity(std::string token) {
    return {EntityLeaf{std::move(token)}};
  }
  static Expression op(char32_t idc, std::vector<Expression> children) {
    return {Operator{idc, std::move(children)}};
  }

  bool is_operator() const { return std::holds_alternative<Operator>(node); }
  const CharLeaf* as_char() const { return std::get_if<CharLeaf>(&node); }
  const EntityLeaf* as_entity() const { return std::get_if<EntityLeaf>(&node); }
  const Operator* as_operator() const { return std::get_if<Operator>(&node); }

  std::string serialize() const;
  void serialize_to(std::string& out) const;

  friend bool operator==(const Expression& a, const Expression& b);
};

struct Variant {
  Expression expression;
  TagSet tags;
};

struct Entry {
  char32_t codepoint;
  std::string glyph;
  std::vector<Variant> variants;
};

// True for `&[A-Za-z0-9+-]+;`.
bool is_entity_token(std::string_view s);

// Recursive-descent parse of one prefix-notation expression. The whole
// input must be consumed. Errors report column positions relative to `s`
// (plus `column_offset`) on line `line`.
Expression parse_ids_expression(std::string_view s, std::size_t line = 0,
                                std::size_t column_offset = 0);

struct ParseStats {
  std::size_t lines = 0;
  std::size_t comment_lines = 0;
  std::size_t blank_lines = 0;
  std::size_t entries = 0;
  std::size_t variants = 0;
};

// Parses a whole dictionary document. Lines starting with ";;" or "#" are
// comments; LF and CRLF endings are both accepted. Duplicate codepoints are
// an error.
std::vector<Entry> parse_ids_file(std::string_view text,
                                  ParseStats* stats = nullptr);

// Picks the variant matching the best-ranked tag in `preference`, falling
// back to the first untagged variant, then to the first variant.
const Expression& select_variant(const Entry& entry,
                                 std::span<const SourceTag> preference);

}  // namespace radical::ids

#endif  // RADICAL_IDS_HPP_
