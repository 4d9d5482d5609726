#ifndef RADICAL_UTF8_HPP_
#define RADICAL_UTF8_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radical::utf8 {

class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Decodes one scalar value starting at `pos`, advancing `pos` past it.
// Throws DecodeError on malformed, overlong or surrogate sequences.
char32_t next(std::string_view s, std::size_t& pos);

std::u32string decode(std::string_view s);

void append(std::string& out, char32_t cp);
std::string encode(char32_t cp);
std::string encode(std::u32string_view cps);

// Returns the scalar if `s` holds exactly one encoded character.
std::optional<char32_t> single(std::string_view s);

std::size_t length(std::string_view s);

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string_view> split_whitespace(std::string_view s);

}  // namespace radical::utf8

#endif  // RADICAL_UTF8_HPP_
