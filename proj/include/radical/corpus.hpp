#ifndef RADICAL_CORPUS_HPP_
#define RADICAL_CORPUS_HPP_

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "radical/decomposer.hpp"

namespace radical {

struct TransformConfig {
  DecompositionConfig decomposition;
  // Token placed between word groups of a decomposed line.
  std::string word_boundary_marker = "‖";  // ‖

  // Rejects markers that are empty, contain whitespace, or could be
  // mistaken for a piece: an IDC operator, an entity token, or a character
  // the dictionary knows about.
  void validate(const DecompositionTable& table) const;
};

struct TransformReport {
  std::size_t lines_in = 0;
  std::size_t lines_out = 0;
  std::size_t tokens_in = 0;
  std::size_t pieces_out = 0;
  std::size_t chars_decomposed = 0;
  std::size_t chars_passed_through = 0;

  TransformReport& operator+=(const TransformReport& o);
  friend bool operator==(const TransformReport&, const TransformReport&) = default;

  // "key: value" lines, one per field.
  std::string to_text() const;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (at line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Transforms lines of a word-segmented corpus. Keeps a per-instance cache of
// character decompositions; use one instance per thread.
class LineTransformer {
 public:
  LineTransformer(const DecompositionTable& table, const TransformConfig& cfg)
      : table_(&table), cfg_(&cfg) {}

  // Lines without any decomposable character come back byte-identical.
  // Otherwise every token becomes a space-separated piece group and groups
  // are joined by the boundary marker. Characters without a dictionary entry
  // are never split from their neighbours.
  std::string transform(std::string_view line, TransformReport* report = nullptr);

 private:
  const PieceSequence& pieces_of(char32_t c);

  const DecompositionTable* table_;
  const TransformConfig* cfg_;
  std::unordered_map<char32_t, PieceSequence> cache_;
};

std::string transform_line(std::string_view line,
                           const DecompositionTable& table,
                           const TransformConfig& cfg);

// Streams `in` to `out` line by line. Lines are processed in batches of
// `batch_lines`, each batch split across `threads` workers; output order and
// the report do not depend on the thread count. Throws IoError on stream
// failure.
TransformReport transform_corpus(std::istream& in, std::ostream& out,
                                 const DecompositionTable& table,
                                 const TransformConfig& cfg,
                                 unsigned threads = 1,
                                 std::size_t batch_lines = 4096);

}  // namespace radical

#endif  // RADICAL_CORPUS_HPP_
