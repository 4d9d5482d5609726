#ifndef RADICAL_DECOMPOSER_HPP_
#define RADICAL_DECOMPOSER_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "radical/ids.hpp"

namespace radical {

struct DecompositionConfig {
  // Number of substitution passes; 0 is the identity.
  unsigned level = 0;
  // Emit IDC operators (⿰, ⿱, ...) as pieces.
  bool keep_idc_operators = true;
  unsigned max_fixpoint_iterations = 16;

  // Throws std::invalid_argument unless 0 < max_fixpoint_iterations and
  // level <= max_fixpoint_iterations.
  void validate() const;
};

// One UTF-8 piece: an encoded character, an entity token or an operator.
using Piece = std::string;
using PieceSequence = std::vector<Piece>;

struct FixpointResult {
  PieceSequence pieces;
  unsigned levels_used = 0;
  // False when max_fixpoint_iterations passes did not stabilize the sequence.
  bool converged = true;
};

// Immutable character -> selected expression map.
class DecompositionTable {
 public:
  DecompositionTable() = default;

  // Throws std::invalid_argument on duplicate glyphs.
  static DecompositionTable build(
      std::span<const ids::Entry> entries,
      std::span<const ids::SourceTag> preference = ids::default_preference());

  std::size_t size() const { return map_.size(); }
  bool contains(char32_t c) const { return map_.count(c) != 0; }

  // True if `c` occurs anywhere in the dictionary, as a glyph or as a leaf.
  bool mentions(char32_t c) const {
    return map_.count(c) != 0 || leaves_.count(c) != 0;
  }

  // Selected expression, or nullptr when `c` has no entry.
  const ids::Expression* find(char32_t c) const;

  // No entry, or the entry is its own glyph.
  bool is_atom(char32_t c) const;

  const std::vector<ids::SourceTag>& preference() const { return preference_; }

  PieceSequence decompose(char32_t c, const DecompositionConfig& cfg) const;

  // Appends the level-`cfg.level` pieces of `c` to `out`.
  void decompose_into(char32_t c, const DecompositionConfig& cfg,
                      PieceSequence& out) const;

  FixpointResult decompose_to_fixpoint(char32_t c,
                                       const DecompositionConfig& cfg) const;

 private:
  void expand(char32_t c, unsigned depth, bool keep_idc,
              std::vector<char32_t>& ancestors, PieceSequence& out) const;
  void expand_expression(const ids::Expression& e, unsigned depth,
                         bool keep_idc, std::vector<char32_t>& ancestors,
                         PieceSequence& out) const;

  std::unordered_map<char32_t, ids::Expression> map_;
  std::unordered_set<char32_t> atoms_;
  std::unordered_set<char32_t> leaves_;
  std::vector<ids::SourceTag> preference_;
};

}  // namespace radical

#endif  // RADICAL_DECOMPOSER_HPP_
