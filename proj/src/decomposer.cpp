#include "radical/decomposer.hpp"

#include <algorithm>
#include <stdexcept>

#include "radical/utf8.hpp"

namespace radical {
namespace {

void collect_leaves(const ids::Expression& e,
                    std::unordered_set<char32_t>& out) {
  if (const auto* c = e.as_char()) {
    out.insert(c->cp);
  } else if (const auto* o = e.as_operator()) {
    for (const auto& child : o->children) collect_leaves(child, out);
  }
}

}  // namespace

void DecompositionConfig::validate() const {
  if (max_fixpoint_iterations == 0)
    throw std::invalid_argument("max_fixpoint_iterations must be positive");
  if (level > max_fixpoint_iterations)
    throw std::invalid_argument("level " + std::to_string(level) +
                                " exceeds max_fixpoint_iterations " +
                                std::to_string(max_fixpoint_iterations));
}

DecompositionTable DecompositionTable::build(
    std::span<const ids::Entry> entries,
    std::span<const ids::SourceTag> preference) {
  if (preference.empty())
    throw std::invalid_argument("empty variant preference");
  DecompositionTable t;
  t.preference_.assign(preference.begin(), preference.end());
  t.map_.reserve(entries.size());
  for (const auto& entry : entries) {
    const auto glyph = utf8::single(entry.glyph);
    if (!glyph)
      throw std::invalid_argument("entry glyph is not a single character: " +
                                  entry.glyph);
    if (entry.variants.empty())
      throw std::invalid_argument("entry without variants: " + entry.glyph);
    const auto& chosen = ids::select_variant(entry, preference);
    if (!t.map_.emplace(*glyph, chosen).second)
      throw std::invalid_argument("duplicate glyph in table: " + entry.glyph);
    const auto* leaf = chosen.as_char();
    if (leaf && leaf->cp == *glyph) t.atoms_.insert(*glyph);
    collect_leaves(chosen, t.leaves_);
  }
  return t;
}

const ids::Expression* DecompositionTable::find(char32_t c) const {
  auto it = map_.find(c);
  return it == map_.end() ? nullptr : &it->second;
}

bool DecompositionTable::is_atom(char32_t c) const {
  return !map_.count(c) || atoms_.count(c);
}

// Depth-first expansion is equivalent to `depth` breadth-wise substitution
// passes: every piece produced at pass k is substituted again at pass k+1.
// `ancestors` holds the characters whose expansion produced the current one,
// so a character recurring inside its own expansion stays an atom.
void DecompositionTable::expand(char32_t c, unsigned depth, bool keep_idc,
                                std::vector<char32_t>& ancestors,
                                PieceSequence& out) const {
  const ids::Expression* e = depth == 0 || is_atom(c) ? nullptr : find(c);
  if (!e || std::find(ancestors.begin(), ancestors.end(), c) != ancestors.end()) {
    out.push_back(utf8::encode(c));
    return;
  }
  ancestors.push_back(c);
  expand_expression(*e, depth - 1, keep_idc, ancestors, out);
  ancestors.pop_back();
}

void DecompositionTable::expand_expression(const ids::Expression& e,
                                           unsigned depth, bool keep_idc,
                                           std::vector<char32_t>& ancestors,
                                           PieceSequence& out) const {
  if (const auto* c = e.as_char()) {
    expand(c->cp, depth, keep_idc, ancestors, out);
  } else if (const auto* ent = e.as_entity()) {
    out.push_back(ent->token);
  } else {
    const auto& o = *e.as_operator();
    if (keep_idc) out.push_back(utf8::encode(o.idc));
    for (const auto& child : o.children)
      expand_expression(child, depth, keep_idc, ancestors, out);
  }
}

void DecompositionTable::decompose_into(char32_t c,
                                        const DecompositionConfig& cfg,
                                        PieceSequence& out) const {
  std::vector<char32_t> ancestors;
  expand(c, cfg.level, cfg.keep_idc_operators, ancestors, out);
}

PieceSequence DecompositionTable::decompose(
    char32_t c, const DecompositionConfig& cfg) const {
  PieceSequence out;
  decompose_into(c, cfg, out);
  return out;
}

FixpointResult DecompositionTable::decompose_to_fixpoint(
    char32_t c, const DecompositionConfig& cfg) const {
  DecompositionConfig step = cfg;
  step.level = 0;
  FixpointResult result;
  result.pieces = decompose(c, step);
  for (unsigned level = 1; level <= cfg.max_fixpoint_iterations; ++level) {
    step.level = level;
    PieceSequence next = decompose(c, step);
    if (next == result.pieces) return result;
    result.pieces = std::move(next);
    result.levels_used = level;
  }
  // Stable only if one more pass would not change anything.
  step.level = cfg.max_fixpoint_iterations + 1;
  result.converged = decompose(c, step) == result.pieces;
  return result;
}

}  // namespace radical
