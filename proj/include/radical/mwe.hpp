#ifndef RADICAL_MWE_HPP_
#define RADICAL_MWE_HPP_

// Bilingual multiword-expression extraction.
//
// Monolingual candidates come from PoS-pattern matching over tagger output.
// Candidates of aligned sentences are paired and scored with the Dice
// coefficient over sentence-level co-occurrence:
//
//   dice(s, t) = 2 c(s,t) / (c(s) + c(t))
//
// where c(s) counts the sentences containing s and c(s,t) the aligned
// sentence pairs containing both. The score stands in for an external
// aligner's translation score so a fixed threshold stays meaningful on [0,1].

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "radical/corpus.hpp"

namespace radical::mwe {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Sentence counts differ between sides that must be aligned.
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TaggedToken {
  std::string surface;
  std::string pos;
  std::string lemma;
};

using TaggedSentence = std::vector<TaggedToken>;

// `surface<TAB>pos<TAB>lemma` per line, blank line between sentences. A
// lemma of "<unknown>" or "" falls back to the surface form.
std::vector<TaggedSentence> parse_tagged_corpus(std::string_view text);

// Matches one tag: exact ("NN"), prefix ("NN*") or any ("*").
class TagMatcher {
 public:
  explicit TagMatcher(std::string spec);
  bool matches(std::string_view tag) const;
  const std::string& spec() const { return spec_; }

 private:
  std::string spec_;
  bool prefix_ = false;
};

struct PosPattern {
  static constexpr std::size_t kMinLength = 2;
  static constexpr std::size_t kMaxLength = 7;

  std::string name;
  std::vector<TagMatcher> tags;

  std::size_t length() const { return tags.size(); }
};

// `name: TAG TAG ...` per line; '#' comments and blank lines are skipped.
// Each pattern must have 2..7 tags.
std::vector<PosPattern> parse_patterns(std::string_view text);

struct MweCandidate {
  std::vector<std::string> tokens;
  std::string pattern;
  std::size_t frequency = 1;

  // Surface tokens joined by single spaces.
  std::string phrase() const;
};

// Every contiguous window matched by any pattern, overlaps included, ordered
// by start position then pattern order.
std::vector<MweCandidate> match_patterns(const TaggedSentence& sentence,
                                         std::span<const PosPattern> patterns);

// Corpus-level candidates, merged by phrase. `frequency` is the number of
// matches; candidates below `min_frequency` are dropped. Sorted by phrase.
std::vector<MweCandidate> extract_candidates(
    std::span<const TaggedSentence> corpus,
    std::span<const PosPattern> patterns, std::size_t min_frequency = 1,
    unsigned threads = 1);

struct CooccurrenceCounts {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t joint = 0;
};

// Dice coefficient; 0 when either marginal is 0. Throws
// std::invalid_argument if joint exceeds either marginal.
double score_pair(const CooccurrenceCounts& counts);

struct BilingualMwePair {
  std::string source;
  std::string target;
  double score = 0.0;

  friend bool operator==(const BilingualMwePair&, const BilingualMwePair&) = default;
};

// Pairs every source candidate with every target candidate of the same
// aligned sentence pair. Sorted by descending score, then source, then
// target. Throws AlignmentError when the corpora differ in length.
std::vector<BilingualMwePair> extract_bilingual(
    std::span<const TaggedSentence> source,
    std::span<const TaggedSentence> target,
    std::span<const PosPattern> source_patterns,
    std::span<const PosPattern> target_patterns,
    std::size_t min_frequency = 1, unsigned threads = 1);

constexpr double kDefaultThreshold = 0.85;

// Keeps pairs with score >= threshold, in order.
std::vector<BilingualMwePair> filter_pairs(
    std::span<const BilingualMwePair> pairs,
    double threshold = kDefaultThreshold);

// Replaces each source phrase with its transformed piece sequence.
std::vector<BilingualMwePair> decompose_glossary(
    std::span<const BilingualMwePair> pairs, const DecompositionTable& table,
    const TransformConfig& cfg);

struct InjectedCorpus {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

// Appends each pair `repeat` times as an extra aligned line pair.
InjectedCorpus inject_glossary(std::span<const std::string> train_source,
                               std::span<const std::string> train_target,
                               std::span<const BilingualMwePair> pairs,
                               std::size_t repeat = 1);

// Glossary TSV: `source<TAB>target<TAB>score` with six decimals.
std::string format_glossary(std::span<const BilingualMwePair> pairs);
void write_glossary(std::ostream& out, std::span<const BilingualMwePair> pairs);
std::vector<BilingualMwePair> parse_glossary(std::string_view text);

}  // namespace radical::mwe

#endif  // RADICAL_MWE_HPP_
