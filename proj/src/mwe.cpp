#include "radical/mwe.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "radical/parallel.hpp"
#include "radical/utf8.hpp"

namespace radical::mwe {
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = eol + 1;
  }
  return lines;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && utf8::is_ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && utf8::is_ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

// Distinct candidate phrases of one sentence, sorted.
std::vector<std::string> sentence_phrases(const TaggedSentence& sentence,
                                          std::span<const PosPattern> patterns) {
  std::vector<std::string> out;
  for (const auto& c : match_patterns(sentence, patterns))
    out.push_back(c.phrase());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<std::string>> phrases_per_sentence(
    std::span<const TaggedSentence> corpus,
    std::span<const PosPattern> patterns, unsigned threads) {
  std::vector<std::vector<std::string>> out(corpus.size());
  parallel_chunks(corpus.size(), threads,
                  [&](unsigned, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i)
                      out[i] = sentence_phrases(corpus[i], patterns);
                  });
  return out;
}

std::set<std::string> frequent_phrases(std::span<const TaggedSentence> corpus,
                                       std::span<const PosPattern> patterns,
                                       std::size_t min_frequency,
                                       unsigned threads) {
  std::set<std::string> keep;
  for (const auto& c :
       extract_candidates(corpus, patterns, min_frequency, threads))
    keep.insert(c.phrase());
  return keep;
}

}  // namespace

std::vector<TaggedSentence> parse_tagged_corpus(std::string_view text) {
  std::vector<TaggedSentence> out;
  TaggedSentence current;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (trim(line).empty()) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3)
      throw FormatError("expected 3 tab-separated fields, found " +
                            std::to_string(fields.size()),
                        i + 1);
    if (fields[0].empty() || fields[1].empty())
      throw FormatError("empty surface or tag", i + 1);
    TaggedToken tok{std::string(fields[0]), std::string(fields[1]),
                    std::string(fields[2])};
    if (tok.lemma.empty() || tok.lemma == "<unknown>") tok.lemma = tok.surface;
    current.push_back(std::move(tok));
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

TagMatcher::TagMatcher(std::string spec) : spec_(std::move(spec)) {
  if (spec_.empty()) throw std::invalid_argument("empty tag matcher");
  if (spec_.back() == '*') {
    prefix_ = true;
    if (spec_.find('*') != spec_.size() - 1)
      throw std::invalid_argument("'*' is only allowed at the end of a tag: " +
                                  spec_);
  } else if (spec_.find('*') != std::string::npos) {
    throw std::invalid_argument("'*' is only allowed at the end of a tag: " +
                                spec_);
  }
}

bool TagMatcher::matches(std::string_view tag) const {
  if (!prefix_) return tag == spec_;
  return tag.starts_with(std::string_view(spec_).substr(0, spec_.size() - 1));
}

std::vector<PosPattern> parse_patterns(std::string_view text) {
  std::vector<PosPattern> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw FormatError("expected 'name: TAG TAG ...'", i + 1);
    PosPattern p;
    p.name = std::string(trim(line.substr(0, colon)));
    if (p.name.empty()) throw FormatError("pattern without a name", i + 1);
    for (auto tag : utf8::split_whitespace(line.substr(colon + 1))) {
      try {
        p.tags.emplace_back(std::string(tag));
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), i + 1);
      }
    }
    if (p.length() < PosPattern::kMinLength || p.length() > PosPattern::kMaxLength)
      throw FormatError("pattern '" + p.name + "' has " +
                            std::to_string(p.length()) +
                            " tags; expected 2 to 7",
                        i + 1);
    out.push_back(std::move(p));
  }
  return out;
}

std::string MweCandidate::phrase() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<MweCandidate> match_patterns(const TaggedSentence& sentence,
                                         std::span<const PosPattern> patterns) {
  std::vector<MweCandidate> out;
  for (std::size_t start = 0; start < sentence.size(); ++start) {
    for (const auto& p : patterns) {
      if (start + p.length() > sentence.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < p.length() && ok; ++k)
        ok = p.tags[k].matches(sentence[start + k].pos);
      if (!ok) continue;
      MweCandidate c;
      c.pattern = p.name;
      for (std::size_t k = 0; k < p.length(); ++k)
        c.tokens.push_back(sentence[start + k].surface);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<MweCandidate> extract_candidates(
    std::span<const TaggedSentence> corpus,
    std::span<const PosPattern> patterns, std::size_t min_frequency,
    unsigned threads) {
  std::vector<std::vector<MweCandidate>> per_sentence(corpus.size());
  parallel_chunks(corpus.size(), threads,
                  [&](unsigned, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i)
                      per_sentence[i] = match_patterns(corpus[i], patterns);
                  });
  std::map<std::string, MweCandidate> merged;
  for (auto& sentence : per_sentence) {
    for (auto& c : sentence) {
      auto [it, inserted] = merged.try_emplace(c.phrase(), c);
      if (!inserted) ++it->second.frequency;
    }
  }
  std::vector<MweCandidate> out;
  for (auto& [phrase, c] : merged)
    if (c.frequency >= min_frequency) out.push_back(std::move(c));
  return out;
}

double score_pair(const CooccurrenceCounts& c) {
  if (c.joint > c.source || c.joint > c.target)
    throw std::invalid_argument(
        "inconsistent co-occurrence counts: joint " + std::to_string(c.joint) +
        " exceeds a marginal (" + std::to_string(c.source) + ", " +
        std::to_string(c.target) + ")");
  if (c.source == 0 || c.target == 0) return 0.0;
  return 2.0 * static_cast<double>(c.joint) /
         static_cast<double>(c.source + c.target);
}

std::vector<BilingualMwePair> extract_bilingual(
    std::span<const TaggedSentence> source,
    std::span<const TaggedSentence> target,
    std::span<const PosPattern> source_patterns,
    std::span<const PosPattern> target_patterns, std::size_t min_frequency,
    unsigned threads) {
  if (source.size() != target.size())
    throw AlignmentError("unaligned corpora: " + std::to_string(source.size()) +
                         " source vs " + std::to_string(target.size()) +
                         " target sentences");

  const auto src_keep =
      frequent_phrases(source, source_patterns, min_frequency, threads);
  const auto tgt_keep =
      frequent_phrases(target, target_patterns, min_frequency, threads);
  const auto src_sentences = phrases_per_sentence(source, source_patterns, threads);
  const auto tgt_sentences = phrases_per_sentence(target, target_patterns, threads);

  std::map<std::string, std::size_t> src_count;
  std::map<std::string, std::size_t> tgt_count;
  std::map<std::pair<std::string, std::string>, std::size_t> joint;
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::vector<const std::string*> s;
    std::vector<const std::string*> t;
    for (const auto& p : src_sentences[i])
      if (src_keep.count(p)) {
        s.push_back(&p);
        ++src_count[p];
      }
    for (const auto& p : tgt_sentences[i])
      if (tgt_keep.count(p)) {
        t.push_back(&p);
        ++tgt_count[p];
      }
    for (const auto* a : s)
      for (const auto* b : t) ++joint[{*a, *b}];
  }

  std::vector<BilingualMwePair> out;
  out.reserve(joint.size());
  for (const auto& [key, n] : joint) {
    const double score =
        score_pair({src_count.at(key.first), tgt_count.at(key.second), n});
    out.push_back({key.first, key.second, score});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const BilingualMwePair& a, const BilingualMwePair& b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.source != b.source) return a.source < b.source;
                     return a.target < b.target;
                   });
  return out;
}

std::vector<BilingualMwePair> filter_pairs(
    std::span<const BilingualMwePair> pairs, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw std::invalid_argument("threshold must lie in [0, 1]");
  std::vector<BilingualMwePair> out;
  for (const auto& p : pairs)
    if (p.score >= threshold) out.push_back(p);
  return out;
}

std::vector<BilingualMwePair> decompose_glossary(
    std::span<const BilingualMwePair> pairs, const DecompositionTable& table,
    const TransformConfig& cfg) {
  LineTransformer transformer(table, cfg);
  std::vector<BilingualMwePair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs)
    out.push_back({transformer.transform(p.source), p.target, p.score});
  return out;
}

InjectedCorpus inject_glossary(std::span<const std::string> train_source,
                               std::span<const std::string> train_target,
                               std::span<const BilingualMwePair> pairs,
                               std::size_t repeat) {
  if (train_source.size() != train_target.size())
    throw AlignmentError("unaligned training corpora: " +
                         std::to_string(train_source.size()) + " vs " +
                         std::to_string(train_target.size()) + " lines");
  InjectedCorpus out;
  out.source.assign(train_source.begin(), train_source.end());
  out.target.assign(train_target.begin(), train_target.end());
  for (std::size_t r = 0; r < repeat; ++r)
    for (const auto& p : pairs) {
      out.source.push_back(p.source);
      out.target.push_back(p.target);
    }
  return out;
}

std::string format_glossary(std::span<const BilingualMwePair> pairs) {
  std::string out;
  char buf[32];
  for (const auto& p : pairs) {
    for (const std::string* s : {&p.source, &p.target})
      if (s->find_first_of("\t\n") != std::string::npos)
        throw std::invalid_argument("glossary phrase contains tab or newline");
    std::snprintf(buf, sizeof(buf), "%.6f", p.score);
    out += p.source;
    out.push_back('\t');
    out += p.target;
    out.push_back('\t');
    out += buf;
    out.push_back('\n');
  }
  return out;
}

void write_glossary(std::ostream& out, std::span<const BilingualMwePair> pairs) {
  out << format_glossary(pairs);
}

std::vector<BilingualMwePair> parse_glossary(std::string_view text) {
  std::vector<BilingualMwePair> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 3)
      throw FormatError("expected source<TAB>target<TAB>score", i + 1);
    if (fields[0].empty() || fields[1].empty())
      throw FormatError("empty glossary phrase", i + 1);
    double score = 0.0;
    const auto* first = fields[2].data();
    const auto* last = first + fields[2].size();
    auto [ptr, ec] = std::from_chars(first, last, score);
    if (ec != std::errc() || ptr != last || !(score >= 0.0 && score <= 1.0))
      throw FormatError("score must be a number in [0, 1]", i + 1);
    out.push_back({std::string(fields[0]), std::string(fields[1]), score});
  }
  return out;
}

}  // namespace radical::mwe
