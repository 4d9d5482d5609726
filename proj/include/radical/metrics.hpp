#ifndef RADICAL_METRICS_HPP_
#define RADICAL_METRICS_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radical::metrics {

using Tokens = std::vector<std::string>;

// ---------------------------------------------------------------------------
// BLEU

struct BleuOptions {
  // Off: a zero n-gram precision zeroes the score. On: add-one smoothing of
  // the n = 2..4 counts, for toy corpora.
  bool smooth = false;
};

struct BleuResult {
  std::array<double, 4> precisions{};
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  double brevity_penalty = 0.0;
  double score = 0.0;  // 0..100
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
};

// Corpus-level single-reference BLEU with clipped n-gram counts, n = 1..4.
// Throws std::invalid_argument on an empty corpus or a length mismatch.
BleuResult bleu(std::span<const Tokens> hypotheses,
                std::span<const Tokens> references, BleuOptions options = {});

// "BLEU = 27.31, 60.0/33.3/22.2/14.3 (BP=1.000, ratio=1.000, hyp_len=.., ref_len=..)"
std::string format_bleu(const BleuResult& r);

// ---------------------------------------------------------------------------
// Vocabulary size and embedding-table parameter estimate

struct CorpusVocab {
  std::string name;
  std::size_t types = 0;
  std::size_t tokens = 0;
  // types * embedding_dim: embedding tables only, not the full network.
  std::size_t embedding_parameters = 0;
};

struct VocabReduction {
  std::string from;
  std::string to;
  // (from.types - to.types) / from.types * 100; negative means growth.
  double percent = 0.0;
};

struct VocabReport {
  std::size_t embedding_dim = 0;
  std::vector<CorpusVocab> corpora;
  // One entry per ordered pair i < j of `corpora`.
  std::vector<VocabReduction> reductions;
};

struct NamedCorpus {
  std::string name;
  std::vector<std::string> lines;
};

VocabReport vocab_report(std::span<const NamedCorpus> corpora,
                         std::size_t embedding_dim);

std::string format_vocab_report(const VocabReport& r);

// ---------------------------------------------------------------------------
// Direct Assessment

struct Assessment {
  std::string system;
  std::string translation_id;
  std::string assessor_id;
  double score = 0.0;  // 0..100
};

// `system,translation_id,assessor_id,score`; a header line whose last field
// is not numeric is skipped.
std::vector<Assessment> parse_assessments_csv(std::string_view text);

struct SystemScore {
  std::string system;
  double average_raw = 0.0;
  double average_z = 0.0;
  std::size_t translations = 0;  // n
  std::size_t assessments = 0;   // N
  // Per-translation average z, ordered by translation id. These are the
  // samples compared by the significance test.
  std::vector<double> translation_z;
};

struct DaReport {
  // Ordered by average_z descending, then by name.
  std::vector<SystemScore> systems;
  // Assessors with zero score variance; their z contributions are dropped.
  std::vector<std::string> excluded_assessors;
};

// z score of each assessment against its assessor's mean and population
// stddev, in input order. NaN for assessors with zero variance, whose ids are
// appended to `excluded` in sorted order.
std::vector<double> standardize(std::span<const Assessment> assessments,
                                std::vector<std::string>* excluded = nullptr);

// z = (raw - assessor mean) / assessor population stddev. Scores are
// averaged per translation first, then per system. Throws
// std::invalid_argument for scores outside [0, 100].
DaReport da_aggregate(std::span<const Assessment> assessments);

// ---------------------------------------------------------------------------
// Wilcoxon rank-sum (Mann-Whitney)

struct RankSumOptions {
  // Exact permutation p when both samples have at most this many values.
  std::size_t exact_limit = 8;
};

struct RankSumResult {
  double rank_sum = 0.0;  // sum of midranks of the first sample
  double expected = 0.0;  // under the null
  double variance = 0.0;  // tie-corrected
  double z = 0.0;
  double p = 1.0;  // two-sided
  bool exact = false;
};

// Throws std::invalid_argument if either sample is empty. When every value
// is tied the p value is 1.
RankSumResult wilcoxon_rank_sum(std::span<const double> a,
                                std::span<const double> b,
                                RankSumOptions options = {});

// ---------------------------------------------------------------------------
// Clustering

struct Cluster {
  std::size_t rank = 0;  // 1-based
  std::vector<std::string> systems;
};

// Walks systems in report order. A system opens a new cluster when every
// system already placed beats it (two-sided p < alpha with a higher mean);
// otherwise it joins the current cluster.
std::vector<Cluster> cluster_systems(const DaReport& report,
                                     double alpha = 0.05);

// Table with columns Ave. raw, Ave. z, n, N, system. A rule separates
// clusters when `clusters` is non-empty.
std::string format_da_table(const DaReport& report,
                            std::span<const Cluster> clusters = {});

}  // namespace radical::metrics

#endif  // RADICAL_METRICS_HPP_
