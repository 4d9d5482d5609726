#include "radical/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "radical/utf8.hpp"

namespace radical::metrics {
namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

std::string with_thousands(std::size_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s = buf;
  // Avoid printing "-0.000".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
    s.erase(0, 1);
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  const std::size_t len = utf8::length(s);
  return len >= width ? s : std::string(width - len, ' ') + s;
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Number of size-k subsets of `doubled_ranks` with each doubled rank sum.
std::vector<double> subset_sum_counts(const std::vector<long>& doubled_ranks,
                                      std::size_t k) {
  const long total =
      std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), 0L);
  std::vector<std::vector<double>> dp(k + 1,
                                      std::vector<double>(total + 1, 0.0));
  dp[0][0] = 1.0;
  for (long r : doubled_ranks)
    for (std::size_t j = k; j >= 1; --j)
      for (long s = total; s >= r; --s) dp[j][s] += dp[j - 1][s - r];
  return dp[k];
}

}  // namespace

// ---------------------------------------------------------------------------

BleuResult bleu(std::span<const Tokens> hypotheses,
                std::span<const Tokens> references, BleuOptions options) {
  if (hypotheses.empty()) throw std::invalid_argument("empty corpus");
  if (hypotheses.size() != references.size())
    throw std::invalid_argument(
        "hypothesis/reference count mismatch: " +
        std::to_string(hypotheses.size()) + " vs " +
        std::to_string(references.size()));

  BleuResult r;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const auto& hyp = hypotheses[s];
    const auto& ref = references[s];
    r.hypothesis_length += hyp.size();
    r.reference_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto h = count_ngrams(hyp, n);
      const auto g = count_ngrams(ref, n);
      for (const auto& [ngram, count] : h) {
        auto it = g.find(ngram);
        if (it != g.end()) r.matches[n - 1] += std::min(count, it->second);
      }
      if (hyp.size() >= n) r.totals[n - 1] += hyp.size() - n + 1;
    }
  }

  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < 4; ++n) {
    double m = static_cast<double>(r.matches[n]);
    double t = static_cast<double>(r.totals[n]);
    if (options.smooth && n > 0) {
      m += 1.0;
      t += 1.0;
    }
    r.precisions[n] = t > 0.0 ? m / t : 0.0;
    if (r.precisions[n] == 0.0)
      zero = true;
    else
      log_sum += std::log(r.precisions[n]);
  }

  const double c = static_cast<double>(r.hypothesis_length);
  const double ref_len = static_cast<double>(r.reference_length);
  if (r.hypothesis_length > r.reference_length)
    r.brevity_penalty = 1.0;
  else if (r.hypothesis_length == 0)
    r.brevity_penalty = 0.0;
  else
    r.brevity_penalty = std::exp(1.0 - ref_len / c);

  r.score = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / 4.0);
  return r;
}

std::string format_bleu(const BleuResult& r) {
  char buf[256];
  const double ratio =
      r.reference_length
          ? static_cast<double>(r.hypothesis_length) /
                static_cast<double>(r.reference_length)
          : 0.0;
  std::snprintf(buf, sizeof(buf),
                "BLEU = %.2f, %.1f/%.1f/%.1f/%.1f (BP=%.3f, ratio=%.3f, "
                "hyp_len=%zu, ref_len=%zu)",
                r.score, 100 * r.precisions[0], 100 * r.precisions[1],
                100 * r.precisions[2], 100 * r.precisions[3],
                r.brevity_penalty, ratio, r.hypothesis_length,
                r.reference_length);
  return buf;
}

// ---------------------------------------------------------------------------

VocabReport vocab_report(std::span<const NamedCorpus> corpora,
                         std::size_t embedding_dim) {
  if (embedding_dim == 0)
    throw std::invalid_argument("embedding dimension must be positive");
  VocabReport r;
  r.embedding_dim = embedding_dim;
  for (const auto& corpus : corpora) {
    std::unordered_set<std::string_view> types;
    CorpusVocab v;
    v.name = corpus.name;
    for (const auto& line : corpus.lines)
      for (auto tok : utf8::split_whitespace(line)) {
        types.insert(tok);
        ++v.tokens;
      }
    v.types = types.size();
    v.embedding_parameters = v.types * embedding_dim;
    r.corpora.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < r.corpora.size(); ++i)
    for (std::size_t j = i + 1; j < r.corpora.size(); ++j) {
      const auto& a = r.corpora[i];
      const auto& b = r.corpora[j];
      const double pct =
          a.types == 0 ? 0.0
                       : 100.0 * (static_cast<double>(a.types) -
                                  static_cast<double>(b.types)) /
                             static_cast<double>(a.types);
      r.reductions.push_back({a.name, b.name, pct});
    }
  return r;
}

std::string format_vocab_report(const VocabReport& r) {
  std::string out;
  out += "# embedding parameters = types x " + std::to_string(r.embedding_dim) +
         " (embedding tables only)\n";
  out += pad_left("types", 10) + pad_left("tokens", 12) +
         pad_left("emb_params", 14) + "  corpus\n";
  for (const auto& c : r.corpora)
    out += pad_left(std::to_string(c.types), 10) +
           pad_left(std::to_string(c.tokens), 12) +
           pad_left(std::to_string(c.embedding_parameters), 14) + "  " +
           c.name + "\n";
  for (const auto& red : r.reductions)
    out += "reduction " + red.from + " -> " + red.to + ": " +
           fixed(red.percent, 2) + "%\n";
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Assessment> parse_assessments_csv(std::string_view text) {
  std::vector<Assessment> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t p = 0;
    while (true) {
      const auto comma = line.find(',', p);
      f.push_back(line.substr(p, comma == std::string_view::npos
                                     ? std::string_view::npos
                                     : comma - p));
      if (comma == std::string_view::npos) break;
      p = comma + 1;
    }
    if (f.size() != 4)
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected 4 comma-separated fields");
    double score = 0.0;
    auto [ptr, ec] =
        std::from_chars(f[3].data(), f[3].data() + f[3].size(), score);
    if (ec != std::errc() || ptr != f[3].data() + f[3].size()) {
      if (out.empty() && line_no == 1) continue;  // header
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": score is not a number");
    }
    out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]),
                   score});
  }
  return out;
}

std::vector<double> standardize(std::span<const Assessment> assessments,
                                std::vector<std::string>* excluded) {
  struct Moments {
    double sum = 0.0;
    double sq = 0.0;
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;
  };
  std::map<std::string, Moments> assessors;
  for (const auto& a : assessments) {
    if (!(a.score >= 0.0 && a.score <= 100.0))
      throw std::invalid_argument("score out of [0, 100] for system " +
                                  a.system);
    auto& m = assessors[a.assessor_id];
    m.sum += a.score;
    ++m.n;
  }
  for (auto& [id, m] : assessors) m.mean = m.sum / static_cast<double>(m.n);
  for (const auto& a : assessments) {
    auto& m = assessors[a.assessor_id];
    m.sq += (a.score - m.mean) * (a.score - m.mean);
  }
  for (auto& [id, m] : assessors) {
    m.stddev = std::sqrt(m.sq / static_cast<double>(m.n));
    if (m.stddev == 0.0 && excluded) excluded->push_back(id);
  }
  std::vector<double> z;
  z.reserve(assessments.size());
  for (const auto& a : assessments) {
    const auto& m = assessors[a.assessor_id];
    z.push_back(m.stddev == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                                : (a.score - m.mean) / m.stddev);
  }
  return z;
}

DaReport da_aggregate(std::span<const Assessment> assessments) {
  DaReport report;
  const auto z = standardize(assessments, &report.excluded_assessors);

  struct Translation {
    std::vector<double> raw;
    std::vector<double> z;
  };
  std::map<std::string, std::map<std::string, Translation>> systems;
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i < assessments.size(); ++i) {
    const auto& a = assessments[i];
    auto& t = systems[a.system][a.translation_id];
    t.raw.push_back(a.score);
    if (!std::isnan(z[i])) t.z.push_back(z[i]);
    ++counts[a.system];
  }

  for (const auto& [name, translations] : systems) {
    SystemScore s;
    s.system = name;
    s.translations = translations.size();
    s.assessments = counts[name];
    std::vector<double> raw_means;
    for (const auto& [id, t] : translations) {
      raw_means.push_back(mean(t.raw));
      if (!t.z.empty()) s.translation_z.push_back(mean(t.z));
    }
    s.average_raw = mean(raw_means);
    s.average_z = mean(s.translation_z);
    report.systems.push_back(std::move(s));
  }
  std::stable_sort(report.systems.begin(), report.systems.end(),
                   [](const SystemScore& a, const SystemScore& b) {
                     if (a.average_z != b.average_z)
                       return a.average_z > b.average_z;
                     return a.system < b.system;
                   });
  return report;
}

// ---------------------------------------------------------------------------

RankSumResult wilcoxon_rank_sum(std::span<const double> a,
                                std::span<const double> b,
                                RankSumOptions options) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("rank-sum test needs two non-empty samples");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t total = n + m;

  std::vector<std::pair<double, bool>> pooled;  // value, from first sample
  pooled.reserve(total);
  for (double v : a) pooled.emplace_back(v, true);
  for (double v : b) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });

  // Midranks kept doubled so they stay integral.
  std::vector<long> doubled(total);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j + 1 < total && pooled[j + 1].first == pooled[i].first) ++j;
    const long twice_mid = static_cast<long>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) doubled[k] = twice_mid;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  long doubled_sum = 0;
  for (std::size_t k = 0; k < total; ++k)
    if (pooled[k].second) doubled_sum += doubled[k];

  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double dN = static_cast<double>(total);
  RankSumResult r;
  r.rank_sum = static_cast<double>(doubled_sum) / 2.0;
  r.expected = dn * (dN + 1.0) / 2.0;
  r.variance = dn * dm / 12.0 * ((dN + 1.0) - tie_term / (dN * (dN - 1.0)));
  if (r.variance <= 0.0) {
    r.z = 0.0;
    r.p = 1.0;
    return r;
  }
  r.z = (r.rank_sum - r.expected) / std::sqrt(r.variance);

  if (n <= options.exact_limit && m <= options.exact_limit) {
    const long center = static_cast<long>(n * (total + 1));  // 2 * expected
    const long observed = std::labs(doubled_sum - center);
    const auto counts = subset_sum_counts(doubled, n);
    double extreme = 0.0;
    double all = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      all += counts[s];
      if (std::labs(static_cast<long>(s) - center) >= observed)
        extreme += counts[s];
    }
    r.p = extreme / all;
    r.exact = true;
  } else {
    r.p = std::erfc(std::fabs(r.z) / std::sqrt(2.0));
  }
  r.p = std::min(1.0, r.p);
  return r;
}

// ---------------------------------------------------------------------------

std::vector<Cluster> cluster_systems(const DaReport& report, double alpha) {
  std::vector<Cluster> clusters;
  std::vector<const SystemScore*> placed;
  for (const auto& s : report.systems) {
    bool beaten_by_all = !placed.empty();
    for (const auto* better : placed) {
      if (better->translation_z.empty() || s.translation_z.empty() ||
          !(better->average_z > s.average_z)) {
        beaten_by_all = false;
        break;
      }
      const auto test = wilcoxon_rank_sum(better->translation_z, s.translation_z);
      if (!(test.p < alpha)) {
        beaten_by_all = false;
        break;
      }
    }
    if (clusters.empty() || beaten_by_all)
      clusters.push_back({clusters.size() + 1, {}});
    clusters.back().systems.push_back(s.system);
    placed.push_back(&s);
  }
  return clusters;
}

std::string format_da_table(const DaReport& report,
                            std::span<const Cluster> clusters) {
  std::unordered_map<std::string, std::size_t> rank_of;
  for (const auto& c : clusters)
    for (const auto& s : c.systems) rank_of[s] = c.rank;

  const std::string header = pad_left("Ave. raw", 9) + pad_left("Ave. z", 9) +
                             pad_left("n", 9) + pad_left("N", 9) + "  system";
  std::size_t width = header.size();
  for (const auto& s : report.systems)
    width = std::max(width, 38 + utf8::length(s.system) + 2);
  const std::string rule(width, '-');

  std::string out = header + "\n" + rule + "\n";
  for (std::size_t i = 0; i < report.systems.size(); ++i) {
    const auto& s = report.systems[i];
    if (i > 0 && !clusters.empty() &&
        rank_of[s.system] != rank_of[report.systems[i - 1].system])
      out += rule + "\n";
    out += pad_left(fixed(s.average_raw, 1), 9) +
           pad_left(fixed(s.average_z, 3), 9) +
           pad_left(with_thousands(s.translations), 9) +
           pad_left(with_thousands(s.assessments), 9) + "  " + s.system + "\n";
  }
  return out;
}

}  // namespace radical::metrics
