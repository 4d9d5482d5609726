// radical: command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 inconsistent input data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radical/corpus.hpp"
#include "radical/ids.hpp"
#include "radical/metrics.hpp"
#include "radical/mwe.hpp"
#include "radical/parallel.hpp"
#include "radical/utf8.hpp"

namespace fs = std::filesystem;
using namespace radical;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIo = 2, kData = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw FileError("cannot read " + path);
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(std::move(l));
  }
  return out;
}

// Writes to `path.tmp` and renames on commit, so a failed run leaves no
// partial file behind. "-" writes to stdout.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {
    if (path_ == "-") return;
    tmp_ = path_ + ".tmp";
    file_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!file_) throw FileError("cannot write " + path_);
  }
  ~Output() {
    if (!committed_ && !tmp_.empty()) {
      file_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  void commit() {
    stream().flush();
    if (!stream()) throw FileError("write failed: " + path_);
    if (path_ == "-") return;
    file_.close();
    std::error_code ec;
    fs::rename(tmp_, path_, ec);
    if (ec) throw FileError("cannot rename to " + path_ + ": " + ec.message());
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream file_;
  bool committed_ = false;
};

void write_text(const std::string& path, const std::string& text) {
  Output out(path);
  out.stream() << text;
  out.commit();
}

struct DictOptions {
  std::string ids;
  unsigned level = 3;
  bool no_idc = false;
  std::string prefer = "GTHJKV";
  std::string marker = "‖";

  void add(CLI::App* app, bool with_marker = true) {
    app->add_option("--ids", ids, "IDS dictionary file (default: $RADICAL_IDS)");
    app->add_option("-l,--level", level, "Decomposition level")->capture_default_str();
    app->add_flag("--no-idc,!--keep-idc", no_idc, "Drop IDC operators from the output");
    app->add_option("--prefer", prefer, "Source-tag preference, e.g. GTHJKV or J,G")
        ->capture_default_str();
    if (with_marker)
      app->add_option("--marker", marker, "Word boundary marker")->capture_default_str();
  }

  DecompositionTable table() const {
    std::string path = ids;
    if (path.empty()) {
      const char* env = std::getenv("RADICAL_IDS");
      if (!env || !*env) throw UsageError("no dictionary: pass --ids or set RADICAL_IDS");
      path = env;
    }
    std::vector<ids::SourceTag> pref;
    try {
      pref = ids::parse_tag_list(prefer);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--prefer: ") + e.what());
    }
    const auto entries = ids::parse_ids_file(slurp(path));
    return DecompositionTable::build(entries, pref);
  }

  TransformConfig config(const DecompositionTable& t) const {
    TransformConfig cfg;
    cfg.decomposition.level = level;
    cfg.decomposition.keep_idc_operators = !no_idc;
    cfg.word_boundary_marker = marker;
    try {
      cfg.validate(t);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

std::string join(const PieceSequence& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += p[i];
  }
  return out;
}

std::vector<metrics::Tokens> tokenize(const std::vector<std::string>& lines) {
  std::vector<metrics::Tokens> out;
  for (const auto& l : lines) {
    metrics::Tokens t;
    for (auto w : utf8::split_whitespace(l)) t.emplace_back(w);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-character decomposition and evaluation tools for Chinese MT"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "radical 1.0.0");

  std::string output = "-";
  unsigned threads = 1;
  bool stats = false;
  app.fallthrough();
  app.add_option("-j,--threads", threads, "Worker threads")->capture_default_str()
      ->check(CLI::Range(1u, 256u));

  // decompose
  auto* dec = app.add_subcommand("decompose", "Decompose characters");
  DictOptions dec_dict;
  dec_dict.add(dec, false);
  std::vector<std::string> dec_chars;
  bool fixpoint = false;
  dec->add_option("chars", dec_chars, "Characters (read from stdin when omitted)");
  dec->add_flag("--fixpoint", fixpoint, "Decompose until nothing changes");
  dec->add_option("-o,--output", output, "Output file")->capture_default_str();

  // transform
  auto* tr = app.add_subcommand("transform", "Decompose a tokenized corpus");
  DictOptions tr_dict;
  tr_dict.add(tr);
  std::string tr_input = "-";
  tr->add_option("-i,--input", tr_input, "Input corpus")->capture_default_str();
  tr->add_option("-o,--output", output, "Output file")->capture_default_str();
  tr->add_flag("--stats", stats, "Print a report to stderr");

  // mwe
  auto* mwe_cmd = app.add_subcommand("mwe", "Bilingual multiword expressions");
  mwe_cmd->require_subcommand(1);

  auto* ex = mwe_cmd->add_subcommand("extract", "Extract scored MWE pairs");
  std::string ex_src, ex_tgt, ex_src_pat, ex_tgt_pat;
  std::size_t min_freq = 1;
  ex->add_option("--src", ex_src, "Tagged source corpus")->required();
  ex->add_option("--tgt", ex_tgt, "Tagged target corpus")->required();
  ex->add_option("--src-patterns", ex_src_pat, "Source PoS patterns")->required();
  ex->add_option("--tgt-patterns", ex_tgt_pat, "Target PoS patterns")->required();
  ex->add_option("--min-freq", min_freq, "Minimum candidate frequency")->capture_default_str();
  ex->add_option("-o,--output", output, "Glossary TSV")->capture_default_str();

  auto* fi = mwe_cmd->add_subcommand("filter", "Keep pairs at or above a threshold");
  std::string fi_input = "-";
  double threshold = mwe::kDefaultThreshold;
  fi->add_option("-i,--input", fi_input, "Glossary TSV")->capture_default_str();
  fi->add_option("-t,--threshold", threshold, "Minimum score")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fi->add_option("-o,--output", output, "Glossary TSV")->capture_default_str();

  auto* md = mwe_cmd->add_subcommand("decompose", "Decompose glossary source phrases");
  DictOptions md_dict;
  md_dict.add(md);
  std::string md_input = "-";
  md->add_option("-i,--input", md_input, "Glossary TSV")->capture_default_str();
  md->add_option("-o,--output", output, "Glossary TSV")->capture_default_str();

  auto* in = mwe_cmd->add_subcommand("inject", "Append glossary pairs to training data");
  std::string in_src, in_tgt, in_gloss, out_src, out_tgt;
  std::size_t repeat = 1;
  in->add_option("--train-src", in_src, "Training source")->required();
  in->add_option("--train-tgt", in_tgt, "Training target")->required();
  in->add_option("-g,--glossary", in_gloss, "Glossary TSV")->required();
  in->add_option("--out-src", out_src, "Output source")->required();
  in->add_option("--out-tgt", out_tgt, "Output target")->required();
  in->add_option("--repeat", repeat, "Copies of each pair")->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluation");
  ev->require_subcommand(1);

  auto* bl = ev->add_subcommand("bleu", "Corpus BLEU");
  std::string hyp, ref;
  bool smooth = false;
  bl->add_option("--hyp", hyp, "Hypothesis file")->required();
  bl->add_option("--ref", ref, "Reference file")->required();
  bl->add_flag("--smooth", smooth, "Add-one smoothing for n > 1");

  auto* vo = ev->add_subcommand("vocab", "Vocabulary sizes");
  std::vector<std::string> vocab_files;
  std::size_t dim = 512;
  vo->add_option("corpora", vocab_files, "name=path or path, in order")->required();
  vo->add_option("--dim", dim, "Embedding dimension")->capture_default_str();

  auto* da = ev->add_subcommand("da", "Direct assessment table");
  auto* cl = ev->add_subcommand("cluster", "Direct assessment table with clusters");
  std::string da_csv;
  double alpha = 0.05;
  da->add_option("csv", da_csv, "system,translation_id,assessor_id,score")->required();
  cl->add_option("csv", da_csv, "system,translation_id,assessor_id,score")->required();
  cl->add_option("--alpha", alpha, "Significance level")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*dec) {
      const auto table = dec_dict.table();
      DecompositionConfig cfg;
      cfg.level = dec_dict.level;
      cfg.keep_idc_operators = !dec_dict.no_idc;
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::u32string chars;
      if (dec_chars.empty()) {
        for (auto w : utf8::split_whitespace(slurp("-"))) chars += utf8::decode(w);
      } else {
        for (const auto& w : dec_chars) chars += utf8::decode(w);
      }
      std::vector<std::string> rows(chars.size());
      parallel_chunks(chars.size(), threads,
                      [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const char32_t c = chars[i];
          std::string& row = rows[i];
          if (fixpoint) {
            const auto r = table.decompose_to_fixpoint(c, cfg);
            row = utf8::encode(c) + '\t' + std::to_string(r.levels_used) + '\t' +
                  join(r.pieces);
            if (!r.converged) row += "\tunconverged";
          } else {
            row = utf8::encode(c) + '\t' + std::to_string(cfg.level) + '\t' +
                  join(table.decompose(c, cfg));
          }
        }
      });
      Output out(output);
      for (const auto& row : rows) out.stream() << row << '\n';
      out.commit();
    } else if (*tr) {
      const auto table = tr_dict.table();
      const auto cfg = tr_dict.config(table);
      std::ifstream file;
      std::istream* src = &std::cin;
      if (tr_input != "-") {
        file.open(tr_input, std::ios::binary);
        if (!file) throw FileError("cannot open " + tr_input);
        src = &file;
      }
      Output out(output);
      const auto report = transform_corpus(*src, out.stream(), table, cfg, threads);
      out.commit();
      if (stats) std::cerr << report.to_text();
    } else if (*ex) {
      const auto src = mwe::parse_tagged_corpus(slurp(ex_src));
      const auto tgt = mwe::parse_tagged_corpus(slurp(ex_tgt));
      const auto sp = mwe::parse_patterns(slurp(ex_src_pat));
      const auto tp = mwe::parse_patterns(slurp(ex_tgt_pat));
      write_text(output, mwe::format_glossary(
                             mwe::extract_bilingual(src, tgt, sp, tp, min_freq, threads)));
    } else if (*fi) {
      const auto pairs = mwe::parse_glossary(slurp(fi_input));
      write_text(output, mwe::format_glossary(mwe::filter_pairs(pairs, threshold)));
    } else if (*md) {
      const auto table = md_dict.table();
      const auto cfg = md_dict.config(table);
      const auto pairs = mwe::parse_glossary(slurp(md_input));
      write_text(output, mwe::format_glossary(mwe::decompose_glossary(pairs, table, cfg)));
    } else if (*in) {
      const auto pairs = mwe::parse_glossary(slurp(in_gloss));
      const auto res = mwe::inject_glossary(lines_of(slurp(in_src)),
                                            lines_of(slurp(in_tgt)), pairs, repeat);
      Output s(out_src), t(out_tgt);
      for (const auto& l : res.source) s.stream() << l << '\n';
      for (const auto& l : res.target) t.stream() << l << '\n';
      s.commit();
      t.commit();
    } else if (*bl) {
      const auto h = tokenize(lines_of(slurp(hyp)));
      const auto r = tokenize(lines_of(slurp(ref)));
      if (h.size() != r.size())
        throw mwe::AlignmentError("hypothesis has " + std::to_string(h.size()) +
                                  " lines, reference " + std::to_string(r.size()));
      std::cout << metrics::format_bleu(metrics::bleu(h, r, {.smooth = smooth})) << '\n';
    } else if (*vo) {
      std::vector<metrics::NamedCorpus> corpora;
      for (const auto& spec : vocab_files) {
        const auto eq = spec.find('=');
        const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
        const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
        corpora.push_back({name, lines_of(slurp(path))});
      }
      std::cout << metrics::format_vocab_report(metrics::vocab_report(corpora, dim));
    } else if (*da || *cl) {
      const auto report = metrics::da_aggregate(metrics::parse_assessments_csv(slurp(da_csv)));
      if (*cl) {
        const auto clusters = metrics::cluster_systems(report, alpha);
        std::cout << metrics::format_da_table(report, clusters);
      } else {
        std::cout << metrics::format_da_table(report);
      }
      for (const auto& a : report.excluded_assessors)
        std::cerr << "excluded assessor with constant scores: " << a << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "radical: " << e.what() << '\n';
    return kUsage;
  } catch (const FileError& e) {
    std::cerr << "radical: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "radical: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    // Parse, decode, format, alignment and range errors in the input data.
    std::cerr << "radical: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
