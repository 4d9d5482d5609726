#include "radical/corpus.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "radical/parallel.hpp"
#include "radical/utf8.hpp"

namespace radical {

void TransformConfig::validate(const DecompositionTable& table) const {
  decomposition.validate();
  const std::string& m = word_boundary_marker;
  if (m.empty()) throw std::invalid_argument("boundary marker is empty");
  std::u32string cps;
  try {
    cps = utf8::decode(m);
  } catch (const utf8::DecodeError&) {
    throw std::invalid_argument("boundary marker is not valid UTF-8");
  }
  for (char32_t c : cps) {
    if (c < 0x80 ? utf8::is_ascii_space(static_cast<char>(c))
                 : (c == 0x3000 || c == 0x00A0 || (c >= 0x2000 && c <= 0x200A)))
      throw std::invalid_argument("boundary marker contains whitespace");
  }
  if (ids::is_entity_token(m))
    throw std::invalid_argument("boundary marker '" + m +
                                "' collides with an entity reference");
  if (cps.size() == 1) {
    if (ids::is_idc(cps[0]))
      throw std::invalid_argument("boundary marker '" + m +
                                  "' collides with an IDC operator");
    if (table.mentions(cps[0]))
      throw std::invalid_argument("boundary marker '" + m +
                                  "' collides with a dictionary character");
  }
}

TransformReport& TransformReport::operator+=(const TransformReport& o) {
  lines_in += o.lines_in;
  lines_out += o.lines_out;
  tokens_in += o.tokens_in;
  pieces_out += o.pieces_out;
  chars_decomposed += o.chars_decomposed;
  chars_passed_through += o.chars_passed_through;
  return *this;
}

std::string TransformReport::to_text() const {
  std::ostringstream os;
  os << "lines_in: " << lines_in << '\n'
     << "lines_out: " << lines_out << '\n'
     << "tokens_in: " << tokens_in << '\n'
     << "pieces_out: " << pieces_out << '\n'
     << "chars_decomposed: " << chars_decomposed << '\n'
     << "chars_passed_through: " << chars_passed_through << '\n';
  return os.str();
}

const PieceSequence& LineTransformer::pieces_of(char32_t c) {
  auto it = cache_.find(c);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(c, table_->decompose(c, cfg_->decomposition))
      .first->second;
}

std::string LineTransformer::transform(std::string_view line,
                                       TransformReport* report) {
  std::string_view body = line;
  const bool cr = !body.empty() && body.back() == '\r';
  if (cr) body.remove_suffix(1);

  const auto tokens = utf8::split_whitespace(body);
  std::vector<std::u32string> decoded;
  decoded.reserve(tokens.size());
  bool any = false;
  const bool active = cfg_->decomposition.level > 0;
  for (auto tok : tokens) {
    decoded.push_back(utf8::decode(tok));
    if (active && !any)
      for (char32_t c : decoded.back())
        if (!table_->is_atom(c)) {
          any = true;
          break;
        }
  }

  TransformReport r;
  r.lines_in = r.lines_out = 1;
  r.tokens_in = tokens.size();

  std::string out;
  if (!any) {
    r.pieces_out = tokens.size();
    for (const auto& d : decoded) r.chars_passed_through += d.size();
    if (report) *report += r;
    return std::string(line);
  }

  out.reserve(body.size() * 4);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (t > 0) {
      out.push_back(' ');
      out += cfg_->word_boundary_marker;
      out.push_back(' ');
    }
    const auto& chars = decoded[t];
    bool decomposed = false;
    for (char32_t c : chars)
      if (!table_->is_atom(c)) {
        decomposed = true;
        break;
      }
    if (!decomposed) {
      out += tokens[t];
      ++r.pieces_out;
      r.chars_passed_through += chars.size();
      continue;
    }
    // Runs of characters without a dictionary entry stay one piece.
    bool first_piece = true;
    bool in_run = false;
    auto sep = [&] {
      if (!first_piece) out.push_back(' ');
      first_piece = false;
      ++r.pieces_out;
    };
    for (char32_t c : chars) {
      if (!table_->contains(c)) {
        if (!in_run) sep();
        in_run = true;
        utf8::append(out, c);
        ++r.chars_passed_through;
        continue;
      }
      in_run = false;
      if (table_->is_atom(c)) {
        sep();
        utf8::append(out, c);
        ++r.chars_passed_through;
        continue;
      }
      ++r.chars_decomposed;
      for (const auto& p : pieces_of(c)) {
        sep();
        out += p;
      }
    }
  }
  if (cr) out.push_back('\r');
  if (report) *report += r;
  return out;
}

std::string transform_line(std::string_view line,
                           const DecompositionTable& table,
                           const TransformConfig& cfg) {
  return LineTransformer(table, cfg).transform(line);
}

TransformReport transform_corpus(std::istream& in, std::ostream& out,
                                 const DecompositionTable& table,
                                 const TransformConfig& cfg, unsigned threads,
                                 std::size_t batch_lines) {
  threads = std::max(1u, threads);
  if (batch_lines == 0) batch_lines = 1;
  std::vector<LineTransformer> workers(threads, LineTransformer(table, cfg));
  TransformReport total;

  std::vector<std::string> batch;
  std::vector<std::string> results;
  std::vector<TransformReport> reports;
  std::vector<std::optional<std::string>> errors;
  std::size_t line_no = 0;
  bool last_had_newline = true;

  while (true) {
    batch.clear();
    std::string line;
    while (batch.size() < batch_lines && std::getline(in, line)) {
      last_had_newline = !in.eof();
      batch.push_back(std::move(line));
      line.clear();
    }
    if (in.bad()) throw IoError("read failure", line_no + batch.size() + 1);
    if (batch.empty()) break;

    results.assign(batch.size(), {});
    reports.assign(batch.size(), {});
    errors.assign(batch.size(), std::nullopt);
    parallel_chunks(batch.size(), threads,
                    [&](unsigned w, std::size_t begin, std::size_t end) {
                      for (std::size_t i = begin; i < end; ++i) {
                        try {
                          results[i] = workers[w].transform(batch[i], &reports[i]);
                        } catch (const utf8::DecodeError& e) {
                          errors[i] = e.what();
                        }
                      }
                    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (errors[i])
        throw utf8::DecodeError(
            "line " + std::to_string(line_no + i + 1) + ": " + *errors[i],
            line_no + i + 1);
      out << results[i];
      if (i + 1 < batch.size() || last_had_newline || !in.eof()) out << '\n';
      total += reports[i];
    }
    line_no += batch.size();
    if (!out) throw IoError("write failure", line_no);
    if (in.eof()) break;
  }
  out.flush();
  if (!out) throw IoError("write failure", line_no);
  return total;
}

}  // namespace radical
