#include "dcm/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dcm {

namespace {

// "# meta key=value"
void parse_meta_comment(const std::string& line, std::map<std::string, std::string>& meta) {
  const std::string prefix = "# meta ";
  if (line.rfind(prefix, 0) == 0) {
    const std::string body = line.substr(prefix.size());
    const auto eq = body.find('=');
    if (eq != std::string::npos) meta[body.substr(0, eq)] = body.substr(eq + 1);
  }
}

template <typename T>
T parse_number(std::string_view text, const std::string& context) {
  T v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw FormatError(context + ": bad number '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

}  // namespace

void write_pairs(const std::string& path, const std::vector<PairEntry>& entries,
                 const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write pair file: " + path);
  for (const auto& comment : header_comments) out << "# " << comment << "\n";
  for (const auto& e : entries)
    out << e.doc_id << '\t' << e.permutation_index << '\t' << e.seed << "\n";
  if (!out) throw IoError("failed writing pair file: " + path);
}

PairFile read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pair file: " + path);
  PairFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_meta_comment(line, file.meta);
      continue;
    }
    const std::string context = path + ":" + std::to_string(line_no);
    auto fields = split(line, '\t');
    if (fields.size() != 3 || fields[0].empty())
      throw FormatError(context + ": expected <doc_id>\\t<permutation_index>\\t<seed>");
    PairEntry e;
    e.doc_id = fields[0];
    e.permutation_index = parse_number<std::size_t>(fields[1], context);
    e.seed = parse_number<std::uint64_t>(fields[2], context);
    file.entries.push_back(std::move(e));
  }
  return file;
}

void write_dataset(const std::string& path, const Vocabulary& vocab, std::size_t window,
                   const std::vector<Clique>& cliques,
                   const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write dataset file: " + path);
  for (const auto& comment : header_comments) out << "# " << comment << "\n";
  out << "VOCAB " << vocab.size() << "\n";
  for (const auto& word : vocab.words()) out << word << "\n";
  out << "CLIQUES " << cliques.size() << " " << window << "\n";
  for (const auto& clique : cliques) {
    out << clique.label << '\t' << clique.source_id << '\t';
    for (std::size_t s = 0; s < clique.sentences.size(); ++s) {
      if (s > 0) out << '|';
      const Sentence& sent = clique.sentences[s];
      for (std::size_t t = 0; t < sent.size(); ++t) {
        if (t > 0) out << ' ';
        out << sent[t];
      }
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing dataset file: " + path);
}

DatasetFile read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);

  DatasetFile file{Vocabulary{}, 3, {}, {}};
  std::string line;
  std::size_t line_no = 0;

  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        parse_meta_comment(line, file.meta);
        continue;
      }
      return true;
    }
    return false;
  };

  auto context = [&]() { return path + ":" + std::to_string(line_no); };

  if (!next_content_line() || line.rfind("VOCAB ", 0) != 0)
    throw FormatError(context() + ": expected 'VOCAB <count>'");
  const auto vocab_count = parse_number<std::size_t>(line.substr(6), context());

  std::vector<std::string> words;
  words.reserve(vocab_count);
  for (std::size_t i = 0; i < vocab_count; ++i) {
    if (!next_content_line()) throw FormatError(context() + ": vocabulary section ends early");
    words.push_back(line);
  }
  file.vocab = Vocabulary(std::move(words));

  if (!next_content_line() || line.rfind("CLIQUES ", 0) != 0)
    throw FormatError(context() + ": expected 'CLIQUES <count> <window>'");
  {
    std::istringstream head(line.substr(8));
    std::size_t count = 0, window = 0;
    if (!(head >> count >> window) || window < 1)
      throw FormatError(context() + ": malformed CLIQUES header");
    file.window = window;
    file.cliques.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (!next_content_line()) throw FormatError(context() + ": clique section ends early");
      auto fields = split(line, '\t');
      if (fields.size() != 3)
        throw FormatError(context() + ": expected <label>\\t<source_id>\\t<sentences>");
      Clique clique;
      clique.label = parse_number<int>(fields[0], context());
      if (clique.label != 0 && clique.label != 1)
        throw FormatError(context() + ": label must be 0 or 1");
      clique.source_id = fields[1];
      for (const auto& sent_text : split(fields[2], '|')) {
        Sentence sent;
        std::istringstream toks(sent_text);
        std::string tok;
        while (toks >> tok) {
          const auto idx = parse_number<long>(tok, context());
          if (idx < 0 || static_cast<std::size_t>(idx) >= file.vocab.size())
            throw FormatError(context() + ": token index out of vocabulary range");
          sent.push_back(static_cast<int>(idx));
        }
        if (sent.empty()) throw FormatError(context() + ": empty sentence in clique");
        clique.sentences.push_back(std::move(sent));
      }
      if (clique.sentences.size() != file.window)
        throw FormatError(context() + ": clique does not have " + std::to_string(file.window) +
                          " sentences");
      file.cliques.push_back(std::move(clique));
    }
  }
  return file;
}

}  // namespace dcm
