#include "dcm/embedding.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dcm/rng.hpp"

namespace dcm {

namespace {

constexpr double kInitRange = 0.25;

// Column init shared by init_random and the loader's fallback: each word gets
// its own derived stream, so fallback columns match init_random columns for
// the same seed regardless of which other words the file covered.
void fill_random_column(Matrix& values, std::size_t col, const std::string& word,
                        std::uint64_t seed) {
  Rng rng(derive_seed(seed, "emb:" + word));
  for (std::size_t r = 0; r < values.rows(); ++r)
    values(r, col) = rng.uniform(-kInitRange, kInitRange);
}

double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw FormatError(context + ": bad float '" + std::string(text) + "'");
  return v;
}

}  // namespace

EmbeddingMatrix init_random(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw DataError("embedding dimension must be at least 1");
  EmbeddingMatrix emb{Matrix(dim, vocab.size(), 0.0)};
  for (std::size_t col = 0; col < vocab.size(); ++col) {
    if (static_cast<int>(col) == vocab.pad_index()) continue;
    fill_random_column(emb.values, col, vocab.word(col), seed);
  }
  return emb;
}

EmbeddingMatrix load_word2vec_text(const std::string& path, const Vocabulary& vocab,
                                   std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ":1: missing word2vec header");
  std::istringstream header(line);
  std::size_t file_words = 0, dim = 0;
  std::string extra;
  if (!(header >> file_words >> dim) || (header >> extra) || dim < 1)
    throw FormatError(path + ":1: malformed word2vec header '" + line + "'");

  EmbeddingMatrix emb{Matrix(dim, vocab.size(), 0.0)};
  std::vector<bool> from_file(vocab.size(), false);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string word;
    row >> word;
    std::vector<double> vec;
    vec.reserve(dim);
    std::string field;
    const std::string context = path + ":" + std::to_string(line_no);
    while (row >> field) vec.push_back(parse_double(field, context));
    if (vec.size() != dim)
      throw FormatError(context + ": expected " + std::to_string(dim) + " values for '" + word +
                        "', got " + std::to_string(vec.size()));
    if (!vocab.contains(word)) continue;
    const int col = vocab.lookup(word);
    if (col == vocab.pad_index()) continue;  // PAD stays zero even if listed
    for (std::size_t r = 0; r < dim; ++r) emb.values(r, static_cast<std::size_t>(col)) = vec[r];
    from_file[static_cast<std::size_t>(col)] = true;
  }

  for (std::size_t col = 0; col < vocab.size(); ++col) {
    if (from_file[col] || static_cast<int>(col) == vocab.pad_index()) continue;
    fill_random_column(emb.values, col, vocab.word(col), seed);
  }
  return emb;
}

SentenceMatrix build_sentence_matrix(const Sentence& sentence, const EmbeddingMatrix& emb,
                                     std::size_t filter_width) {
  if (sentence.empty()) throw DataError("cannot build a sentence matrix from an empty sentence");
  const std::size_t width = std::max(sentence.size(), filter_width);
  SentenceMatrix sm{Matrix(emb.dim(), width, 0.0), sentence.size()};
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const auto col = static_cast<std::size_t>(sentence[i]);
    if (col >= emb.vocab_size())
      throw ShapeError("token index " + std::to_string(sentence[i]) +
                       " out of range for vocabulary of size " + std::to_string(emb.vocab_size()));
    for (std::size_t r = 0; r < emb.dim(); ++r) sm.values(r, i) = emb.values(r, col);
  }
  return sm;  // trailing columns stay zero (PAD embedding)
}

}  // namespace dcm
