#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dcm/errors.hpp"

namespace dcm {

using Sentence = std::vector<int>;       // token indices into a Vocabulary
using Window = std::vector<Sentence>;    // L consecutive sentences

constexpr const char* kPadToken = "<pad>";
constexpr const char* kUnkToken = "<unk>";

/// Bidirectional word <-> index map. Index 0 is PAD, index 1 is UNK; the
/// remaining words are ordered by descending corpus count, ties broken
/// lexicographically.
class Vocabulary {
 public:
  Vocabulary();  // PAD and UNK only

  explicit Vocabulary(std::vector<std::string> words);  // as stored, with PAD/UNK at 0/1

  int pad_index() const { return 0; }
  int unk_index() const { return 1; }
  std::size_t size() const { return words_.size(); }

  const std::string& word(std::size_t index) const { return words_.at(index); }
  const std::vector<std::string>& words() const { return words_; }

  /// Index of a stored word; UNK index for anything else.
  int lookup(const std::string& word) const;
  bool contains(const std::string& word) const { return index_.count(word) > 0; }

  /// FNV-1a over the word list; used to detect model/corpus drift.
  std::uint64_t content_hash() const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
};

struct Clique {
  Window sentences;       // exactly L sentences
  int label = 0;          // 1 = coherent
  std::string source_id;  // originating document, for leakage-free dev splits
};

struct PermutationPair {
  Document original;
  Document permuted;
  std::uint64_t seed = 0;   // generator seed; with `index` this replays the permutation
  std::size_t index = 0;    // position in the generated list for the source document
};

/// Raw (untokenized) document as read from a corpus file.
struct RawDocument {
  std::string id;
  std::vector<std::string> sentences;  // one line per sentence
};

// Whitespace split + ASCII lowercasing. Blank input gives an empty list.
std::vector<std::string> tokenize(const std::string& raw_sentence);

// PAD, UNK, and every token with count >= min_count. Throws DataError when
// the corpus has no tokens at all.
Vocabulary build_vocabulary(const std::vector<RawDocument>& documents, std::size_t min_count = 1);

// Unknown tokens map to UNK; order preserved. Throws DataError for a document
// with no sentences.
Document index_document(const RawDocument& raw, const Vocabulary& vocab);

// All N-L+1 interior windows, in order. Throws DataError when N < L.
std::vector<Window> extract_cliques(const Document& doc, std::size_t window);

// Up to max_count distinct non-identity permutations, reproducible from seed.
// The generated list is a stable prefix: the k-th pair does not depend on
// max_count. N = 1 yields an empty list.
std::vector<PermutationPair> generate_permutations(const Document& doc, std::size_t max_count,
                                                   std::uint64_t seed);

// Positive cliques from all windows of the originals; negatives from
// permuted-document windows, excluding any window that also occurs in the
// source original. Output order is shuffled by seed.
std::vector<Clique> build_training_set(const std::vector<Document>& originals, std::size_t window,
                                       std::size_t permutations_per_doc, std::uint64_t seed);

// Corpus file format: UTF-8, one sentence per line, documents separated by a
// blank line, optional "# id: <string>" first line per document. Other
// "#"-prefixed lines are comments.
std::vector<RawDocument> read_corpus(const std::string& path);
void write_corpus(const std::string& path, const std::vector<RawDocument>& docs,
                  const std::vector<std::string>& header_comments = {});

}  // namespace dcm
