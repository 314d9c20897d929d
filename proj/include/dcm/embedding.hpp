#pragma once

#include <cstdint>
#include <string>

#include "dcm/corpus.hpp"
#include "dcm/matrix.hpp"

namespace dcm {

/// Trainable word-embedding table, one column per vocabulary word. The PAD
/// column is all zeros and stays zero through training.
struct EmbeddingMatrix {
  Matrix values;  // d x |V|

  std::size_t dim() const { return values.rows(); }
  std::size_t vocab_size() const { return values.cols(); }
};

/// d x max(|s|, m) matrix whose columns are the token embeddings of a
/// sentence, right-padded with PAD columns up to the filter width.
struct SentenceMatrix {
  Matrix values;
  std::size_t tokens = 0;  // unpadded sentence length
};

// i.i.d. uniform on [-0.25, 0.25], PAD column forced to zero.
EmbeddingMatrix init_random(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed);

// word2vec text format: header "<count> <dim>", then "<word> v1 ... vd" per
// line. Vocabulary words missing from the file fall back to the random-init
// rule under `seed`; the PAD column is forced to zero; the embedding
// dimension comes from the file header.
EmbeddingMatrix load_word2vec_text(const std::string& path, const Vocabulary& vocab,
                                   std::uint64_t seed);

SentenceMatrix build_sentence_matrix(const Sentence& sentence, const EmbeddingMatrix& emb,
                                     std::size_t filter_width);

}  // namespace dcm
