#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcm/corpus.hpp"

namespace dcm {

/// Parameters for the topic-chain corpus generator. Each topic owns a
/// disjoint block of the vocabulary; consecutive sentences keep the previous
/// topic with probability chain_strength, otherwise jump to a random other
/// topic. Tokens are drawn uniformly from the sentence's topic block.
struct SynthSpec {
  std::size_t num_docs = 100;
  std::size_t sentences_per_doc = 10;
  std::size_t vocab_size = 500;
  std::size_t topics = 5;
  double chain_strength = 0.9;
  std::size_t min_tokens_per_sentence = 4;
  std::size_t max_tokens_per_sentence = 12;
  std::uint64_t seed = 1;
};

std::vector<RawDocument> generate(const SynthSpec& spec);

// Topic that owns a generated token ("w<index>"); -1 for anything else.
// Test and diagnostics helper: inverts the generator's token naming.
int synth_token_topic(const std::string& token, const SynthSpec& spec);

}  // namespace dcm
