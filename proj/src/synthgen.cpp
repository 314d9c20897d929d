#include "dcm/synthgen.hpp"

#include <charconv>

#include "dcm/rng.hpp"

namespace dcm {

namespace {

void validate(const SynthSpec& spec) {
  if (spec.num_docs < 1 || spec.sentences_per_doc < 1 || spec.vocab_size < 1 ||
      spec.topics < 1 || spec.min_tokens_per_sentence < 1)
    throw DataError("synth spec: all counts must be at least 1");
  if (spec.vocab_size < spec.topics)
    throw DataError("synth spec: vocab_size " + std::to_string(spec.vocab_size) +
                    " is smaller than topics " + std::to_string(spec.topics) +
                    " (topic token blocks would be empty)");
  if (spec.max_tokens_per_sentence < spec.min_tokens_per_sentence)
    throw DataError("synth spec: max_tokens_per_sentence < min_tokens_per_sentence");
  if (spec.chain_strength < 0.0 || spec.chain_strength > 1.0)
    throw DataError("synth spec: chain_strength must lie in [0, 1]");
}

// Tokens [block_begin, block_end) owned by a topic; blocks partition the
// vocabulary, remainder tokens go to the leading blocks.
std::pair<std::size_t, std::size_t> topic_block(const SynthSpec& spec, std::size_t topic) {
  const std::size_t base = spec.vocab_size / spec.topics;
  const std::size_t extra = spec.vocab_size % spec.topics;
  const std::size_t begin = topic * base + std::min(topic, extra);
  const std::size_t len = base + (topic < extra ? 1 : 0);
  return {begin, begin + len};
}

}  // namespace

std::vector<RawDocument> generate(const SynthSpec& spec) {
  validate(spec);
  std::vector<RawDocument> docs;
  docs.reserve(spec.num_docs);
  for (std::size_t di = 0; di < spec.num_docs; ++di) {
    Rng rng(derive_seed(spec.seed, "synth-doc", di));
    RawDocument doc;
    doc.id = "synth-" + std::to_string(di);

    std::size_t topic = rng.below(spec.topics);
    for (std::size_t si = 0; si < spec.sentences_per_doc; ++si) {
      if (si > 0 && spec.topics > 1 && rng.uniform01() >= spec.chain_strength) {
        std::size_t jump = rng.below(spec.topics - 1);
        topic = jump >= topic ? jump + 1 : jump;
      }
      const auto [begin, end] = topic_block(spec, topic);
      const std::size_t len =
          spec.min_tokens_per_sentence +
          rng.below(spec.max_tokens_per_sentence - spec.min_tokens_per_sentence + 1);
      std::string line;
      for (std::size_t t = 0; t < len; ++t) {
        if (t > 0) line.push_back(' ');
        line += "w" + std::to_string(begin + rng.below(end - begin));
      }
      doc.sentences.push_back(std::move(line));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

int synth_token_topic(const std::string& token, const SynthSpec& spec) {
  if (token.size() < 2 || token[0] != 'w') return -1;
  std::size_t index = 0;
  auto res = std::from_chars(token.data() + 1, token.data() + token.size(), index);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return -1;
  if (index >= spec.vocab_size) return -1;
  for (std::size_t topic = 0; topic < spec.topics; ++topic) {
    const auto [begin, end] = topic_block(spec, topic);
    if (index >= begin && index < end) return static_cast<int>(topic);
  }
  return -1;
}

}  // namespace dcm
