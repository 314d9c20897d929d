#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dcm/corpus.hpp"
#include "dcm/rng.hpp"
#include "dcm/synthgen.hpp"

using namespace dcm;

namespace {

// Topic of a sentence under the generator's token naming; requires all
// tokens to agree (block disjointness makes that the construction invariant).
int sentence_topic(const std::string& line, const SynthSpec& spec) {
  int topic = -1;
  for (const auto& tok : tokenize(line)) {
    const int t = synth_token_topic(tok, spec);
    REQUIRE(t >= 0);
    if (topic == -1) topic = t;
    REQUIRE(t == topic);
  }
  return topic;
}

// The brute-force coherence oracle: adjacent same-topic sentence pairs.
std::size_t adjacent_same_topic(const std::vector<int>& topics) {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < topics.size(); ++i)
    if (topics[i] == topics[i + 1]) ++count;
  return count;
}

std::vector<int> doc_topics(const RawDocument& doc, const SynthSpec& spec) {
  std::vector<int> topics;
  for (const auto& line : doc.sentences) topics.push_back(sentence_topic(line, spec));
  return topics;
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  SynthSpec spec;
  spec.num_docs = 5;
  spec.seed = 99;
  auto a = generate(spec);
  auto b = generate(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].sentences == b[i].sentences);
  }
}

TEST_CASE("invalid specs are rejected") {
  SynthSpec spec;
  spec.vocab_size = 3;
  spec.topics = 5;
  CHECK_THROWS_AS(generate(spec), DataError);

  SynthSpec bad_range;
  bad_range.min_tokens_per_sentence = 9;
  bad_range.max_tokens_per_sentence = 4;
  CHECK_THROWS_AS(generate(bad_range), DataError);
}

TEST_CASE("every token belongs to exactly one topic block") {
  SynthSpec spec;
  spec.num_docs = 10;
  spec.vocab_size = 23;  // deliberately not divisible by topics
  spec.topics = 5;
  spec.seed = 3;
  for (const auto& doc : generate(spec))
    for (const auto& line : doc.sentences) sentence_topic(line, spec);

  // block coverage: the topic ranges partition [0, vocab_size)
  std::set<int> seen;
  for (std::size_t i = 0; i < spec.vocab_size; ++i) {
    const int t = synth_token_topic("w" + std::to_string(i), spec);
    CHECK(t >= 0);
    CHECK(t < static_cast<int>(spec.topics));
    seen.insert(t);
  }
  CHECK(seen.size() == spec.topics);
}

TEST_CASE("chain_strength 1 produces single-topic documents") {
  SynthSpec spec;
  spec.num_docs = 8;
  spec.chain_strength = 1.0;
  spec.seed = 21;
  for (const auto& doc : generate(spec)) {
    auto topics = doc_topics(doc, spec);
    CHECK(adjacent_same_topic(topics) == topics.size() - 1);
  }
}

TEST_CASE("topic-overlap oracle separates originals from permutations") {
  // With 40-sentence documents at chain 0.9 nearly every document is
  // multi-topic, and a random permutation almost always breaks topic runs.
  SynthSpec spec;
  spec.num_docs = 200;
  spec.sentences_per_doc = 40;
  spec.vocab_size = 500;
  spec.topics = 5;
  spec.chain_strength = 0.9;
  spec.seed = 1;

  std::size_t separated = 0, total = 0, originals_ahead = 0;
  for (const auto& raw : generate(spec)) {
    auto topics = doc_topics(raw, spec);

    Document doc;
    doc.id = raw.id;
    for (int t : topics) doc.sentences.push_back({t});  // sentence stands in as its topic
    auto pairs = generate_permutations(doc, 1, derive_seed(spec.seed, "oracle:" + doc.id));
    REQUIRE(pairs.size() == 1);

    std::vector<int> permuted_topics;
    for (const auto& sent : pairs[0].permuted.sentences) permuted_topics.push_back(sent[0]);

    const std::size_t orig = adjacent_same_topic(topics);
    const std::size_t perm = adjacent_same_topic(permuted_topics);
    ++total;
    if (orig > perm) ++separated;
    if (orig >= perm) ++originals_ahead;
  }
  CHECK(total == 200);
  CHECK(static_cast<double>(separated) / static_cast<double>(total) > 0.90);
  // the oracle direction never inverts in aggregate
  CHECK(originals_ahead >= separated);
}

TEST_CASE("expected same-topic adjacency: original exceeds permuted for chained docs") {
  SynthSpec spec;
  spec.num_docs = 150;
  spec.sentences_per_doc = 12;
  spec.topics = 4;
  spec.chain_strength = 0.7;  // > 1/topics
  spec.seed = 5;

  double orig_sum = 0.0, perm_sum = 0.0;
  for (const auto& raw : generate(spec)) {
    auto topics = doc_topics(raw, spec);
    Document doc;
    doc.id = raw.id;
    for (int t : topics) doc.sentences.push_back({t});
    auto pairs = generate_permutations(doc, 1, derive_seed(spec.seed, "adj:" + doc.id));
    REQUIRE(pairs.size() == 1);
    std::vector<int> permuted_topics;
    for (const auto& sent : pairs[0].permuted.sentences) permuted_topics.push_back(sent[0]);
    orig_sum += static_cast<double>(adjacent_same_topic(topics));
    perm_sum += static_cast<double>(adjacent_same_topic(permuted_topics));
  }
  CHECK(orig_sum / 150.0 > perm_sum / 150.0);
}
