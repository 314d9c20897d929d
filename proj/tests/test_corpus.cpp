#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "dcm/corpus.hpp"
#include "dcm/rng.hpp"

using namespace dcm;

namespace {

Document make_doc(const std::string& id, std::size_t sentences, int token_base = 2) {
  Document doc;
  doc.id = id;
  for (std::size_t i = 0; i < sentences; ++i)
    doc.sentences.push_back({token_base + static_cast<int>(i), token_base});
  return doc;
}

}  // namespace

TEST_CASE("tokenize splits on whitespace and lowercases") {
  CHECK(tokenize("Tom loves reading books.") ==
        std::vector<std::string>{"tom", "loves", "reading", "books."});
  CHECK(tokenize("").empty());
  CHECK(tokenize("A  B") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("  \t ").empty());
}

TEST_CASE("build_vocabulary keeps PAD, UNK and thresholded tokens") {
  std::vector<RawDocument> docs{{"d0", {"a a a b"}}};
  Vocabulary vocab = build_vocabulary(docs, 2);
  CHECK(vocab.size() == 3);
  CHECK(vocab.word(0) == kPadToken);
  CHECK(vocab.word(1) == kUnkToken);
  CHECK(vocab.word(2) == "a");
  CHECK(vocab.lookup("b") == vocab.unk_index());
}

TEST_CASE("build_vocabulary orders by count then lexicographically") {
  std::vector<RawDocument> docs{{"d0", {"b b c c a"}}};
  Vocabulary vocab = build_vocabulary(docs, 1);
  // b and c tie at 2, a has 1
  CHECK(vocab.word(2) == "b");
  CHECK(vocab.word(3) == "c");
  CHECK(vocab.word(4) == "a");
}

TEST_CASE("vocabulary is a bijection over stored words") {
  std::vector<RawDocument> docs{{"d0", {"x y z y x w"}}};
  Vocabulary vocab = build_vocabulary(docs, 1);
  for (std::size_t i = 0; i < vocab.size(); ++i)
    CHECK(vocab.lookup(vocab.word(i)) == static_cast<int>(i));
  CHECK(vocab.pad_index() != vocab.unk_index());
}

TEST_CASE("build_vocabulary rejects an empty corpus") {
  CHECK_THROWS_AS(build_vocabulary({}, 1), DataError);
  std::vector<RawDocument> blank{{"d0", {}}};
  CHECK_THROWS_AS(build_vocabulary(blank, 1), DataError);
}

TEST_CASE("index_document maps OOV tokens to UNK and preserves order") {
  std::vector<RawDocument> docs{{"d0", {"a b"}}};
  Vocabulary vocab = build_vocabulary(docs, 1);
  RawDocument raw{"d1", {"a b", "c"}};
  Document doc = index_document(raw, vocab);
  REQUIRE(doc.sentences.size() == 2);
  CHECK(doc.sentences[0] == Sentence{vocab.lookup("a"), vocab.lookup("b")});
  CHECK(doc.sentences[1] == Sentence{vocab.unk_index()});

  SUBCASE("re-indexing is idempotent") {
    Document again = index_document(raw, vocab);
    CHECK(again.sentences == doc.sentences);
  }
  SUBCASE("an all-OOV sentence is still accepted") {
    Document oov = index_document(RawDocument{"d2", {"q r s"}}, vocab);
    CHECK(oov.sentences[0] == Sentence(3, vocab.unk_index()));
  }
  SUBCASE("zero sentences is an error") {
    CHECK_THROWS_AS(index_document(RawDocument{"d3", {}}, vocab), DataError);
  }
}

TEST_CASE("extract_cliques returns the N-L+1 interior windows in order") {
  Document doc = make_doc("d", 5);
  auto windows = extract_cliques(doc, 3);
  REQUIRE(windows.size() == 3);
  CHECK(windows[0] == Window{doc.sentences[0], doc.sentences[1], doc.sentences[2]});
  CHECK(windows[1] == Window{doc.sentences[1], doc.sentences[2], doc.sentences[3]});
  CHECK(windows[2] == Window{doc.sentences[2], doc.sentences[3], doc.sentences[4]});

  CHECK(extract_cliques(make_doc("d3", 3), 3).size() == 1);
  CHECK_THROWS_AS(extract_cliques(make_doc("d2", 2), 3), DataError);
}

TEST_CASE("clique count matches N-L+1 across the parameter grid") {
  for (std::size_t n = 3; n <= 50; ++n)
    for (std::size_t window = 2; window <= 5; ++window) {
      if (n < window) continue;
      CHECK(extract_cliques(make_doc("d", n), window).size() == n - window + 1);
    }
}

TEST_CASE("generate_permutations: the two-sentence document has one permutation") {
  auto pairs = generate_permutations(make_doc("d", 2), 20, 7);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].permuted.sentences[0] == pairs[0].original.sentences[1]);
  CHECK(pairs[0].permuted.sentences[1] == pairs[0].original.sentences[0]);
}

TEST_CASE("generate_permutations finds all 5 non-identity orders of 3 sentences") {
  // oracle: enumerate the 3! orders and drop the identity
  Document doc = make_doc("d", 3);
  std::set<std::vector<Sentence>> expected;
  std::vector<std::size_t> order{0, 1, 2};
  do {
    std::vector<Sentence> arranged;
    for (std::size_t i : order) arranged.push_back(doc.sentences[i]);
    expected.insert(arranged);
  } while (std::next_permutation(order.begin(), order.end()));
  expected.erase(doc.sentences);
  REQUIRE(expected.size() == 5);

  auto pairs = generate_permutations(doc, 20, 3);
  CHECK(pairs.size() == 5);
  std::set<std::vector<Sentence>> produced;
  for (const auto& p : pairs) produced.insert(p.permuted.sentences);
  CHECK(produced == expected);
}

TEST_CASE("generate_permutations is deterministic, deduplicated, order-inequal") {
  Document doc = make_doc("d", 10);
  auto a = generate_permutations(doc, 20, 42);
  auto b = generate_permutations(doc, 20, 42);
  REQUIRE(a.size() == 20);
  REQUIRE(b.size() == 20);
  std::set<std::vector<Sentence>> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].permuted.sentences == b[i].permuted.sentences);
    CHECK(a[i].index == i);
    CHECK(seen.insert(a[i].permuted.sentences).second);  // no duplicates
    CHECK(a[i].permuted.sentences != doc.sentences);

    auto sorted_orig = doc.sentences;
    auto sorted_perm = a[i].permuted.sentences;
    std::sort(sorted_orig.begin(), sorted_orig.end());
    std::sort(sorted_perm.begin(), sorted_perm.end());
    CHECK(sorted_orig == sorted_perm);  // same multiset
  }
}

TEST_CASE("generate_permutations list is a stable prefix in max_count") {
  Document doc = make_doc("d", 6);
  auto small = generate_permutations(doc, 3, 11);
  auto large = generate_permutations(doc, 20, 11);
  REQUIRE(small.size() == 3);
  for (std::size_t i = 0; i < small.size(); ++i)
    CHECK(small[i].permuted.sentences == large[i].permuted.sentences);
}

TEST_CASE("generate_permutations: single-sentence document yields nothing") {
  CHECK(generate_permutations(make_doc("d", 1), 20, 5).empty());
}

TEST_CASE("build_training_set labels windows and filters order-preserving negatives") {
  // 3 sentences, window 3: one positive window; the only useful permutations
  // reorder it, and any permutation equal to the original window is excluded
  Document doc = make_doc("d", 3);
  auto cliques = build_training_set({doc}, 3, 1, 9);
  std::size_t positives = 0, negatives = 0;
  for (const auto& c : cliques) {
    CHECK(c.source_id == "d");
    if (c.label == 1) {
      ++positives;
      CHECK(c.sentences == Window{doc.sentences[0], doc.sentences[1], doc.sentences[2]});
    } else {
      ++negatives;
      CHECK(c.sentences != Window{doc.sentences[0], doc.sentences[1], doc.sentences[2]});
    }
  }
  CHECK(positives == 1);
  CHECK(negatives == 1);
}

TEST_CASE("no negative clique equals a positive window of the same document") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    Document doc = make_doc("doc" + std::to_string(trial), 4 + rng.below(6));
    auto cliques = build_training_set({doc}, 3, 5, 1000 + trial);
    std::set<Window> positives;
    for (const auto& c : cliques)
      if (c.label == 1) positives.insert(c.sentences);
    for (const auto& c : cliques)
      if (c.label == 0) CHECK(positives.count(c.sentences) == 0);
  }
}

TEST_CASE("build_training_set is deterministic and rejects short-only corpora") {
  Document doc = make_doc("d", 5);
  auto a = build_training_set({doc}, 3, 2, 77);
  auto b = build_training_set({doc}, 3, 2, 77);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == b[i].label);
    CHECK(a[i].sentences == b[i].sentences);
  }
  CHECK_THROWS_AS(build_training_set({make_doc("d", 2)}, 3, 1, 0), DataError);
}

TEST_CASE("corpus files round-trip documents, ids and comments") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "dcm_test_corpus.txt").string();

  std::vector<RawDocument> docs{{"alpha", {"a b c", "d e"}}, {"beta", {"x y"}}};
  write_corpus(path, docs, {"cfg seed=1"});
  auto loaded = read_corpus(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].id == "alpha");
  CHECK(loaded[0].sentences == std::vector<std::string>{"a b c", "d e"});
  CHECK(loaded[1].id == "beta");
  fs::remove(path);
}

TEST_CASE("corpus parser assigns ids, skips comments, flags errors with line numbers") {
  namespace fs = std::filesystem;
  const std::string path = (fs::temp_directory_path() / "dcm_test_corpus2.txt").string();
  {
    std::ofstream out(path);
    out << "# a provenance comment\n"
        << "first sentence\nsecond sentence\n\n"
        << "# id: named\nonly sentence\n";
  }
  auto docs = read_corpus(path);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0].id == "doc0");
  CHECK(docs[1].id == "named");

  {
    std::ofstream out(path);
    out << "# id: dup\na\n\n# id: dup\nb\n";
  }
  CHECK_THROWS_AS(read_corpus(path), FormatError);
  fs::remove(path);
}
