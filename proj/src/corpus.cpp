#include "dcm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dcm/hash.hpp"
#include "dcm/rng.hpp"

namespace dcm {

Vocabulary::Vocabulary() : Vocabulary({kPadToken, kUnkToken}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.size() < 2 || words_[0] != kPadToken || words_[1] != kUnkToken)
    throw DataError("vocabulary must start with the PAD and UNK entries");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i)).second)
      throw DataError("duplicate word in vocabulary: " + words_[i]);
  }
}

int Vocabulary::lookup(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? unk_index() : it->second;
}

std::uint64_t Vocabulary::content_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& w : words_) {
    h = fnv1a64(w, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

std::vector<std::string> tokenize(const std::string& raw_sentence) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : raw_sentence) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary build_vocabulary(const std::vector<RawDocument>& documents, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : documents)
    for (const auto& line : doc.sentences)
      for (auto& tok : tokenize(line)) ++counts[tok];
  if (counts.empty()) throw DataError("empty corpus: no tokens to build a vocabulary from");

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [word, count] : counts)
    if (count >= min_count) kept.emplace_back(word, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::string> words{kPadToken, kUnkToken};
  words.reserve(kept.size() + 2);
  for (auto& [word, count] : kept) words.push_back(word);
  return Vocabulary(std::move(words));
}

Document index_document(const RawDocument& raw, const Vocabulary& vocab) {
  if (raw.sentences.empty()) throw DataError("document has no sentences: " + raw.id);
  Document doc;
  doc.id = raw.id;
  doc.sentences.reserve(raw.sentences.size());
  for (const auto& line : raw.sentences) {
    Sentence sent;
    for (const auto& tok : tokenize(line)) sent.push_back(vocab.lookup(tok));
    if (sent.empty()) throw DataError("blank sentence in document: " + raw.id);
    doc.sentences.push_back(std::move(sent));
  }
  return doc;
}

std::vector<Window> extract_cliques(const Document& doc, std::size_t window) {
  const std::size_t n = doc.sentences.size();
  if (window < 1) throw DataError("window size must be at least 1");
  if (n < window)
    throw DataError("document too short for clique extraction: " + doc.id + " has " +
                    std::to_string(n) + " sentences, window is " + std::to_string(window));
  std::vector<Window> windows;
  windows.reserve(n - window + 1);
  for (std::size_t i = 0; i + window <= n; ++i)
    windows.emplace_back(doc.sentences.begin() + i, doc.sentences.begin() + i + window);
  return windows;
}

namespace {

// N! - 1, saturating; the number of distinct non-identity permutations.
std::uint64_t non_identity_permutations(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > UINT64_MAX / k) return UINT64_MAX;
    f *= k;
  }
  return f - 1;
}

}  // namespace

std::vector<PermutationPair> generate_permutations(const Document& doc, std::size_t max_count,
                                                   std::uint64_t seed) {
  const std::size_t n = doc.sentences.size();
  std::vector<PermutationPair> pairs;
  if (n < 2) return pairs;

  const std::uint64_t available = non_identity_permutations(n);
  const std::uint64_t target = std::min<std::uint64_t>(max_count, available);

  std::vector<std::size_t> identity(n);
  for (std::size_t i = 0; i < n; ++i) identity[i] = i;

  Rng rng(seed);
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> order = identity;
  while (pairs.size() < target) {
    order = identity;
    rng.shuffle(order);
    if (order == identity || !seen.insert(order).second) continue;
    Document permuted;
    permuted.id = doc.id + "#perm" + std::to_string(pairs.size());
    permuted.sentences.reserve(n);
    for (std::size_t src : order) permuted.sentences.push_back(doc.sentences[src]);
    pairs.push_back(PermutationPair{doc, std::move(permuted), seed, pairs.size()});
  }
  return pairs;
}

std::vector<Clique> build_training_set(const std::vector<Document>& originals, std::size_t window,
                                       std::size_t permutations_per_doc, std::uint64_t seed) {
  std::vector<Clique> cliques;
  bool any_long_enough = false;
  for (const auto& doc : originals) {
    if (doc.sentences.size() < window) continue;
    any_long_enough = true;

    std::set<Window> original_windows;
    for (auto& w : extract_cliques(doc, window)) {
      original_windows.insert(w);
      cliques.push_back(Clique{std::move(w), 1, doc.id});
    }

    const std::uint64_t perm_seed = derive_seed(seed, "train-perms:" + doc.id);
    for (const auto& pair : generate_permutations(doc, permutations_per_doc, perm_seed)) {
      for (auto& w : extract_cliques(pair.permuted, window)) {
        if (original_windows.count(w)) continue;  // locally order-preserving window
        cliques.push_back(Clique{std::move(w), 0, doc.id});
      }
    }
  }
  if (!any_long_enough)
    throw DataError("no document long enough for window size " + std::to_string(window));

  Rng rng(derive_seed(seed, "trainset-shuffle"));
  rng.shuffle(cliques);
  return cliques;
}

std::vector<RawDocument> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);

  std::vector<RawDocument> docs;
  std::set<std::string> ids;
  RawDocument current;
  bool has_id = false;
  std::size_t line_no = 0;
  std::size_t auto_id = 0;

  auto flush = [&](std::size_t at_line) {
    if (current.sentences.empty()) {
      if (has_id)
        throw FormatError(path + ":" + std::to_string(at_line) + ": document id '" + current.id +
                          "' has no sentences");
      return;
    }
    if (current.id.empty()) current.id = "doc" + std::to_string(auto_id);
    if (!ids.insert(current.id).second)
      throw FormatError(path + ":" + std::to_string(at_line) + ": duplicate document id '" +
                        current.id + "'");
    ++auto_id;
    docs.push_back(std::move(current));
    current = RawDocument{};
    has_id = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush(line_no);
      continue;
    }
    if (line[0] == '#') {
      if (line.rfind("# id:", 0) == 0) {
        std::string id = line.substr(5);
        const auto begin = id.find_first_not_of(" \t");
        id = begin == std::string::npos ? std::string{} : id.substr(begin);
        if (id.empty())
          throw FormatError(path + ":" + std::to_string(line_no) + ": empty document id");
        if (!current.sentences.empty()) flush(line_no);
        current.id = id;
        has_id = true;
      }
      continue;  // other comment lines are ignored
    }
    if (tokenize(line).empty())
      throw FormatError(path + ":" + std::to_string(line_no) + ": sentence with no tokens");
    current.sentences.push_back(line);
  }
  flush(line_no + 1);
  return docs;
}

void write_corpus(const std::string& path, const std::vector<RawDocument>& docs,
                  const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);  // binary: keep \n on every platform
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const auto& comment : header_comments) out << "# " << comment << "\n";
  bool first = true;
  for (const auto& doc : docs) {
    if (!first) out << "\n";
    first = false;
    out << "# id: " << doc.id << "\n";
    for (const auto& sent : doc.sentences) out << sent << "\n";
  }
  if (!out) throw IoError("failed writing corpus file: " + path);
}

}  // namespace dcm
