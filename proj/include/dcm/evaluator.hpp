#pragma once

#include <string>
#include <vector>

#include "dcm/model.hpp"

namespace dcm {

/// Log-domain document coherence score: sum over the document's cliques of
/// log p(coherent). The raw product score is exp(log_score).
struct DocumentScore {
  double log_score = 0.0;
  std::size_t clique_count = 0;
  Vector clique_probabilities;
};

enum class Verdict { OriginalWins, PermutedWins, Tie };

struct PairRecord {
  std::string doc_id;
  std::size_t permutation_index = 0;
  double log_original = 0.0;
  double log_permuted = 0.0;
  Verdict verdict = Verdict::Tie;
};

struct PairwiseReport {
  double accuracy = 0.0;  // original wins / scored pairs, ties count as losses
  std::size_t scored = 0;
  std::size_t original_wins = 0;
  std::size_t permuted_wins = 0;
  std::size_t ties = 0;
  std::size_t excluded = 0;  // pairs whose documents are too short to score
  std::vector<PairRecord> records;
};

DocumentScore score_document(const Document& doc, const ModelParams& params, std::size_t window);

Verdict compare_pair(const Document& original, const Document& permuted, const ModelParams& params,
                     std::size_t window);

const char* verdict_name(Verdict v);

// Accuracy aggregation over verdicts, ties counted as losses.
double accuracy_from_counts(std::size_t original_wins, std::size_t scored);

PairwiseReport pairwise_accuracy(const std::vector<PermutationPair>& pairs,
                                 const ModelParams& params, std::size_t window);

}  // namespace dcm
