#include "dcm/evaluator.hpp"

#include <cmath>

namespace dcm {

DocumentScore score_document(const Document& doc, const ModelParams& params, std::size_t window) {
  if (window != params.hyper.window)
    throw ShapeError("window " + std::to_string(window) + " does not match the model's clique size " +
                     std::to_string(params.hyper.window));
  DocumentScore score;
  for (const Window& clique : extract_cliques(doc, window)) {
    const double p = forward_clique(clique, params).p;
    score.clique_probabilities.push_back(p);
    score.log_score += std::log(p);
    ++score.clique_count;
  }
  return score;
}

Verdict compare_pair(const Document& original, const Document& permuted, const ModelParams& params,
                     std::size_t window) {
  const double s_orig = score_document(original, params, window).log_score;
  const double s_perm = score_document(permuted, params, window).log_score;
  if (s_orig > s_perm) return Verdict::OriginalWins;
  if (s_perm > s_orig) return Verdict::PermutedWins;
  return Verdict::Tie;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::OriginalWins: return "original";
    case Verdict::PermutedWins: return "permuted";
    default: return "tie";
  }
}

double accuracy_from_counts(std::size_t original_wins, std::size_t scored) {
  if (scored == 0) throw DataError("no scorable pairs to aggregate");
  return static_cast<double>(original_wins) / static_cast<double>(scored);
}

PairwiseReport pairwise_accuracy(const std::vector<PermutationPair>& pairs,
                                 const ModelParams& params, std::size_t window) {
  if (pairs.empty()) throw DataError("empty pair list");
  PairwiseReport report;
  for (const PermutationPair& pair : pairs) {
    if (pair.original.sentences.size() < window) {
      ++report.excluded;
      continue;
    }
    PairRecord record;
    record.doc_id = pair.original.id;
    record.permutation_index = pair.index;
    record.log_original = score_document(pair.original, params, window).log_score;
    record.log_permuted = score_document(pair.permuted, params, window).log_score;
    if (record.log_original > record.log_permuted) {
      record.verdict = Verdict::OriginalWins;
      ++report.original_wins;
    } else if (record.log_permuted > record.log_original) {
      record.verdict = Verdict::PermutedWins;
      ++report.permuted_wins;
    } else {
      record.verdict = Verdict::Tie;
      ++report.ties;
    }
    ++report.scored;
    report.records.push_back(std::move(record));
  }
  if (report.scored == 0) throw DataError("all pairs were unscorable (documents shorter than the window)");
  report.accuracy = accuracy_from_counts(report.original_wins, report.scored);
  return report;
}

}  // namespace dcm
