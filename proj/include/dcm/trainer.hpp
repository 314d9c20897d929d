#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dcm/model.hpp"

namespace dcm {

struct TrainConfig {
  std::size_t batch_size = 500;
  std::size_t max_epochs = 20;
  double learning_rate = 0.05;
  std::size_t early_stop_patience = 3;  // epochs without dev improvement
  double dev_fraction = 0.1;
  std::uint64_t seed = 1;
  double grad_clip_norm = 5.0;  // <= 0 disables clipping
};

struct EpochRecord {
  std::size_t epoch = 0;   // 1-based
  double train_nll = 0.0;  // mean NLL per clique over the epoch's batches
  double dev_accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 1-based; 0 when training never ran an epoch
  bool stopped_early = false;
};

// Document-granular split: all cliques sharing a source id land on the same
// side. Cliques without a source id form singleton groups. Deterministic per
// seed; throws DataError for fewer than 2 cliques.
std::pair<std::vector<Clique>, std::vector<Clique>> split_dev(const std::vector<Clique>& cliques,
                                                              double dev_fraction,
                                                              std::uint64_t seed);

// Fraction of cliques where (p >= threshold) matches the label.
double clique_accuracy(const std::vector<Clique>& cliques, const ModelParams& params,
                       double threshold = 0.5);

// Minibatch SGD with per-epoch reshuffling, global-norm gradient clipping,
// and early stopping on dev clique accuracy. Returns the parameters of the
// best dev epoch (ties go to the earliest).
std::pair<ModelParams, TrainReport> train(const std::vector<Clique>& dataset,
                                          const ModelParams& params0, const TrainConfig& config);

}  // namespace dcm
