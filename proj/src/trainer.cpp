#include "dcm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dcm/rng.hpp"

namespace dcm {

std::pair<std::vector<Clique>, std::vector<Clique>> split_dev(const std::vector<Clique>& cliques,
                                                              double dev_fraction,
                                                              std::uint64_t seed) {
  if (cliques.size() < 2) throw DataError("need at least 2 cliques to split off a dev set");
  if (dev_fraction <= 0.0 || dev_fraction >= 1.0)
    throw DataError("dev_fraction must lie strictly between 0 and 1");

  // group keys in first-appearance order; anonymous cliques stay singletons
  auto key_of = [](const Clique& c, std::size_t index) {
    return c.source_id.empty() ? "#anon" + std::to_string(index) : c.source_id;
  };
  std::vector<std::string> keys;
  std::set<std::string> key_set;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    std::string key = key_of(cliques[i], i);
    if (key_set.insert(key).second) keys.push_back(std::move(key));
  }

  Rng rng(derive_seed(seed, "dev-split"));
  rng.shuffle(keys);
  std::size_t dev_groups = static_cast<std::size_t>(
      std::llround(static_cast<double>(keys.size()) * dev_fraction));
  dev_groups = std::clamp<std::size_t>(dev_groups, 1, keys.size() - 1);

  std::set<std::string> dev_keys(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(dev_groups));
  std::vector<Clique> train_set, dev_set;
  for (std::size_t i = 0; i < cliques.size(); ++i)
    (dev_keys.count(key_of(cliques[i], i)) ? dev_set : train_set).push_back(cliques[i]);
  return {std::move(train_set), std::move(dev_set)};
}

double clique_accuracy(const std::vector<Clique>& cliques, const ModelParams& params,
                       double threshold) {
  if (cliques.empty()) throw DataError("clique_accuracy over an empty set");
  std::size_t correct = 0;
  for (const Clique& c : cliques) {
    const double p = forward_clique(c.sentences, params).p;
    const int predicted = p >= threshold ? 1 : 0;
    if (predicted == c.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(cliques.size());
}

std::pair<ModelParams, TrainReport> train(const std::vector<Clique>& dataset,
                                          const ModelParams& params0, const TrainConfig& config) {
  if (config.batch_size < 1) throw DataError("batch_size must be at least 1");
  if (config.learning_rate < 0.0) throw DataError("learning_rate must be non-negative");
  bool has_pos = false, has_neg = false;
  for (const Clique& c : dataset) (c.label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw DataError("training data must contain both labels");

  auto [train_set, dev_set] = split_dev(dataset, config.dev_fraction, config.seed);
  if (train_set.empty() || dev_set.empty())
    throw DataError("dev split left one side empty; dataset too small");

  ModelParams params = params0;
  ModelParams best = params;
  TrainReport report;
  double best_acc = -1.0;
  std::size_t epochs_since_improvement = 0;

  Rng shuffle_rng(derive_seed(config.seed, "epoch-shuffle"));
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<Clique> batch;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);

    double epoch_nll = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[order[i]]);

      LossResult result = loss(batch, params);
      if (!std::isfinite(result.nll))
        throw ComputeError("non-finite training loss in epoch " + std::to_string(epoch) +
                           ", batch starting at example " + std::to_string(start));
      epoch_nll += result.nll;
      seen += result.count;

      if (config.grad_clip_norm > 0.0) {
        const double norm = grad_global_norm(result.grads);
        if (norm > config.grad_clip_norm)
          scale_gradients(result.grads, config.grad_clip_norm / norm);
      }
      sgd_step(params, result.grads, config.learning_rate);
    }

    const double dev_acc = clique_accuracy(dev_set, params);
    report.epochs.push_back(
        EpochRecord{epoch, epoch_nll / static_cast<double>(seen), dev_acc});

    if (dev_acc > best_acc) {
      best_acc = dev_acc;
      best = params;
      report.best_epoch = epoch;
      epochs_since_improvement = 0;
    } else {
      ++epochs_since_improvement;
      if (epochs_since_improvement >= config.early_stop_patience) {
        report.stopped_early = true;
        break;
      }
    }
  }
  return {std::move(best), std::move(report)};
}

}  // namespace dcm
