#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dcm/corpus.hpp"
#include "dcm/embedding.hpp"
#include "dcm/neuralops.hpp"

namespace dcm {

struct Hyper {
  std::size_t emb_dim = 50;      // d
  std::size_t filter_width = 4;  // m
  std::size_t feature_maps = 100;
  std::size_t hidden_dim = 100;
  std::size_t window = 3;  // clique size; the classifier head is specialized to 3

  std::size_t join_dim() const { return 3 * feature_maps + 2; }
};

enum class SentencePosition { First, Second, Third };

/// The full trainable parameter set: embedding table, one filter bank per
/// clique position, the two inter-sentence similarity matrices, and the
/// hidden/output head. Carries its vocabulary so a model file is
/// self-contained.
struct ModelParams {
  Hyper hyper;
  Vocabulary vocab;

  EmbeddingMatrix emb;                       // d x |V|
  FilterBank enc_first, enc_second, enc_third;
  Matrix sim_fs;                             // n x n, first <-> second
  Matrix sim_st;                             // n x n, second <-> third
  Matrix hidden_w;                           // h_dim x (3n+2)
  Vector hidden_b;                           // h_dim
  Vector out_w;                              // h_dim (single output row)
  double out_b = 0.0;
};

/// Same shapes as the trainable fields of ModelParams.
struct Gradients {
  Matrix emb;
  FilterBank enc_first, enc_second, enc_third;
  Matrix sim_fs, sim_st;
  Matrix hidden_w;
  Vector hidden_b;
  Vector out_w;
  double out_b = 0.0;
};

struct SentenceTape {
  Sentence tokens;
  SentenceMatrix input;   // d x max(|s|, m)
  Matrix pre_activation;  // n x (cols - m + 1), before ReLU
  MaxPoolTape pool;
};

struct CliqueForwardTrace {
  Vector x_first, x_second, x_third;  // n each
  double sim_fs = 0.0, sim_st = 0.0;
  Vector x_join;   // [x_first; sim_fs; x_second; sim_st; x_third]
  Vector hidden;   // tanh applied
  double logit = 0.0;
  double p = 0.5;
  std::array<SentenceTape, 3> tapes;
};

ModelParams init_model(const Vocabulary& vocab, const Hyper& hyper, std::uint64_t seed);
Gradients zero_gradients(const ModelParams& params);

Vector encode_sentence(const Sentence& sentence, const ModelParams& params,
                       SentencePosition position, SentenceTape* tape = nullptr);

CliqueForwardTrace forward_clique(const Window& clique, const ModelParams& params);

// Accumulates gradients of `upstream_dlogit * logit` into grads, where
// upstream_dlogit is d(loss)/d(logit) for this clique.
void backward_clique(const CliqueForwardTrace& trace, const ModelParams& params,
                     double upstream_dlogit, Gradients& grads);

struct LossResult {
  double nll = 0.0;  // summed over the batch
  std::size_t count = 0;
  Gradients grads;
};

// Batch negative log-likelihood under the per-clique Bernoulli reading, with
// gradients summed in batch order. Probabilities are clamped to
// [1e-7, 1 - 1e-7] inside the log only.
LossResult loss(std::span<const Clique> batch, const ModelParams& params);

// ---------------------------------------------------------------------------
// Whole-parameter-vector helpers (SGD step, clipping, gradient check).
// ---------------------------------------------------------------------------

struct ParamBlockView {
  std::string name;
  std::span<double> values;
};

struct ConstParamBlockView {
  std::string name;
  std::span<const double> values;
};

// The 13 trainable blocks in serialization order; the two views over a
// (params, grads) pair line up index-for-index.
std::vector<ParamBlockView> param_blocks(ModelParams& params);
std::vector<ConstParamBlockView> param_blocks(const ModelParams& params);
std::vector<ParamBlockView> grad_blocks(Gradients& grads);

double grad_global_norm(Gradients& grads);
void scale_gradients(Gradients& grads, double factor);
// theta <- theta - lr * grad. The PAD embedding column is masked.
void sgd_step(ModelParams& params, Gradients& grads, double learning_rate);

}  // namespace dcm
