#include "dcm/model.hpp"

#include <cmath>

#include "dcm/rng.hpp"

namespace dcm {

namespace {

constexpr double kProbClamp = 1e-7;

void fill_uniform(std::span<double> out, Rng& rng, double range) {
  for (double& v : out) v = rng.uniform(-range, range);
}

double glorot_range(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

const FilterBank& bank_for(const ModelParams& params, SentencePosition position) {
  switch (position) {
    case SentencePosition::First: return params.enc_first;
    case SentencePosition::Second: return params.enc_second;
    default: return params.enc_third;
  }
}

}  // namespace

ModelParams init_model(const Vocabulary& vocab, const Hyper& hyper, std::uint64_t seed) {
  if (hyper.window != 3)
    throw ShapeError("the classifier head supports clique size 3 only, got " +
                     std::to_string(hyper.window));
  const std::size_t d = hyper.emb_dim, m = hyper.filter_width, n = hyper.feature_maps,
                    h = hyper.hidden_dim;
  if (d < 1 || m < 1 || n < 1 || h < 1) throw ShapeError("all model dimensions must be >= 1");

  ModelParams p;
  p.hyper = hyper;
  p.vocab = vocab;
  p.emb = init_random(vocab, d, derive_seed(seed, "init-emb"));

  Rng rng(derive_seed(seed, "init-params"));
  const double conv_r = glorot_range(d * m, n);
  for (FilterBank* bank : {&p.enc_first, &p.enc_second, &p.enc_third}) {
    *bank = make_filter_bank(n, d, m);
    fill_uniform(bank->weights.flat(), rng, conv_r);
  }

  // similarity starts near the plain inner product
  p.sim_fs = Matrix(n, n, 0.0);
  p.sim_st = Matrix(n, n, 0.0);
  for (Matrix* m2 : {&p.sim_fs, &p.sim_st}) {
    fill_uniform(m2->flat(), rng, 0.01);
    for (std::size_t i = 0; i < n; ++i) (*m2)(i, i) += 1.0;
  }

  p.hidden_w = Matrix(h, hyper.join_dim(), 0.0);
  fill_uniform(p.hidden_w.flat(), rng, glorot_range(hyper.join_dim(), h));
  p.hidden_b = Vector(h, 0.0);
  p.out_w = Vector(h, 0.0);
  fill_uniform(p.out_w, rng, glorot_range(h, 1));
  p.out_b = 0.0;
  return p;
}

Gradients zero_gradients(const ModelParams& params) {
  Gradients g;
  g.emb = Matrix(params.emb.values.rows(), params.emb.values.cols(), 0.0);
  for (auto [src, dst] : {std::pair{&params.enc_first, &g.enc_first},
                          std::pair{&params.enc_second, &g.enc_second},
                          std::pair{&params.enc_third, &g.enc_third}}) {
    dst->weights = Matrix(src->weights.rows(), src->weights.cols(), 0.0);
    dst->bias = Vector(src->bias.size(), 0.0);
  }
  g.sim_fs = Matrix(params.sim_fs.rows(), params.sim_fs.cols(), 0.0);
  g.sim_st = Matrix(params.sim_st.rows(), params.sim_st.cols(), 0.0);
  g.hidden_w = Matrix(params.hidden_w.rows(), params.hidden_w.cols(), 0.0);
  g.hidden_b = Vector(params.hidden_b.size(), 0.0);
  g.out_w = Vector(params.out_w.size(), 0.0);
  g.out_b = 0.0;
  return g;
}

Vector encode_sentence(const Sentence& sentence, const ModelParams& params,
                       SentencePosition position, SentenceTape* tape) {
  const FilterBank& bank = bank_for(params, position);
  SentenceMatrix input = build_sentence_matrix(sentence, params.emb, params.hyper.filter_width);
  Matrix pre = convolve(input, bank, params.hyper.emb_dim, params.hyper.filter_width);
  Matrix activated = relu(pre);
  MaxPoolTape pool;
  Vector out = maxpool_columns(activated, &pool);
  if (tape) {
    tape->tokens = sentence;
    tape->input = std::move(input);
    tape->pre_activation = std::move(pre);
    tape->pool = std::move(pool);
  }
  return out;
}

CliqueForwardTrace forward_clique(const Window& clique, const ModelParams& params) {
  if (clique.size() != 3)
    throw DataError("forward_clique expects exactly 3 sentences, got " +
                    std::to_string(clique.size()));
  CliqueForwardTrace t;
  t.x_first = encode_sentence(clique[0], params, SentencePosition::First, &t.tapes[0]);
  t.x_second = encode_sentence(clique[1], params, SentencePosition::Second, &t.tapes[1]);
  t.x_third = encode_sentence(clique[2], params, SentencePosition::Third, &t.tapes[2]);

  t.sim_fs = bilinear_similarity(t.x_first, params.sim_fs, t.x_second);
  t.sim_st = bilinear_similarity(t.x_second, params.sim_st, t.x_third);

  t.x_join.reserve(params.hyper.join_dim());
  t.x_join.assign(t.x_first.begin(), t.x_first.end());
  t.x_join.push_back(t.sim_fs);
  t.x_join.insert(t.x_join.end(), t.x_second.begin(), t.x_second.end());
  t.x_join.push_back(t.sim_st);
  t.x_join.insert(t.x_join.end(), t.x_third.begin(), t.x_third.end());

  t.hidden = affine(t.x_join, params.hidden_w, params.hidden_b);
  for (double& v : t.hidden) v = std::tanh(v);

  t.logit = dot(params.out_w, t.hidden) + params.out_b;
  t.p = sigmoid(t.logit);
  return t;
}

namespace {

// Backward through one sentence encoder; routes the input gradient into the
// embedding table, skipping PAD columns.
void backward_sentence(const Vector& d_encoded, const SentenceTape& tape,
                       const ModelParams& params, const FilterBank& bank, FilterBank& d_bank,
                       Matrix& d_emb) {
  Matrix d_activated(tape.pre_activation.rows(), tape.pre_activation.cols(), 0.0);
  maxpool_backward(d_encoded, tape.pool, d_activated);
  Matrix d_pre = relu_backward(d_activated, tape.pre_activation);

  Matrix d_input(tape.input.values.rows(), tape.input.values.cols(), 0.0);
  convolve_backward(d_pre, tape.input, bank, params.hyper.emb_dim, params.hyper.filter_width,
                    d_bank, d_input);

  const int pad = params.vocab.pad_index();
  for (std::size_t i = 0; i < tape.tokens.size(); ++i) {
    const int tok = tape.tokens[i];
    if (tok == pad) continue;  // frozen zero column
    for (std::size_t r = 0; r < d_input.rows(); ++r)
      d_emb(r, static_cast<std::size_t>(tok)) += d_input(r, i);
  }
  // gradient landing on padded columns is dropped: those are PAD embeddings
}

}  // namespace

void backward_clique(const CliqueForwardTrace& trace, const ModelParams& params,
                     double upstream_dlogit, Gradients& grads) {
  const std::size_t n = params.hyper.feature_maps;
  const std::size_t h = params.hyper.hidden_dim;

  // output layer
  Vector d_hidden(h, 0.0);
  for (std::size_t i = 0; i < h; ++i) {
    grads.out_w[i] += upstream_dlogit * trace.hidden[i];
    d_hidden[i] = upstream_dlogit * params.out_w[i];
  }
  grads.out_b += upstream_dlogit;

  // tanh
  for (std::size_t i = 0; i < h; ++i)
    d_hidden[i] *= 1.0 - trace.hidden[i] * trace.hidden[i];

  // hidden affine
  Vector d_join(params.hyper.join_dim(), 0.0);
  affine_backward(d_hidden, trace.x_join, params.hidden_w, grads.hidden_w, grads.hidden_b, d_join);

  // split the join gradient: [x_f (n); sim_fs; x_s (n); sim_st; x_t (n)]
  Vector d_xf(d_join.begin(), d_join.begin() + n);
  const double d_sim_fs = d_join[n];
  Vector d_xs(d_join.begin() + n + 1, d_join.begin() + 2 * n + 1);
  const double d_sim_st = d_join[2 * n + 1];
  Vector d_xt(d_join.begin() + 2 * n + 2, d_join.end());

  bilinear_backward(d_sim_fs, trace.x_first, params.sim_fs, trace.x_second, grads.sim_fs, d_xf,
                    d_xs);
  bilinear_backward(d_sim_st, trace.x_second, params.sim_st, trace.x_third, grads.sim_st, d_xs,
                    d_xt);

  backward_sentence(d_xf, trace.tapes[0], params, params.enc_first, grads.enc_first, grads.emb);
  backward_sentence(d_xs, trace.tapes[1], params, params.enc_second, grads.enc_second, grads.emb);
  backward_sentence(d_xt, trace.tapes[2], params, params.enc_third, grads.enc_third, grads.emb);
}

LossResult loss(std::span<const Clique> batch, const ModelParams& params) {
  if (batch.empty()) throw DataError("loss over an empty batch");
  LossResult result;
  result.grads = zero_gradients(params);
  for (const Clique& clique : batch) {
    if (clique.label != 0 && clique.label != 1)
      throw DataError("clique label must be 0 or 1, got " + std::to_string(clique.label));
    CliqueForwardTrace trace = forward_clique(clique.sentences, params);
    const double clamped = std::min(std::max(trace.p, kProbClamp), 1.0 - kProbClamp);
    result.nll -= clique.label == 1 ? std::log(clamped) : std::log(1.0 - clamped);
    // the clamp protects the log only; the backward uses the exact
    // Bernoulli-sigmoid derivative
    const double d_logit = trace.p - static_cast<double>(clique.label);
    backward_clique(trace, params, d_logit, result.grads);
    ++result.count;
  }
  return result;
}

std::vector<ParamBlockView> param_blocks(ModelParams& params) {
  return {
      {"W", params.emb.values.flat()},
      {"F_f", params.enc_first.weights.flat()},
      {"b_f", params.enc_first.bias},
      {"F_s", params.enc_second.weights.flat()},
      {"b_s", params.enc_second.bias},
      {"F_t", params.enc_third.weights.flat()},
      {"b_t", params.enc_third.bias},
      {"M1", params.sim_fs.flat()},
      {"M2", params.sim_st.flat()},
      {"Wh", params.hidden_w.flat()},
      {"bh", params.hidden_b},
      {"Ws", params.out_w},
      {"bs", {&params.out_b, 1}},
  };
}

std::vector<ConstParamBlockView> param_blocks(const ModelParams& params) {
  std::vector<ConstParamBlockView> views;
  auto mutable_views = param_blocks(const_cast<ModelParams&>(params));
  views.reserve(mutable_views.size());
  for (auto& v : mutable_views) views.push_back({std::move(v.name), v.values});
  return views;
}

std::vector<ParamBlockView> grad_blocks(Gradients& grads) {
  return {
      {"W", grads.emb.flat()},
      {"F_f", grads.enc_first.weights.flat()},
      {"b_f", grads.enc_first.bias},
      {"F_s", grads.enc_second.weights.flat()},
      {"b_s", grads.enc_second.bias},
      {"F_t", grads.enc_third.weights.flat()},
      {"b_t", grads.enc_third.bias},
      {"M1", grads.sim_fs.flat()},
      {"M2", grads.sim_st.flat()},
      {"Wh", grads.hidden_w.flat()},
      {"bh", grads.hidden_b},
      {"Ws", grads.out_w},
      {"bs", {&grads.out_b, 1}},
  };
}

double grad_global_norm(Gradients& grads) {
  double sq = 0.0;
  for (const auto& block : grad_blocks(grads))
    for (double v : block.values) sq += v * v;
  return std::sqrt(sq);
}

void scale_gradients(Gradients& grads, double factor) {
  for (auto& block : grad_blocks(grads))
    for (double& v : block.values) v *= factor;
}

void sgd_step(ModelParams& params, Gradients& grads, double learning_rate) {
  const auto pad = static_cast<std::size_t>(params.vocab.pad_index());
  for (std::size_t r = 0; r < grads.emb.rows(); ++r) grads.emb(r, pad) = 0.0;

  auto pblocks = param_blocks(params);
  auto gblocks = grad_blocks(grads);
  for (std::size_t b = 0; b < pblocks.size(); ++b) {
    auto& pv = pblocks[b].values;
    auto& gv = gblocks[b].values;
    for (std::size_t i = 0; i < pv.size(); ++i) pv[i] -= learning_rate * gv[i];
  }
}

}  // namespace dcm
