#include "dcm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcm/dataset.hpp"
#include "dcm/evaluator.hpp"
#include "dcm/hash.hpp"
#include "dcm/model_io.hpp"
#include "dcm/rng.hpp"
#include "dcm/synthgen.hpp"
#include "dcm/trainer.hpp"

namespace dcm {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitUsage = 2;

// Resolved run configuration and input hashes, embedded into every artifact.
struct Provenance {
  std::string command;
  std::vector<std::pair<std::string, std::string>> cfg;
  std::vector<std::pair<std::string, std::string>> inputs;  // name -> path

  void add(const std::string& key, const std::string& value) { cfg.emplace_back(key, value); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, double value) {
    std::ostringstream os;
    os << value;
    add(key, os.str());
  }
  void add_input(const std::string& name, const std::string& path) {
    inputs.emplace_back(name, path);
  }

  std::vector<std::string> comment_lines(
      const std::vector<std::pair<std::string, std::string>>& meta = {}) const {
    std::vector<std::string> lines;
    lines.push_back("dcm " + command);
    for (const auto& [k, v] : cfg) lines.push_back("cfg " + k + "=" + v);
    for (const auto& [name, path] : inputs)
      lines.push_back("input " + name + "=" + path + " fnv1a=" + file_fnv1a(path));
    for (const auto& [k, v] : meta) lines.push_back("meta " + k + "=" + v);
    return lines;
  }

  std::string text() const {
    std::string out;
    for (const auto& line : comment_lines()) out += line + "\n";
    return out;
  }

  json to_json() const {
    json cfg_obj = json::object();
    for (const auto& [k, v] : cfg) cfg_obj[k] = v;
    json inputs_obj = json::object();
    for (const auto& [name, path] : inputs)
      inputs_obj[name] = {{"path", path}, {"fnv1a", file_fnv1a(path)}};
    return json{{"record", "config"}, {"command", command}, {"cfg", cfg_obj}, {"inputs", inputs_obj}};
  }
};

std::uint64_t vocab_hash_of(const Vocabulary& vocab) { return vocab.content_hash(); }

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
  SynthSpec spec;
  std::string out;
  bool force = false;
};

int run_synth(const SynthArgs& args) {
  if (fs::exists(args.out) && !args.force) {
    std::cerr << "refusing to overwrite " << args.out << " (use --force)\n";
    return kExitUsage;
  }
  Provenance prov;
  prov.command = "synth";
  prov.add("docs", args.spec.num_docs);
  prov.add("sentences", args.spec.sentences_per_doc);
  prov.add("vocab", args.spec.vocab_size);
  prov.add("topics", args.spec.topics);
  prov.add("chain", args.spec.chain_strength);
  prov.add("min-tokens", args.spec.min_tokens_per_sentence);
  prov.add("max-tokens", args.spec.max_tokens_per_sentence);
  prov.add("seed", args.spec.seed);
  prov.add("out", args.out);

  write_corpus(args.out, generate(args.spec), prov.comment_lines());
  std::cout << "wrote " << args.spec.num_docs << " documents to " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prepare
// ---------------------------------------------------------------------------

struct PrepareArgs {
  std::string corpus;
  std::string out;
  std::size_t train_count = 0;
  std::size_t max_perms = 20;
  std::size_t train_perms = 1;
  std::size_t min_count = 1;
  std::size_t window = 3;
  std::uint64_t seed = 1;
};

int run_prepare(const PrepareArgs& args) {
  auto raw_docs = read_corpus(args.corpus);
  if (args.train_count < 1 || args.train_count >= raw_docs.size())
    throw DataError("--train must lie in [1, " + std::to_string(raw_docs.size() - 1) +
                    "] for a corpus of " + std::to_string(raw_docs.size()) + " documents");

  std::vector<std::size_t> order(raw_docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(derive_seed(args.seed, "train-test-split"));
  split_rng.shuffle(order);

  std::vector<RawDocument> train_raw;
  std::vector<std::size_t> test_indices;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < args.train_count)
      train_raw.push_back(raw_docs[order[i]]);
    else
      test_indices.push_back(order[i]);
  }
  std::sort(test_indices.begin(), test_indices.end());  // keep corpus order for test docs

  Vocabulary vocab = build_vocabulary(train_raw, args.min_count);
  std::vector<Document> train_docs;
  train_docs.reserve(train_raw.size());
  for (const auto& raw : train_raw) train_docs.push_back(index_document(raw, vocab));

  auto cliques = build_training_set(train_docs, args.window, args.train_perms,
                                    derive_seed(args.seed, "negatives"));

  Provenance prov;
  prov.command = "prepare";
  prov.add("train", args.train_count);
  prov.add("max-perms", args.max_perms);
  prov.add("train-perms", args.train_perms);
  prov.add("min-count", args.min_count);
  prov.add("window", args.window);
  prov.add("seed", args.seed);
  prov.add("out", args.out);
  prov.add_input("corpus", args.corpus);

  const std::string vocab_hex = hex_u64(vocab_hash_of(vocab));
  const std::string dataset_path = args.out + ".dataset";
  const std::string pairs_path = args.out + ".pairs";

  std::size_t positives = 0;
  for (const auto& c : cliques) positives += c.label == 1 ? 1 : 0;
  write_dataset(dataset_path, vocab, args.window, cliques,
                prov.comment_lines({{"vocab_hash", vocab_hex}}));

  std::vector<PairEntry> entries;
  std::size_t skipped_short = 0;
  for (std::size_t idx : test_indices) {
    Document doc = index_document(raw_docs[idx], vocab);
    if (doc.sentences.size() < 2) {
      ++skipped_short;
      continue;
    }
    const std::uint64_t doc_seed = derive_seed(args.seed, "pairs:" + doc.id);
    for (const auto& pair : generate_permutations(doc, args.max_perms, doc_seed))
      entries.push_back(PairEntry{doc.id, pair.index, doc_seed});
  }
  write_pairs(pairs_path, entries,
              prov.comment_lines({{"vocab_hash", vocab_hex},
                                  {"window", std::to_string(args.window)},
                                  {"max_perms", std::to_string(args.max_perms)}}));

  std::cout << "train docs: " << train_raw.size() << ", test docs: " << test_indices.size()
            << " (" << skipped_short << " too short for pairs)\n"
            << "cliques: " << cliques.size() << " (" << positives << " positive, "
            << cliques.size() - positives << " negative) -> " << dataset_path << "\n"
            << "pairs: " << entries.size() << " -> " << pairs_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::string out;
  std::string log;
  std::string embeddings;  // optional word2vec text file
  Hyper hyper;
  bool emb_dim_explicit = false;
  TrainConfig config;
  std::size_t restarts = 1;
  std::uint64_t seed = 1;
};

int run_train(const TrainArgs& args_in) {
  TrainArgs args = args_in;
  DatasetFile data = read_dataset(args.dataset);
  if (data.window != 3)
    throw DataError("the classifier head supports window 3 only; dataset was prepared with " +
                    std::to_string(data.window));
  if (data.cliques.empty()) throw DataError("dataset has no cliques");

  // the embedding file header fixes d; an explicitly conflicting --d is an error
  std::optional<EmbeddingMatrix> pretrained;
  if (!args.embeddings.empty()) {
    pretrained = load_word2vec_text(args.embeddings, data.vocab, derive_seed(args.seed, "init", 0));
    if (args.emb_dim_explicit && pretrained->dim() != args.hyper.emb_dim)
      throw DataError("embedding file dimension " + std::to_string(pretrained->dim()) +
                      " conflicts with --d " + std::to_string(args.hyper.emb_dim));
    args.hyper.emb_dim = pretrained->dim();
  }

  Provenance prov;
  prov.command = "train";
  prov.add("d", args.hyper.emb_dim);
  prov.add("m", args.hyper.filter_width);
  prov.add("n", args.hyper.feature_maps);
  prov.add("h-dim", args.hyper.hidden_dim);
  prov.add("batch", args.config.batch_size);
  prov.add("epochs", args.config.max_epochs);
  prov.add("lr", args.config.learning_rate);
  prov.add("patience", args.config.early_stop_patience);
  prov.add("dev-fraction", args.config.dev_fraction);
  prov.add("clip", args.config.grad_clip_norm);
  prov.add("seed", args.seed);
  prov.add("restarts", args.restarts);
  prov.add("out", args.out);
  prov.add_input("dataset", args.dataset);
  if (!args.embeddings.empty()) prov.add_input("embeddings", args.embeddings);

  std::ofstream log(args.log, std::ios::binary);
  if (!log) throw IoError("cannot write train log: " + args.log);
  log << prov.to_json().dump() << "\n";

  struct RestartResult {
    ModelParams params;
    TrainReport report;
    double best_dev = -1.0;
  };
  std::optional<RestartResult> best;
  std::size_t best_restart = 0;

  for (std::size_t r = 0; r < args.restarts; ++r) {
    const std::uint64_t init_seed = derive_seed(args.seed, "init", r);
    ModelParams params0 = init_model(data.vocab, args.hyper, init_seed);
    if (pretrained) {
      params0.emb = r == 0 ? *pretrained
                           : load_word2vec_text(args.embeddings, data.vocab, init_seed);
    }

    TrainConfig cfg = args.config;
    cfg.seed = derive_seed(args.seed, "train", r);
    auto [params, report] = train(data.cliques, params0, cfg);

    double best_dev = -1.0;
    for (const auto& rec : report.epochs) {
      log << json{{"record", "epoch"}, {"restart", r}, {"epoch", rec.epoch},
                  {"nll", rec.train_nll}, {"dev_acc", rec.dev_accuracy}}
                 .dump()
          << "\n";
      best_dev = std::max(best_dev, rec.dev_accuracy);
    }
    log << json{{"record", "restart_summary"},
                {"restart", r},
                {"best_epoch", report.best_epoch},
                {"best_dev_acc", best_dev},
                {"stopped_early", report.stopped_early}}
               .dump()
        << "\n";

    if (args.restarts > 1)
      save_model(params, args.out + ".r" + std::to_string(r), prov.text());
    if (!best || best_dev > best->best_dev) {
      best = RestartResult{std::move(params), std::move(report), best_dev};
      best_restart = r;
    }
  }

  save_model(best->params, args.out, prov.text());
  log << json{{"record", "summary"},
              {"selected_restart", best_restart},
              {"best_dev_acc", best->best_dev},
              {"model", args.out}}
             .dump()
      << "\n";
  if (!log) throw IoError("failed writing train log: " + args.log);

  std::cout << "trained " << args.restarts << " restart(s); best dev accuracy "
            << best->best_dev << " (restart " << best_restart << "), model -> " << args.out
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string corpus;
  std::string pairs;
  std::string out;
  bool random_model = false;
  std::string dataset;  // vocab source for --random-model
  Hyper hyper;
  std::uint64_t seed = 1;
};

std::vector<PermutationPair> resolve_pairs(const PairFile& file,
                                           const std::vector<RawDocument>& raw_docs,
                                           const Vocabulary& vocab) {
  std::map<std::string, const RawDocument*> by_id;
  for (const auto& doc : raw_docs) by_id[doc.id] = &doc;

  // regenerate each document's permutation list once, to the largest index used
  std::map<std::pair<std::string, std::uint64_t>, std::size_t> needed;
  for (const auto& e : file.entries) {
    auto key = std::make_pair(e.doc_id, e.seed);
    needed[key] = std::max(needed[key], e.permutation_index + 1);
  }
  std::map<std::pair<std::string, std::uint64_t>, std::vector<PermutationPair>> generated;
  for (const auto& [key, count] : needed) {
    auto it = by_id.find(key.first);
    if (it == by_id.end())
      throw DataError("pair file references document '" + key.first + "' missing from the corpus");
    Document doc = index_document(*it->second, vocab);
    auto perms = generate_permutations(doc, count, key.second);
    if (perms.size() < count)
      throw DataError("pair file references permutation " + std::to_string(count - 1) +
                      " of document '" + key.first + "', but only " +
                      std::to_string(perms.size()) + " exist");
    generated[key] = std::move(perms);
  }

  std::vector<PermutationPair> pairs;
  pairs.reserve(file.entries.size());
  for (const auto& e : file.entries)
    pairs.push_back(generated[{e.doc_id, e.seed}][e.permutation_index]);
  return pairs;
}

int run_eval(const EvalArgs& args) {
  ModelParams params = [&] {
    if (args.random_model) {
      DatasetFile data = read_dataset(args.dataset);
      return init_model(data.vocab, args.hyper, derive_seed(args.seed, "random-model"));
    }
    return load_model(args.model);
  }();

  PairFile pair_file = read_pairs(args.pairs);
  if (pair_file.entries.empty())
    throw DataError("pair file has no pairs: " + args.pairs);

  const std::string model_hash = hex_u64(vocab_hash_of(params.vocab));
  auto meta_hash = pair_file.meta.find("vocab_hash");
  if (meta_hash != pair_file.meta.end() && meta_hash->second != model_hash)
    throw DataError("vocabulary mismatch: pair file was prepared with vocab " + meta_hash->second +
                    ", the model carries " + model_hash);

  auto raw_docs = read_corpus(args.corpus);
  auto pairs = resolve_pairs(pair_file, raw_docs, params.vocab);
  PairwiseReport report = pairwise_accuracy(pairs, params, params.hyper.window);

  Provenance prov;
  prov.command = "eval";
  prov.add("model", args.random_model ? "(random)" : args.model);
  prov.add("seed", args.seed);
  prov.add_input("corpus", args.corpus);
  prov.add_input("pairs", args.pairs);
  if (args.random_model)
    prov.add_input("dataset", args.dataset);
  else
    prov.add_input("model", args.model);

  json summary{{"record", "summary"},
               {"accuracy", report.accuracy},
               {"scored", report.scored},
               {"original_wins", report.original_wins},
               {"permuted_wins", report.permuted_wins},
               {"ties", report.ties},
               {"excluded", report.excluded},
               {"tie_rule", "tie-counts-as-loss"}};

  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + args.out);
    out << prov.to_json().dump() << "\n";
    for (const auto& rec : report.records) {
      out << json{{"record", "pair"},
                  {"doc", rec.doc_id},
                  {"perm", rec.permutation_index},
                  {"log_original", rec.log_original},
                  {"log_permuted", rec.log_permuted},
                  {"verdict", verdict_name(rec.verdict)}}
                 .dump()
          << "\n";
    }
    out << summary.dump() << "\n";
    if (!out) throw IoError("failed writing report: " + args.out);
  }

  std::cout << "pairwise accuracy " << report.accuracy << " over " << report.scored
            << " pairs (" << report.original_wins << " wins, " << report.ties << " ties, "
            << report.excluded << " excluded)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gradcheck
// ---------------------------------------------------------------------------

struct GradcheckArgs {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  std::uint64_t seed = 1;
  std::string corrupt;  // block name to corrupt, for detector sanity
  Hyper hyper{4, 2, 5, 6, 3};
  std::size_t vocab_size = 20;
  std::size_t cliques = 3;
};

int run_gradcheck(const GradcheckArgs& args) {
  std::vector<std::string> words{kPadToken, kUnkToken};
  for (std::size_t i = 2; i < args.vocab_size; ++i) words.push_back("w" + std::to_string(i - 2));
  Vocabulary vocab(std::move(words));

  ModelParams params = init_model(vocab, args.hyper, derive_seed(args.seed, "gradcheck-init"));
  {
    // nudge biases off zero so the check runs from a generic point
    Rng rng(derive_seed(args.seed, "gradcheck-bias"));
    for (double& v : params.enc_first.bias) v = rng.uniform(-0.1, 0.1);
    for (double& v : params.enc_second.bias) v = rng.uniform(-0.1, 0.1);
    for (double& v : params.enc_third.bias) v = rng.uniform(-0.1, 0.1);
    for (double& v : params.hidden_b) v = rng.uniform(-0.1, 0.1);
    params.out_b = rng.uniform(-0.1, 0.1);
  }

  Rng rng(derive_seed(args.seed, "gradcheck-data"));
  std::vector<Clique> batch;
  for (std::size_t c = 0; c < args.cliques; ++c) {
    Clique clique;
    clique.label = static_cast<int>(c % 2);
    for (int s = 0; s < 3; ++s) {
      Sentence sent;
      const std::size_t len = 3 + rng.below(4);  // 3..6 tokens
      for (std::size_t t = 0; t < len; ++t)
        sent.push_back(1 + static_cast<int>(rng.below(vocab.size() - 1)));  // never PAD
      clique.sentences.push_back(std::move(sent));
    }
    batch.push_back(std::move(clique));
  }

  Gradients analytic = loss(batch, params).grads;
  if (!args.corrupt.empty()) {
    bool found = false;
    for (auto& block : grad_blocks(analytic)) {
      if (block.name != args.corrupt) continue;
      found = true;
      std::size_t worst = 0;
      for (std::size_t i = 1; i < block.values.size(); ++i)
        if (std::abs(block.values[i]) > std::abs(block.values[worst])) worst = i;
      block.values[worst] *= 2.0;
    }
    if (!found) throw DataError("--corrupt: unknown block '" + args.corrupt + "'");
  }

  std::cout << "gradcheck: eps=" << args.epsilon << " tol=" << args.tolerance
            << " d=" << args.hyper.emb_dim << " m=" << args.hyper.filter_width
            << " n=" << args.hyper.feature_maps << " h_dim=" << args.hyper.hidden_dim
            << " |V|=" << vocab.size() << " cliques=" << batch.size() << "\n";

  auto f = [&]() { return loss(batch, params).nll; };
  const auto pad = static_cast<std::size_t>(vocab.pad_index());
  const std::size_t vocab_cols = vocab.size();

  bool all_pass = true;
  std::vector<std::string> failing;
  auto pviews = param_blocks(params);
  auto gviews = grad_blocks(analytic);
  for (std::size_t b = 0; b < pviews.size(); ++b) {
    std::function<bool(std::size_t)> skip;
    if (pviews[b].name == "W")
      skip = [pad, vocab_cols](std::size_t i) { return i % vocab_cols == pad; };
    GradCheckResult res = gradient_check(f, pviews[b].values, gviews[b].values, args.epsilon,
                                         args.tolerance, skip);
    std::cout << "  block " << pviews[b].name << ": max_rel_err " << res.max_rel_error
              << " over " << res.checked << " coords -> " << (res.pass ? "PASS" : "FAIL") << "\n";
    if (!res.pass) {
      all_pass = false;
      failing.push_back(pviews[b].name);
    }
  }

  if (!all_pass) {
    std::cout << "gradcheck FAILED for block(s):";
    for (const auto& name : failing) std::cout << " " << name;
    std::cout << "\n";
    return kExitCompute;
  }
  std::cout << "gradcheck PASSED (all " << pviews.size() << " blocks)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string model;
  std::string docs;
  std::string out;  // empty -> stdout
  bool verbose = false;
};

int run_score(const ScoreArgs& args) {
  ModelParams params = load_model(args.model);
  auto raw_docs = read_corpus(args.docs);

  std::ofstream file_out;
  if (!args.out.empty()) {
    file_out.open(args.out, std::ios::binary);
    if (!file_out) throw IoError("cannot write scores: " + args.out);
  }
  std::ostream& out = args.out.empty() ? std::cout : file_out;

  if (!args.out.empty()) {
    Provenance prov;
    prov.command = "score";
    prov.add("verbose", args.verbose ? "true" : "false");
    prov.add_input("model", args.model);
    prov.add_input("docs", args.docs);
    for (const auto& line : prov.comment_lines()) out << "# " << line << "\n";
  }

  const std::size_t window = params.hyper.window;
  for (const auto& raw : raw_docs) {
    Document doc = index_document(raw, params.vocab);
    if (doc.sentences.size() < window) {
      out << "# warning: skipped " << doc.id << ": " << doc.sentences.size()
          << " sentences < window " << window << "\n";
      continue;
    }
    DocumentScore score = score_document(doc, params, window);
    out << doc.id << '\t' << score.clique_count << '\t' << score.log_score;
    if (args.verbose) {
      out << '\t';
      for (std::size_t i = 0; i < score.clique_probabilities.size(); ++i) {
        if (i > 0) out << ' ';
        out << score.clique_probabilities[i];
      }
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing scores");
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_hyper_options(CLI::App* cmd, Hyper& hyper) {
  cmd->add_option("--d,--emb-dim", hyper.emb_dim, "word embedding dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--m,--filter-width", hyper.filter_width, "convolution filter width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--n,--feature-maps", hyper.feature_maps, "convolutional feature maps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--h-dim,--hidden-dim", hyper.hidden_dim, "hidden layer width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"deep coherence model: synthesize, prepare, train, evaluate"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic topic-chain corpus");
  synth->set_config("--config");
  synth->add_option("--docs", synth_args.spec.num_docs, "number of documents")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--sentences", synth_args.spec.sentences_per_doc, "sentences per document")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--vocab", synth_args.spec.vocab_size, "vocabulary size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--topics", synth_args.spec.topics, "number of latent topics")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--chain", synth_args.spec.chain_strength,
                    "probability consecutive sentences share a topic")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  synth->add_option("--min-tokens", synth_args.spec.min_tokens_per_sentence, "min sentence length")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--max-tokens", synth_args.spec.max_tokens_per_sentence, "max sentence length")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--seed", synth_args.spec.seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", synth_args.out, "output corpus file")->required();
  synth->add_flag("--force", synth_args.force, "overwrite an existing output file");

  PrepareArgs prepare_args;
  auto* prepare = app.add_subcommand("prepare", "split a corpus and build dataset + pair files");
  prepare->set_config("--config");
  prepare->add_option("--corpus", prepare_args.corpus, "input corpus file")
      ->required()->check(CLI::ExistingFile);
  prepare->add_option("--out", prepare_args.out, "output prefix (<out>.dataset, <out>.pairs)")
      ->required();
  prepare->add_option("--train", prepare_args.train_count, "number of training documents")
      ->required()->check(CLI::PositiveNumber);
  prepare->add_option("--max-perms", prepare_args.max_perms, "max test permutations per document")
      ->check(CLI::PositiveNumber)->capture_default_str();
  prepare->add_option("--train-perms", prepare_args.train_perms,
                      "permutations per training document for negatives")
      ->check(CLI::PositiveNumber)->capture_default_str();
  prepare->add_option("--min-count", prepare_args.min_count, "vocabulary count threshold")
      ->check(CLI::PositiveNumber)->capture_default_str();
  prepare->add_option("--window", prepare_args.window, "clique window size")
      ->check(CLI::Range(std::size_t{2}, std::size_t{8}))->capture_default_str();
  prepare->add_option("--seed", prepare_args.seed, "RNG seed")->capture_default_str();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a model on a prepared dataset");
  train_cmd->set_config("--config");
  train_cmd->add_option("--dataset", train_args.dataset, "dataset file from prepare")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_args.out, "output model file")->required();
  train_cmd->add_option("--log", train_args.log, "train log (default <out>.log.jsonl)");
  train_cmd->add_option("--embeddings", train_args.embeddings,
                        "word2vec text file for embedding initialization")
      ->check(CLI::ExistingFile);
  add_hyper_options(train_cmd, train_args.hyper);
  train_cmd->add_option("--batch", train_args.config.batch_size, "minibatch size")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--epochs", train_args.config.max_epochs, "max training epochs")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--lr", train_args.config.learning_rate, "SGD learning rate")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  train_cmd->add_option("--patience", train_args.config.early_stop_patience,
                        "early-stopping patience in epochs")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--dev-fraction", train_args.config.dev_fraction,
                        "fraction of documents held out for dev")
      ->check(CLI::Range(1e-9, 1.0))->capture_default_str();
  train_cmd->add_option("--clip", train_args.config.grad_clip_norm,
                        "global gradient-norm clip (0 disables)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  train_cmd->add_option("--restarts", train_args.restarts, "independent seeded restarts")
      ->check(CLI::PositiveNumber)->capture_default_str();
  train_cmd->add_option("--seed", train_args.seed, "RNG seed")->capture_default_str();

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "pairwise sentence-ordering evaluation");
  eval_cmd->set_config("--config");
  auto* model_opt = eval_cmd->add_option("--model", eval_args.model, "model file")
      ->check(CLI::ExistingFile);
  auto* random_opt = eval_cmd->add_flag("--random-model", eval_args.random_model,
                                        "score with an untrained randomly initialized model");
  auto* dataset_opt = eval_cmd->add_option("--dataset", eval_args.dataset,
                                           "dataset file providing the vocabulary (with --random-model)")
      ->check(CLI::ExistingFile);
  random_opt->excludes(model_opt);
  random_opt->needs(dataset_opt);
  eval_cmd->add_option("--corpus", eval_args.corpus, "corpus file with the original documents")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pairs", eval_args.pairs, "pair file from prepare")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_args.out, "report file (JSON lines)");
  add_hyper_options(eval_cmd, eval_args.hyper);
  eval_cmd->add_option("--seed", eval_args.seed, "seed for --random-model")->capture_default_str();

  GradcheckArgs gradcheck_args;
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of all gradients");
  gradcheck->set_config("--config");
  gradcheck->add_option("--eps", gradcheck_args.epsilon, "central-difference step")
      ->check(CLI::PositiveNumber)->capture_default_str();
  gradcheck->add_option("--tol", gradcheck_args.tolerance, "max relative error to pass")
      ->check(CLI::PositiveNumber)->capture_default_str();
  gradcheck->add_option("--seed", gradcheck_args.seed, "RNG seed")->capture_default_str();
  gradcheck->add_option("--corrupt", gradcheck_args.corrupt,
                        "corrupt one entry of the named block (detector sanity)");
  gradcheck->add_option("--vocab-size", gradcheck_args.vocab_size, "tiny model vocabulary size")
      ->check(CLI::Range(std::size_t{3}, std::size_t{10000}))->capture_default_str();
  gradcheck->add_option("--cliques", gradcheck_args.cliques, "batch size for the check")
      ->check(CLI::PositiveNumber)->capture_default_str();
  add_hyper_options(gradcheck, gradcheck_args.hyper);

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "log-domain coherence scores for whole documents");
  score->set_config("--config");
  score->add_option("--model", score_args.model, "model file")
      ->required()->check(CLI::ExistingFile);
  score->add_option("--docs", score_args.docs, "corpus file with documents to score")
      ->required()->check(CLI::ExistingFile);
  score->add_option("--out", score_args.out, "output file (default stdout)");
  score->add_flag("--verbose", score_args.verbose, "include per-clique probabilities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(synth)) return run_synth(synth_args);
    if (app.got_subcommand(prepare)) return run_prepare(prepare_args);
    if (app.got_subcommand(train_cmd)) {
      if (train_args.log.empty()) train_args.log = train_args.out + ".log.jsonl";
      train_args.emb_dim_explicit = train_cmd->count("--d") > 0;
      return run_train(train_args);
    }
    if (app.got_subcommand(eval_cmd)) {
      if (!eval_args.random_model && eval_args.model.empty()) {
        std::cerr << "eval: either --model or --random-model is required\n";
        return kExitUsage;
      }
      return run_eval(eval_args);
    }
    if (app.got_subcommand(gradcheck)) return run_gradcheck(gradcheck_args);
    if (app.got_subcommand(score)) return run_score(score_args);
  } catch (const ComputeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int cli_run(const std::vector<std::string>& args) {
  std::vector<std::string> owned = args;
  std::vector<const char*> argv;
  argv.push_back("dcm");
  for (const auto& a : owned) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dcm
