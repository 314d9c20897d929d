#include "dcm/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dcm/hash.hpp"

namespace dcm {

namespace {

constexpr char kMagic[4] = {'D', 'C', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("cannot write model file: " + path);
  }

  void bytes(const char* data, std::size_t len) { out_.write(data, static_cast<std::streamsize>(len)); }

  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, 4);
  }

  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    bytes(b, 8);
  }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }

  void array(std::span<const double> values) {
    for (double v : values) f64(v);
  }

  void finish() {
    out_.flush();
    if (!out_) throw IoError("failed writing model file: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open model file: " + path);
  }

  void bytes(char* data, std::size_t len) {
    in_.read(data, static_cast<std::streamsize>(len));
    if (static_cast<std::size_t>(in_.gcount()) != len)
      throw TruncatedError(path_ + ": model file ends early");
  }

  std::uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::string str(std::size_t max_len = 1 << 20) {
    const std::uint32_t len = u32();
    if (len > max_len) throw FormatError(path_ + ": unreasonable string length in model file");
    std::string s(len, '\0');
    if (len > 0) bytes(s.data(), len);
    return s;
  }

  void array(std::span<double> values) {
    for (double& v : values) v = f64();
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  const std::string& path() const { return path_; }

 private:
  std::ifstream in_;
  std::string path_;
};

}  // namespace

void save_model(const ModelParams& params, const std::string& path, const std::string& provenance) {
  Writer w(path);
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(params.hyper.emb_dim));
  w.u32(static_cast<std::uint32_t>(params.hyper.filter_width));
  w.u32(static_cast<std::uint32_t>(params.hyper.feature_maps));
  w.u32(static_cast<std::uint32_t>(params.hyper.hidden_dim));
  w.u32(static_cast<std::uint32_t>(params.hyper.window));
  w.u32(static_cast<std::uint32_t>(params.vocab.size()));
  for (const auto& word : params.vocab.words()) w.str(word);
  w.u64(params.vocab.content_hash());
  w.str(provenance);

  for (const auto& block : param_blocks(params)) w.array(block.values);
  w.finish();
}

ModelParams load_model(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError(path + ": not a model file (bad magic bytes)");
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw VersionError(path + ": unsupported model format version " + std::to_string(version));

  Hyper hyper;
  hyper.emb_dim = r.u32();
  hyper.filter_width = r.u32();
  hyper.feature_maps = r.u32();
  hyper.hidden_dim = r.u32();
  hyper.window = r.u32();
  if (hyper.emb_dim < 1 || hyper.filter_width < 1 || hyper.feature_maps < 1 ||
      hyper.hidden_dim < 1)
    throw ShapeError(path + ": model header has zero-sized dimensions");
  if (hyper.window != 3)
    throw ShapeError(path + ": unsupported clique size " + std::to_string(hyper.window));

  const std::uint32_t vocab_size = r.u32();
  if (vocab_size < 2) throw ShapeError(path + ": vocabulary smaller than PAD+UNK");
  std::vector<std::string> words;
  words.reserve(vocab_size);
  for (std::uint32_t i = 0; i < vocab_size; ++i) words.push_back(r.str());
  Vocabulary vocab(std::move(words));

  const std::uint64_t stored_hash = r.u64();
  if (stored_hash != vocab.content_hash())
    throw FormatError(path + ": vocabulary hash does not match the stored word list");
  r.str();  // provenance, not needed here

  ModelParams params;
  params.hyper = hyper;
  params.vocab = std::move(vocab);
  params.emb = EmbeddingMatrix{Matrix(hyper.emb_dim, params.vocab.size(), 0.0)};
  for (FilterBank* bank : {&params.enc_first, &params.enc_second, &params.enc_third})
    *bank = make_filter_bank(hyper.feature_maps, hyper.emb_dim, hyper.filter_width);
  params.sim_fs = Matrix(hyper.feature_maps, hyper.feature_maps, 0.0);
  params.sim_st = Matrix(hyper.feature_maps, hyper.feature_maps, 0.0);
  params.hidden_w = Matrix(hyper.hidden_dim, hyper.join_dim(), 0.0);
  params.hidden_b = Vector(hyper.hidden_dim, 0.0);
  params.out_w = Vector(hyper.hidden_dim, 0.0);

  for (auto& block : param_blocks(params)) r.array(block.values);
  if (!r.at_eof()) throw FormatError(path + ": trailing bytes after the parameter arrays");
  return params;
}

std::string read_model_provenance(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError(path + ": not a model file (bad magic bytes)");
  if (r.u32() != kVersion) throw VersionError(path + ": unsupported model format version");
  for (int i = 0; i < 5; ++i) r.u32();
  const std::uint32_t vocab_size = r.u32();
  for (std::uint32_t i = 0; i < vocab_size; ++i) r.str();
  r.u64();
  return r.str();
}

}  // namespace dcm
