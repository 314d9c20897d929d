#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dcm/corpus.hpp"

namespace dcm {

// Text artifacts written by the CLI share a comment convention:
//   # cfg <key>=<value>     resolved run configuration
//   # input <name>=<path> fnv1a=<hex>
//   # meta <key>=<value>    machine-read fields (vocab_hash, window, ...)
// Readers collect `meta` keys and ignore the rest.

struct PairEntry {
  std::string doc_id;
  std::size_t permutation_index = 0;
  std::uint64_t seed = 0;
};

struct PairFile {
  std::vector<PairEntry> entries;
  std::map<std::string, std::string> meta;
};

// One line per pair: <original_doc_id>\t<permutation_index>\t<seed>
void write_pairs(const std::string& path, const std::vector<PairEntry>& entries,
                 const std::vector<std::string>& header_comments = {});
PairFile read_pairs(const std::string& path);

struct DatasetFile {
  Vocabulary vocab;
  std::size_t window = 3;
  std::vector<Clique> cliques;
  std::map<std::string, std::string> meta;
};

// Self-contained training set: vocabulary section followed by labeled
// cliques (token indices, sentences separated by '|').
void write_dataset(const std::string& path, const Vocabulary& vocab, std::size_t window,
                   const std::vector<Clique>& cliques,
                   const std::vector<std::string>& header_comments = {});
DatasetFile read_dataset(const std::string& path);

}  // namespace dcm
