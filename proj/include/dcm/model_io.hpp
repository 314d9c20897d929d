#pragma once

#include <string>

#include "dcm/model.hpp"

namespace dcm {

// Versioned binary model format, bit-exact across save/load round trips.
//
//   magic   4 bytes "DCMF"
//   u32     format version (currently 1)
//   u32 x5  d, m, n, h_dim, window
//   u32     |V|, then |V| strings (u32 byte length + UTF-8 bytes)
//   u64     vocabulary hash (FNV-1a over the word list)
//   u32     provenance length + UTF-8 bytes (resolved run config; may be empty)
//   f64 LE  arrays, row-major, in block order:
//           W, F_f, b_f, F_s, b_s, F_t, b_t, M1, M2, Wh, bh, Ws, bs
//
// All integers are little-endian. Loading rejects: bad magic (FormatError),
// unknown version (VersionError), short files (TruncatedError), inconsistent
// header dimensions (ShapeError), and trailing bytes (FormatError).

void save_model(const ModelParams& params, const std::string& path,
                const std::string& provenance = {});

ModelParams load_model(const std::string& path);

// Provenance string stored in the file, without loading the arrays.
std::string read_model_provenance(const std::string& path);

}  // namespace dcm
