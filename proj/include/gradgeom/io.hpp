#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gradgeom/model.hpp"

namespace gradgeom::io {

inline constexpr const char* kFormatVersion = "1";

// full 17-significant-digit serialization; round-trips doubles exactly
std::string format_double(double v);

// checkpoint = <path>.json (layer_dims, activation, K, format_version)
//            + <path>.bin  (K little-endian 64-bit floats)
void save_checkpoint(const Model& model, const std::string& path_stem);
Model load_checkpoint(const std::string& path_stem);

// CSV with header x0..x{din-1},y0..y{dout-1} (regression) or x0..,label
// (classification). Lines starting with '#' are provenance comments.
void save_dataset(const Dataset& data, const std::string& path,
                  const std::string& provenance = {});
Dataset load_dataset(const std::string& path);

// "# key = value" provenance block reproducing the invocation
std::string provenance_block(const std::vector<std::pair<std::string, std::string>>& kv);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gradgeom::io
