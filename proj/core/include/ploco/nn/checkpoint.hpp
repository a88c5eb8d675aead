#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ploco/nn/layers.hpp"

namespace ploco::nn {

// Binary layout (little-endian):
//   "PLOCOCKP"  8-byte magic
//   u32         format version (1)
//   u32         tensor count
//   per tensor: u32 name length, name bytes, u32 rank (2), u64 rows, u64 cols,
//               rows*cols f64 values in row-major order
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Matrix value;
};

void write_tensors(std::ostream& out, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_tensors(std::istream& in);

/// Writes `path` and a JSON manifest at `path` + ".json" listing names,
/// shapes and the caller's metadata.
void save_checkpoint(const std::filesystem::path& path, const ParameterList& params,
                     const nlohmann::json& metadata = nlohmann::json::object());

/// Loads tensors into `params` by name. Throws FormatError on missing names
/// or shape mismatches.
void load_checkpoint(const std::filesystem::path& path, const ParameterList& params);

nlohmann::json read_manifest(const std::filesystem::path& checkpoint_path);

}  // namespace ploco::nn
