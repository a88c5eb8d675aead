#include "ploco/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include "ploco/error.hpp"

namespace ploco::nn {
namespace {

constexpr char kMagic[8] = {'P', 'L', 'O', 'C', 'O', 'C', 'K', 'P'};

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw FormatError("checkpoint: truncated");
  return value;
}

std::filesystem::path manifest_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

}  // namespace

void write_tensors(std::ostream& out, const std::vector<NamedTensor>& tensors) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.value.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t.value.cols()));
    for (Index r = 0; r < t.value.rows(); ++r) {
      for (Index c = 0; c < t.value.cols(); ++c) put<double>(out, t.value(r, c));
    }
  }
  if (!out) throw FormatError("checkpoint: write failed");
}

std::vector<NamedTensor> read_tensors(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError("checkpoint: bad magic");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) throw FormatError("checkpoint: unsupported version " + std::to_string(version));
  const auto count = get<std::uint32_t>(in);
  std::vector<NamedTensor> tensors;
  tensors.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    NamedTensor t;
    t.name.resize(get<std::uint32_t>(in));
    if (!in.read(t.name.data(), static_cast<std::streamsize>(t.name.size())))
      throw FormatError("checkpoint: truncated name");
    if (get<std::uint32_t>(in) != 2) throw FormatError("checkpoint: only rank-2 tensors are supported");
    const auto rows = static_cast<Index>(get<std::uint64_t>(in));
    const auto cols = static_cast<Index>(get<std::uint64_t>(in));
    t.value.resize(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) t.value(r, c) = get<double>(in);
    }
    tensors.push_back(std::move(t));
  }
  return tensors;
}

void save_checkpoint(const std::filesystem::path& path, const ParameterList& params,
                     const nlohmann::json& metadata) {
  std::vector<NamedTensor> tensors;
  nlohmann::json manifest;
  manifest["format"] = "ploco-checkpoint";
  manifest["version"] = kCheckpointVersion;
  manifest["tensors"] = nlohmann::json::array();
  for (const Parameter* p : params) {
    tensors.push_back({p->name, p->value});
    manifest["tensors"].push_back({{"name", p->name}, {"shape", {p->value.rows(), p->value.cols()}}});
  }
  manifest["metadata"] = metadata;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string());
  write_tensors(out, tensors);
  std::ofstream mout(manifest_path(path));
  mout << manifest.dump(2) << '\n';
}

void load_checkpoint(const std::filesystem::path& path, const ParameterList& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::map<std::string, Matrix> by_name;
  for (auto& t : read_tensors(in)) by_name.emplace(std::move(t.name), std::move(t.value));
  for (Parameter* p : params) {
    const auto it = by_name.find(p->name);
    if (it == by_name.end()) throw FormatError("checkpoint: missing tensor " + p->name);
    if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols())
      throw FormatError("checkpoint: shape mismatch for " + p->name);
    p->value = it->second;
  }
}

nlohmann::json read_manifest(const std::filesystem::path& checkpoint_path) {
  std::ifstream in(manifest_path(checkpoint_path));
  if (!in) throw FormatError("cannot open manifest for " + checkpoint_path.string());
  return nlohmann::json::parse(in);
}

}  // namespace ploco::nn
