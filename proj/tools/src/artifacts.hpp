#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ploco::cli {

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);
std::string file_hash(const std::filesystem::path& path);

/// Writes `<stem>.manifest.json` next to the artifacts. Artifact entries hold
/// file names and content hashes only, so reruns into another directory
/// produce the same manifest.
void write_manifest(const std::filesystem::path& manifest_path, std::string_view subcommand,
                    const nlohmann::json& config, std::uint64_t seed,
                    const std::vector<std::filesystem::path>& artifacts,
                    const nlohmann::json& extra = nlohmann::json::object());

std::string config_hash(const nlohmann::json& config);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart as standalone SVG. `log_y` plots log10 of positive values.
std::string svg_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series, bool log_y);

/// Labelled vertical bars.
std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values);

}  // namespace ploco::cli
