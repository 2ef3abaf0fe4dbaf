#pragma once

// On-disk formats.
//
// Model spec (JSON, format_version 1). Numbers are written with 17
// significant digits so every double survives a save/load cycle, and the
// writer always emits the same layout, so save(load(f)) == f for files it
// produced. Unknown keys are rejected.
//
// Dataset (CSV): header
//   transparency,legitimacy,independence,quality,costs,impartiality,acceptance
// followed by one numeric row per sample.

#include <filesystem>
#include <string>
#include <string_view>

#include "acceptance/network.hpp"
#include "acceptance/training.hpp"

namespace acceptance {

inline constexpr int kModelFormatVersion = 1;

/// %.17g rendering used by every writer in the project.
std::string format_double(double value);

/// Throws Error(parse) on malformed JSON or schema violations and
/// Error(shape | invalid_value) when the decoded spec is invalid.
NetworkSpec parse_model_json(std::string_view text);
std::string to_model_json(const NetworkSpec& spec);

NetworkSpec load_model(const std::filesystem::path& path);
void save_model(const NetworkSpec& spec, const std::filesystem::path& path);

/// Feature ranges are the observed per-column min/max. Throws Error(parse).
Dataset parse_dataset_csv(std::string_view text);
std::string to_dataset_csv(const Dataset& dataset);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Whole-file read; throws Error(parse) if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace acceptance
