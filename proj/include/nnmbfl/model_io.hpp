#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nnmbfl/dataset.hpp"
#include "nnmbfl/model.hpp"

namespace nnmbfl {

inline constexpr int kFormatVersion = 1;

/// Reads a model file. Throws ParseError (not JSON), SchemaError (unknown
/// layer kind, bad field, inconsistent weight dimensions), ShapeError
/// (layers do not chain) or IoError. Messages start with `source`.
SequentialModel load_model(const std::filesystem::path& path);
SequentialModel parse_model(std::string_view text, std::string_view source = "<memory>");

/// Canonical text: fixed key order, 17 significant digits, so that
/// save(load(save(m))) is byte-identical to save(m).
std::string serialize_model(const SequentialModel& model);
void save_model(const SequentialModel& model, const std::filesystem::path& path);

/// Reads a dataset file. Point i of the file becomes test id i + 1.
Dataset load_dataset(const std::filesystem::path& path);
Dataset parse_dataset(std::string_view text, std::string_view source = "<memory>");

std::string serialize_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Writes atomically enough for our purposes: truncate, write, check.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nnmbfl
