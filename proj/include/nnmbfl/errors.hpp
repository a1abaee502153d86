#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nnmbfl {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A layer's parameters are inconsistent with the shape flowing into it.
/// `layer_id` is 1-based; 0 means the model input itself.
class ShapeError : public Error {
 public:
  ShapeError(std::size_t layer_id, std::string reason)
      : Error(format(layer_id, reason)), layer_id_(layer_id), reason_(std::move(reason)) {}

  std::size_t layer_id() const noexcept { return layer_id_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  static std::string format(std::size_t layer_id, const std::string& reason) {
    if (layer_id == 0) return "shape error at model input: " + reason;
    return "shape error at layer " + std::to_string(layer_id) + ": " + reason;
  }

  std::size_t layer_id_;
  std::string reason_;
};

/// Malformed text (not valid JSON, truncated file, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed text that violates the file schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidFraction : public Error {
 public:
  using Error::Error;
};

}  // namespace nnmbfl
