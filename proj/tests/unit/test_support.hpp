#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nnmbfl/dataset.hpp"
#include "nnmbfl/model.hpp"

namespace nnmbfl::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(NNMBFL_FIXTURE_DIR) / name;
}

inline Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

inline Dense dense(std::size_t in, std::size_t units, std::vector<double> weights,
                   std::vector<double> bias, Activation act = Activation::linear) {
  return Dense{units, matrix(in, units, std::move(weights)), Tensor::vector(std::move(bias)), act};
}

inline Dense random_dense(std::mt19937_64& rng, std::size_t in, std::size_t units, Activation act) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(in * units), b(units);
  for (auto& v : w) v = u(rng);
  for (auto& v : b) v = u(rng);
  return dense(in, units, std::move(w), std::move(b), act);
}

/// Dense chain with random weights; `widths` includes the input width.
inline SequentialModel random_mlp(std::mt19937_64& rng, const std::vector<std::size_t>& widths,
                                  Activation hidden = Activation::relu,
                                  Activation last = Activation::softmax) {
  SequentialModel m;
  m.input_shape = {widths.front()};
  for (std::size_t i = 1; i < widths.size(); ++i)
    m.layers.push_back(random_dense(rng, widths[i - 1], widths[i], i + 1 == widths.size() ? last : hidden));
  return m;
}

inline Dataset random_classification(std::mt19937_64& rng, std::size_t points, std::size_t width,
                                     std::size_t classes) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> label(0, classes - 1);
  Dataset ds;
  ds.task = Task::classification;
  ds.num_classes = classes;
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<double> x(width);
    for (auto& v : x) v = u(rng);
    ds.points.push_back({i + 1, Tensor::vector(std::move(x)), ClassLabel{label(rng)}});
  }
  return ds;
}

/// Per-test scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("nnmbfl-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace nnmbfl::testing
