#pragma once

// Dense/sparse linear algebra, activations, initialisation and Adam. Every
// routine here is single-threaded and deterministic.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace ocgad {

// Row-major matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Borrowed compressed-row matrix. An empty `values` span means every stored
// entry equals 1 (a pure sparsity pattern).
struct CsrView {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<const std::size_t> row_ptr;  // rows + 1 offsets
  std::span<const std::size_t> col_idx;
  std::span<const double> values;

  double value_at(std::size_t k) const { return values.empty() ? 1.0 : values[k]; }
};

DenseMatrix spmm(const CsrView& s, const DenseMatrix& d);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// aᵀ·b without materialising the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a·bᵀ without materialising the transpose.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);

DenseMatrix relu(const DenseMatrix& d);
// Passes `upstream` where `pre_activation` > 0, zero elsewhere (including 0).
DenseMatrix relu_backward(const DenseMatrix& upstream,
                          const DenseMatrix& pre_activation);

// MT19937-64 with platform-independent real and integer draws (the standard
// library distributions are implementation-defined, so they are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n);
  double exponential(double mean);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// Uniform on ±sqrt(6 / (rows + cols)).
DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);

struct AdamConfig {
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  DenseMatrix first_moment;
  DenseMatrix second_moment;
  std::uint64_t step = 0;

  static AdamState for_shape(std::size_t rows, std::size_t cols,
                             const AdamConfig& config);
};

// In-place bias-corrected Adam update; increments `state.step`.
void adam_step(DenseMatrix& params, const DenseMatrix& grads, AdamState& state);

}  // namespace ocgad
