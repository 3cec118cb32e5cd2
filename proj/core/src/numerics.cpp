#include "ocgad/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ocgad/error.hpp"

namespace ocgad {
namespace {

void require(bool ok, const char* op, const std::string& detail) {
  if (!ok) throw Error(Errc::kDimensionMismatch, std::string(op) + ": " + detail);
}

std::string shape(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  DenseMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    require(row.size() == c, "from_rows", "ragged rows");
    std::copy(row.begin(), row.end(), m.row(i++).begin());
  }
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

DenseMatrix spmm(const CsrView& s, const DenseMatrix& d) {
  require(s.cols == d.rows(), "spmm",
          std::to_string(s.rows) + "x" + std::to_string(s.cols) + " * " +
              shape(d));
  require(s.row_ptr.size() == s.rows + 1, "spmm", "row_ptr length");
  DenseMatrix out(s.rows, d.cols());
  for (std::size_t r = 0; r < s.rows; ++r) {
    auto dst = out.row(r);
    for (std::size_t k = s.row_ptr[r]; k < s.row_ptr[r + 1]; ++k) {
      const double w = s.value_at(k);
      auto src = d.row(s.col_idx[k]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.rows(), "matmul", shape(a) + " * " + shape(b));
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto src = b.row(k);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.rows() == b.rows(), "matmul_tn", shape(a) + "ᵀ * " + shape(b));
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto arow = a.row(k);
    auto brow = b.row(k);
    for (std::size_t i = 0; i < arow.size(); ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      auto dst = out.row(i);
      for (std::size_t j = 0; j < brow.size(); ++j) dst[j] += aki * brow[j];
    }
  }
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  require(a.cols() == b.cols(), "matmul_nt", shape(a) + " * " + shape(b) + "ᵀ");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto brow = b.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < arow.size(); ++k) acc += arow[k] * brow[k];
      out(i, j) = acc;
    }
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

DenseMatrix relu(const DenseMatrix& d) {
  DenseMatrix out = d;
  for (double& x : out.data()) x = std::max(0.0, x);
  return out;
}

DenseMatrix relu_backward(const DenseMatrix& upstream,
                          const DenseMatrix& pre_activation) {
  require(upstream.rows() == pre_activation.rows() &&
              upstream.cols() == pre_activation.cols(),
          "relu_backward", shape(upstream) + " vs " + shape(pre_activation));
  DenseMatrix out = upstream;
  auto pre = pre_activation.data();
  auto g = out.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(pre[i] > 0.0)) g[i] = 0.0;
  }
  return out;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw Error(Errc::kInvalidArgument, "uniform_index(0)");
  const std::uint64_t bound = n;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

double Rng::exponential(double mean) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -mean * std::log(1.0 - uniform());
}

DenseMatrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) {
    throw Error(Errc::kInvalidArgument, "glorot_init needs positive dimensions");
  }
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix m(rows, cols);
  for (double& x : m.data()) x = rng.uniform(-limit, limit);
  return m;
}

AdamState AdamState::for_shape(std::size_t rows, std::size_t cols,
                               const AdamConfig& config) {
  return AdamState{config, DenseMatrix(rows, cols), DenseMatrix(rows, cols), 0};
}

void adam_step(DenseMatrix& params, const DenseMatrix& grads, AdamState& state) {
  require(params.rows() == grads.rows() && params.cols() == grads.cols() &&
              params.rows() == state.first_moment.rows() &&
              params.cols() == state.first_moment.cols(),
          "adam_step", shape(params) + " vs " + shape(grads));
  const AdamConfig& cfg = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  auto p = params.data();
  auto g = grads.data();
  auto m = state.first_moment.data();
  auto v = state.second_moment.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    p[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

}  // namespace ocgad
