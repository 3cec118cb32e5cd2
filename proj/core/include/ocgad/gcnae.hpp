#pragma once

// Graph convolutional autoencoder over the encoded event graph:
//
//   Z    = ReLU(Ã · ReLU(Ã · X · W0) · W1)
//   X̂    = ReLU(Ã · Z · W2)
//
// trained full-batch with Adam on the mean row-wise squared reconstruction
// error. Gradients are derived by hand.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ocgad/graph_encoding.hpp"
#include "ocgad/numerics.hpp"

namespace ocgad {

struct GcnaeModel {
  DenseMatrix w0;  // k × h1
  DenseMatrix w1;  // h1 × h2
  DenseMatrix w2;  // h2 × k

  std::size_t input_width() const { return w0.rows(); }

  // Glorot-uniform draws for w0, w1, w2 in that order.
  static GcnaeModel initialize(std::size_t input_width, std::size_t hidden1,
                               std::size_t hidden2, Rng& rng);

  // Throws Error(kDimensionMismatch) unless k → h1 → h2 → k chains.
  void check_shapes() const;

  bool operator==(const GcnaeModel&) const = default;
};

struct TrainConfig {
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 32;
  double learning_rate = 0.005;
  std::size_t epochs = 300;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct TrainReport {
  std::vector<double> loss_per_epoch;
  GcnaeModel model;
};

// Intermediates kept for the backward pass. p* are pre-activations.
struct ForwardCache {
  DenseMatrix ax;    // Ã X
  DenseMatrix p0;    // Ã X W0
  DenseMatrix h1;    // ReLU(p0)
  DenseMatrix ah1;   // Ã h1
  DenseMatrix p1;    // Ã h1 W1
  DenseMatrix z;     // ReLU(p1)
  DenseMatrix az;    // Ã Z
  DenseMatrix p2;    // Ã Z W2
  DenseMatrix xhat;  // ReLU(p2)
};

struct Gradients {
  DenseMatrix w0;
  DenseMatrix w1;
  DenseMatrix w2;
};

ForwardCache forward(const NormalizedAdjacency& a, const DenseMatrix& x,
                     const GcnaeModel& m);
ForwardCache forward(const EncodedGraph& g, const GcnaeModel& m);

// (1/n) Σ_u (1/k) Σ_j (X[u,j] − X̂[u,j])²; 0 for an empty matrix.
double reconstruction_loss(const DenseMatrix& x, const DenseMatrix& xhat);

// Exact gradients of reconstruction_loss. Relies on Ã being symmetric.
Gradients backward(const NormalizedAdjacency& a, const DenseMatrix& x,
                   const GcnaeModel& m, const ForwardCache& cache);
Gradients backward(const EncodedGraph& g, const GcnaeModel& m,
                   const ForwardCache& cache);

// Throws Error(kNonFiniteLoss) naming the epoch where the loss diverged.
TrainReport train(const EncodedGraph& g, const TrainConfig& cfg);

// Per event: squared error averaged inside each layout group, then averaged
// over groups with equal weight.
std::vector<double> score_events(const DenseMatrix& x, const DenseMatrix& xhat,
                                 const FeatureLayout& layout);

std::string model_to_json(const GcnaeModel& m, std::uint64_t layout_checksum);
// Throws Error(kChecksumMismatch) when the stored checksum differs from
// `expected_layout_checksum`.
GcnaeModel model_from_json(std::string_view text,
                           std::uint64_t expected_layout_checksum);

void save_model(const std::filesystem::path& path, const GcnaeModel& m,
                const FeatureLayout& layout);
GcnaeModel load_model(const std::filesystem::path& path,
                      const FeatureLayout& layout);

}  // namespace ocgad
