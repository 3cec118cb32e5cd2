#pragma once

// Encodes a log as one disconnected input graph G = (A, X).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ocgad/instance_graph.hpp"
#include "ocgad/numerics.hpp"
#include "ocgad/ocel.hpp"

namespace ocgad {

// Directed 0/1 adjacency in compressed-row layout. No duplicates, no diagonal.
class SparseAdjacency {
 public:
  SparseAdjacency() : row_ptr_(1, 0) {}

  // Throws Error(kIndexOutOfRange) or Error(kSelfLoop). Duplicates are merged.
  static SparseAdjacency from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const { return n_; }
  std::size_t nnz() const { return col_idx_.size(); }
  bool contains(std::size_t row, std::size_t col) const;
  std::vector<Edge> entries() const;
  CsrView view() const { return {n_, n_, row_ptr_, col_idx_, {}}; }

  bool operator==(const SparseAdjacency&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
};

// D^{-1/2} (S + I) D^{-1/2}, S the symmetrised adjacency, D the degree matrix
// of S + I. Symmetric, strictly positive, diagonal always present.
class NormalizedAdjacency {
 public:
  NormalizedAdjacency() : row_ptr_(1, 0) {}
  NormalizedAdjacency(std::size_t n, std::vector<std::size_t> row_ptr,
                      std::vector<std::size_t> col_idx,
                      std::vector<double> values);

  std::size_t n() const { return n_; }
  std::size_t nnz() const { return col_idx_.size(); }
  // 0 when (row, col) is not stored.
  double at(std::size_t row, std::size_t col) const;
  CsrView view() const { return {n_, n_, row_ptr_, col_idx_, values_}; }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::size_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

enum class FeatureGroupKind { kActivity, kCategorical, kNumeric };

const char* to_string(FeatureGroupKind kind);

inline constexpr std::string_view kMissingValue = "<missing>";

struct FeatureGroup {
  std::string name;
  FeatureGroupKind kind = FeatureGroupKind::kNumeric;
  std::size_t begin = 0;  // first column
  std::size_t end = 0;    // one past the last column
  // Column labels for one-hot groups, in column order. Categorical groups end
  // with kMissingValue.
  std::vector<std::string> vocabulary;
  // Observed range of a numeric group.
  double min = 0.0;
  double max = 0.0;

  std::size_t width() const { return end - begin; }
  bool operator==(const FeatureGroup&) const = default;
};

// Activity one-hot first, then categorical attributes (by name, values
// sorted, plus a missing column), then numeric attributes by name.
struct FeatureLayout {
  std::vector<FeatureGroup> groups;

  std::size_t width() const { return groups.empty() ? 0 : groups.back().end; }
  std::vector<std::string> column_names() const;

  std::string to_json() const;
  static FeatureLayout from_json(std::string_view text);
  // FNV-1a over to_json().
  std::uint64_t checksum() const;

  bool operator==(const FeatureLayout&) const = default;
};

struct EncodedGraph {
  SparseAdjacency adjacency;
  NormalizedAdjacency normalized;
  DenseMatrix features;
  FeatureLayout layout;
  std::vector<std::string> event_ids;
};

SparseAdjacency build_adjacency(const ProcessInstanceSet& set, std::size_t n);
NormalizedAdjacency normalize_adjacency(const SparseAdjacency& a);
FeatureLayout build_layout(const ObjectCentricLog& log);

// Row per event in log order. With `scale_numeric`, numeric columns are
// min-max scaled with the layout's ranges and clamped to [0, 1]; a degenerate
// range maps to 0. Missing numerics encode as 0, missing categoricals as the
// missing column. Throws Error(kUnknownCategoricalValue) for an activity or
// value the layout does not know.
DenseMatrix encode_features(const ObjectCentricLog& log,
                            const FeatureLayout& layout, bool scale_numeric);

// instances -> adjacency -> normalisation -> features, with a fresh layout.
EncodedGraph encode_graph(const ObjectCentricLog& log, bool scale_numeric = true);
// Same with a fixed layout, e.g. one stored beside a trained model.
EncodedGraph encode_graph(const ObjectCentricLog& log, FeatureLayout layout,
                          bool scale_numeric = true);

void write_feature_csv(std::ostream& out, const EncodedGraph& graph);

}  // namespace ocgad
