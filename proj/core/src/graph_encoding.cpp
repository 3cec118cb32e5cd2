#include "ocgad/graph_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "ocgad/error.hpp"

namespace ocgad {

const char* to_string(FeatureGroupKind kind) {
  switch (kind) {
    case FeatureGroupKind::kActivity: return "activity";
    case FeatureGroupKind::kCategorical: return "categorical";
    case FeatureGroupKind::kNumeric: return "numeric";
  }
  return "unknown";
}

SparseAdjacency SparseAdjacency::from_edges(std::size_t n,
                                            std::vector<Edge> edges) {
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n) {
      throw Error(Errc::kIndexOutOfRange,
                  "edge (" + std::to_string(e.from) + ", " +
                      std::to_string(e.to) + ") outside " + std::to_string(n) +
                      " nodes");
    }
    if (e.from == e.to) {
      throw Error(Errc::kSelfLoop, "diagonal entry " + std::to_string(e.from));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  SparseAdjacency a;
  a.n_ = n;
  a.row_ptr_.assign(n + 1, 0);
  a.col_idx_.reserve(edges.size());
  for (const Edge& e : edges) {
    ++a.row_ptr_[e.from + 1];
    a.col_idx_.push_back(e.to);
  }
  for (std::size_t r = 0; r < n; ++r) a.row_ptr_[r + 1] += a.row_ptr_[r];
  return a;
}

bool SparseAdjacency::contains(std::size_t row, std::size_t col) const {
  if (row >= n_) return false;
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  return std::binary_search(first, last, col);
}

std::vector<Edge> SparseAdjacency::entries() const {
  std::vector<Edge> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back({r, col_idx_[k]});
    }
  }
  return out;
}

NormalizedAdjacency::NormalizedAdjacency(std::size_t n,
                                         std::vector<std::size_t> row_ptr,
                                         std::vector<std::size_t> col_idx,
                                         std::vector<double> values)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != n_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != col_idx_.size()) {
    throw Error(Errc::kDimensionMismatch, "inconsistent CSR arrays");
  }
}

double NormalizedAdjacency::at(std::size_t row, std::size_t col) const {
  if (row >= n_) return 0.0;
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

SparseAdjacency build_adjacency(const ProcessInstanceSet& set, std::size_t n) {
  std::vector<Edge> edges;
  for (const ProcessInstance& inst : set.instances) {
    for (std::size_t v : inst.node_indices) {
      if (v >= n) {
        throw Error(Errc::kIndexOutOfRange,
                    "instance node " + std::to_string(v) + " >= " +
                        std::to_string(n));
      }
    }
    edges.insert(edges.end(), inst.edges.begin(), inst.edges.end());
  }
  return SparseAdjacency::from_edges(n, std::move(edges));
}

NormalizedAdjacency normalize_adjacency(const SparseAdjacency& a) {
  const std::size_t n = a.n();
  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t u = 0; u < n; ++u) neighbours[u].push_back(u);
  for (const Edge& e : a.entries()) {
    neighbours[e.from].push_back(e.to);
    neighbours[e.to].push_back(e.from);
  }
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto& nb = neighbours[u];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    inv_sqrt_degree[u] = 1.0 / std::sqrt(static_cast<double>(nb.size()));
  }

  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : neighbours[u]) {
      col_idx.push_back(v);
      values.push_back(inv_sqrt_degree[u] * inv_sqrt_degree[v]);
    }
    row_ptr[u + 1] = col_idx.size();
  }
  return NormalizedAdjacency(n, std::move(row_ptr), std::move(col_idx),
                             std::move(values));
}

FeatureLayout build_layout(const ObjectCentricLog& log) {
  FeatureLayout layout;
  std::size_t column = 0;

  FeatureGroup activity;
  activity.name = "activity";
  activity.kind = FeatureGroupKind::kActivity;
  std::set<std::string> activities = log.activities;
  for (const Event& ev : log.events) activities.insert(ev.activity);
  activity.vocabulary.assign(activities.begin(), activities.end());
  activity.begin = column;
  column += activity.vocabulary.size();
  activity.end = column;
  layout.groups.push_back(std::move(activity));

  std::map<std::string, std::set<std::string>> categorical_values;
  std::map<std::string, std::pair<double, double>> numeric_range;
  for (const auto& [name, kind] : log.schema) {
    if (kind == AttributeKind::kCategorical) {
      categorical_values[name];
    } else {
      numeric_range[name];
    }
  }
  std::map<std::string, bool> seen_numeric;
  for (const Event& ev : log.events) {
    for (const auto& [name, value] : ev.attributes) {
      if (value.is_numeric()) {
        auto it = numeric_range.find(name);
        if (it == numeric_range.end()) continue;
        const double x = value.as_number();
        if (!seen_numeric[name]) {
          it->second = {x, x};
          seen_numeric[name] = true;
        } else {
          it->second.first = std::min(it->second.first, x);
          it->second.second = std::max(it->second.second, x);
        }
      } else {
        auto it = categorical_values.find(name);
        if (it != categorical_values.end()) it->second.insert(value.as_text());
      }
    }
  }

  for (const auto& [name, values] : categorical_values) {
    FeatureGroup g;
    g.name = name;
    g.kind = FeatureGroupKind::kCategorical;
    g.vocabulary.assign(values.begin(), values.end());
    g.vocabulary.emplace_back(kMissingValue);
    g.begin = column;
    column += g.vocabulary.size();
    g.end = column;
    layout.groups.push_back(std::move(g));
  }
  for (const auto& [name, range] : numeric_range) {
    FeatureGroup g;
    g.name = name;
    g.kind = FeatureGroupKind::kNumeric;
    g.begin = column;
    g.end = ++column;
    g.min = range.first;
    g.max = range.second;
    layout.groups.push_back(std::move(g));
  }
  return layout;
}

namespace {

std::size_t one_hot_column(const FeatureGroup& g, const std::string& value,
                           const std::string& event_id) {
  // The missing column sits last and is excluded from the sorted search.
  const std::size_t sorted_len = g.kind == FeatureGroupKind::kCategorical
                                     ? g.vocabulary.size() - 1
                                     : g.vocabulary.size();
  auto first = g.vocabulary.begin();
  auto last = first + static_cast<std::ptrdiff_t>(sorted_len);
  auto it = std::lower_bound(first, last, value);
  if (it == last || *it != value) {
    throw Error(Errc::kUnknownCategoricalValue,
                "event '" + event_id + "': value '" + value +
                    "' not in layout group '" + g.name + "'");
  }
  return g.begin + static_cast<std::size_t>(it - first);
}

}  // namespace

DenseMatrix encode_features(const ObjectCentricLog& log,
                            const FeatureLayout& layout, bool scale_numeric) {
  const std::size_t n = log.events.size();
  DenseMatrix x(n, layout.width());
  for (std::size_t u = 0; u < n; ++u) {
    const Event& ev = log.events[u];
    for (const FeatureGroup& g : layout.groups) {
      switch (g.kind) {
        case FeatureGroupKind::kActivity:
          x(u, one_hot_column(g, ev.activity, ev.id)) = 1.0;
          break;
        case FeatureGroupKind::kCategorical: {
          auto it = ev.attributes.find(g.name);
          if (it == ev.attributes.end() || it->second.is_numeric()) {
            x(u, g.end - 1) = 1.0;
          } else {
            x(u, one_hot_column(g, it->second.as_text(), ev.id)) = 1.0;
          }
          break;
        }
        case FeatureGroupKind::kNumeric: {
          auto it = ev.attributes.find(g.name);
          if (it == ev.attributes.end() || !it->second.is_numeric()) break;
          double value = it->second.as_number();
          if (scale_numeric) {
            const double span = g.max - g.min;
            value = span > 0.0 ? std::clamp((value - g.min) / span, 0.0, 1.0)
                               : 0.0;
          }
          x(u, g.begin) = value;
          break;
        }
      }
    }
  }
  return x;
}

EncodedGraph encode_graph(const ObjectCentricLog& log, bool scale_numeric) {
  return encode_graph(log, build_layout(log), scale_numeric);
}

EncodedGraph encode_graph(const ObjectCentricLog& log, FeatureLayout layout,
                          bool scale_numeric) {
  EncodedGraph g;
  const std::size_t n = log.events.size();
  g.adjacency = build_adjacency(build_instances(log), n);
  g.normalized = normalize_adjacency(g.adjacency);
  g.features = encode_features(log, layout, scale_numeric);
  g.layout = std::move(layout);
  g.event_ids.reserve(n);
  for (const Event& ev : log.events) g.event_ids.push_back(ev.id);
  return g;
}

std::vector<std::string> FeatureLayout::column_names() const {
  std::vector<std::string> names;
  names.reserve(width());
  for (const FeatureGroup& g : groups) {
    if (g.kind == FeatureGroupKind::kNumeric) {
      names.push_back(g.name);
    } else {
      for (const std::string& v : g.vocabulary) names.push_back(g.name + "=" + v);
    }
  }
  return names;
}

std::string FeatureLayout::to_json() const {
  nlohmann::ordered_json groups_json = nlohmann::ordered_json::array();
  for (const FeatureGroup& g : groups) {
    nlohmann::ordered_json item;
    item["name"] = g.name;
    item["kind"] = to_string(g.kind);
    item["begin"] = g.begin;
    item["end"] = g.end;
    if (g.kind == FeatureGroupKind::kNumeric) {
      item["min"] = g.min;
      item["max"] = g.max;
    } else {
      item["vocabulary"] = g.vocabulary;
    }
    groups_json.push_back(std::move(item));
  }
  nlohmann::ordered_json doc;
  doc["width"] = width();
  doc["groups"] = std::move(groups_json);
  return doc.dump(1) + "\n";
}

FeatureLayout FeatureLayout::from_json(std::string_view text) {
  FeatureLayout layout;
  try {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    std::size_t expected_begin = 0;
    for (const auto& item : doc.at("groups")) {
      FeatureGroup g;
      g.name = item.at("name").get<std::string>();
      const auto kind = item.at("kind").get<std::string>();
      if (kind == "activity") {
        g.kind = FeatureGroupKind::kActivity;
      } else if (kind == "categorical") {
        g.kind = FeatureGroupKind::kCategorical;
      } else if (kind == "numeric") {
        g.kind = FeatureGroupKind::kNumeric;
      } else {
        throw Error(Errc::kMalformedDocument, "unknown group kind " + kind);
      }
      g.begin = item.at("begin").get<std::size_t>();
      g.end = item.at("end").get<std::size_t>();
      if (g.kind == FeatureGroupKind::kNumeric) {
        g.min = item.at("min").get<double>();
        g.max = item.at("max").get<double>();
      } else {
        g.vocabulary = item.at("vocabulary").get<std::vector<std::string>>();
      }
      const std::size_t expected_width =
          g.kind == FeatureGroupKind::kNumeric ? 1 : g.vocabulary.size();
      if (g.begin != expected_begin || g.end < g.begin ||
          g.width() != expected_width) {
        throw Error(Errc::kMalformedDocument,
                    "group '" + g.name + "' has inconsistent column range");
      }
      const std::size_t sorted_len =
          g.kind == FeatureGroupKind::kCategorical && !g.vocabulary.empty()
              ? g.vocabulary.size() - 1
              : g.vocabulary.size();
      if (!std::is_sorted(g.vocabulary.begin(),
                          g.vocabulary.begin() +
                              static_cast<std::ptrdiff_t>(sorted_len))) {
        throw Error(Errc::kMalformedDocument,
                    "group '" + g.name + "' vocabulary is not sorted");
      }
      expected_begin = g.end;
      layout.groups.push_back(std::move(g));
    }
    if (doc.at("width").get<std::size_t>() != layout.width()) {
      throw Error(Errc::kMalformedDocument, "layout width mismatch");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kMalformedDocument, std::string("layout: ") + e.what());
  }
  return layout;
}

std::uint64_t FeatureLayout::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_feature_csv(std::ostream& out, const EncodedGraph& graph) {
  out << "event_id";
  for (const std::string& name : graph.layout.column_names()) out << ',' << name;
  out << '\n';
  const auto precision = out.precision(17);
  for (std::size_t u = 0; u < graph.features.rows(); ++u) {
    out << graph.event_ids[u];
    for (double v : graph.features.row(u)) out << ',' << v;
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace ocgad
