#pragma once

// Object traces and object-centric process instances: the events of a log are
// partitioned into connected directed graphs whose edges link consecutive
// events of each object's trace.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocgad/ocel.hpp"

namespace ocgad {

struct Trace {
  std::string object_id;
  std::vector<std::size_t> event_indices;  // into ObjectCentricLog::events

  bool operator==(const Trace&) const = default;
};

// Directed edge between two event indices. Never a self-loop.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;

  auto operator<=>(const Edge&) const = default;
};

using TraceMap = std::map<std::string, Trace>;

struct ProcessInstance {
  std::vector<std::size_t> node_indices;  // ascending
  std::vector<Edge> edges;                // ascending, unique

  bool operator==(const ProcessInstance&) const = default;
};

// Instances are ordered by their smallest event index.
struct ProcessInstanceSet {
  std::vector<ProcessInstance> instances;

  bool operator==(const ProcessInstanceSet&) const = default;
};

struct InstanceStats {
  std::size_t count = 0;
  std::optional<std::size_t> min_events;
  std::optional<std::size_t> max_events;
  std::optional<double> mean_events;
};

// One trace per object that is referenced by at least one event, sorted by
// (timestamp, event id).
TraceMap build_traces(const ObjectCentricLog& log);

// Consecutive pairs of every trace, merged into one sorted edge list.
std::vector<Edge> build_edges(const TraceMap& traces);

// Connected components (undirected view) over all events of the log.
ProcessInstanceSet build_instances(const ObjectCentricLog& log);

// Same, given a precomputed edge list over `n_events` nodes. Throws
// Error(kSelfLoop) on a self-edge and Error(kIndexOutOfRange) on a bad index.
ProcessInstanceSet build_instances(std::size_t n_events,
                                   const std::vector<Edge>& edges);

InstanceStats instance_stats(const ProcessInstanceSet& set);

// Graphviz rendering, one cluster per instance, nodes labelled by event id.
void write_dot(std::ostream& out, const ObjectCentricLog& log,
               const ProcessInstanceSet& set);

// One `from_id<TAB>to_id` line per edge.
void write_edge_list(std::ostream& out, const ObjectCentricLog& log,
                     const ProcessInstanceSet& set);

// Disjoint-set forest with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace ocgad
