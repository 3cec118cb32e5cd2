#include "ocgad/instance_graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "ocgad/error.hpp"

namespace ocgad {

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  std::size_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const std::size_t next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  return true;
}

TraceMap build_traces(const ObjectCentricLog& log) {
  TraceMap traces;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    for (const std::string& obj : log.events[i].object_refs) {
      Trace& t = traces[obj];
      t.object_id = obj;
      t.event_indices.push_back(i);
    }
  }
  const auto& events = log.events;
  for (auto& [obj, trace] : traces) {
    std::sort(trace.event_indices.begin(), trace.event_indices.end(),
              [&](std::size_t a, std::size_t b) {
                if (events[a].timestamp != events[b].timestamp) {
                  return events[a].timestamp < events[b].timestamp;
                }
                if (events[a].id != events[b].id) {
                  return events[a].id < events[b].id;
                }
                return a < b;
              });
  }
  return traces;
}

std::vector<Edge> build_edges(const TraceMap& traces) {
  std::vector<Edge> edges;
  for (const auto& [obj, trace] : traces) {
    const auto& idx = trace.event_indices;
    for (std::size_t i = 1; i < idx.size(); ++i) {
      edges.push_back({idx[i - 1], idx[i]});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

ProcessInstanceSet build_instances(const ObjectCentricLog& log) {
  return build_instances(log.events.size(), build_edges(build_traces(log)));
}

ProcessInstanceSet build_instances(std::size_t n_events,
                                   const std::vector<Edge>& edges) {
  UnionFind uf(n_events);
  for (const Edge& e : edges) {
    if (e.from >= n_events || e.to >= n_events) {
      throw Error(Errc::kIndexOutOfRange, "edge endpoint beyond event count");
    }
    if (e.from == e.to) {
      throw Error(Errc::kSelfLoop, "self-edge on event index " +
                                       std::to_string(e.from));
    }
    uf.unite(e.from, e.to);
  }

  // Instances numbered by first appearance of their root in index order.
  constexpr auto kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot_of_root(n_events, kUnassigned);
  ProcessInstanceSet set;
  std::vector<std::size_t> slot_of_node(n_events);
  for (std::size_t i = 0; i < n_events; ++i) {
    const std::size_t root = uf.find(i);
    if (slot_of_root[root] == kUnassigned) {
      slot_of_root[root] = set.instances.size();
      set.instances.emplace_back();
    }
    slot_of_node[i] = slot_of_root[root];
    set.instances[slot_of_node[i]].node_indices.push_back(i);
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const Edge& e : sorted) {
    set.instances[slot_of_node[e.from]].edges.push_back(e);
  }
  return set;
}

InstanceStats instance_stats(const ProcessInstanceSet& set) {
  InstanceStats stats;
  stats.count = set.instances.size();
  if (stats.count == 0) return stats;
  std::size_t lo = set.instances.front().node_indices.size();
  std::size_t hi = lo;
  std::size_t total = 0;
  for (const ProcessInstance& p : set.instances) {
    const std::size_t n = p.node_indices.size();
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    total += n;
  }
  stats.min_events = lo;
  stats.max_events = hi;
  stats.mean_events = static_cast<double>(total) / static_cast<double>(stats.count);
  return stats;
}

void write_dot(std::ostream& out, const ObjectCentricLog& log,
               const ProcessInstanceSet& set) {
  out << "digraph instances {\n  rankdir=LR;\n";
  for (std::size_t p = 0; p < set.instances.size(); ++p) {
    const ProcessInstance& inst = set.instances[p];
    out << "  subgraph cluster_" << p << " {\n    label=\"P" << p + 1 << "\";\n";
    for (std::size_t v : inst.node_indices) {
      const Event& ev = log.events[v];
      out << "    n" << v << " [label=\"" << ev.id << "\\n" << ev.activity
          << "\"];\n";
    }
    for (const Edge& e : inst.edges) {
      out << "    n" << e.from << " -> n" << e.to << ";\n";
    }
    out << "  }\n";
  }
  out << "}\n";
}

void write_edge_list(std::ostream& out, const ObjectCentricLog& log,
                     const ProcessInstanceSet& set) {
  for (const ProcessInstance& inst : set.instances) {
    for (const Edge& e : inst.edges) {
      out << log.events[e.from].id << '\t' << log.events[e.to].id << '\n';
    }
  }
}

}  // namespace ocgad
