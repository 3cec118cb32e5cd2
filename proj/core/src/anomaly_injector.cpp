#include "ocgad/anomaly_injector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "ocgad/error.hpp"
#include "ocgad/graph_encoding.hpp"

namespace ocgad {
namespace {

constexpr int kMaxShiftDraws = 10;
constexpr double kFrameMargin = 0.05;

// Time frame of the events sharing an object with `target` (optionally
// including the target itself).
std::optional<std::pair<std::int64_t, std::int64_t>> related_frame(
    const ObjectCentricLog& log, std::size_t target, const ObjectIndex& by_object,
    bool include_target) {
  std::optional<std::pair<std::int64_t, std::int64_t>> frame;
  for (const std::string& obj : log.events[target].object_refs) {
    auto it = by_object.find(obj);
    if (it == by_object.end()) continue;
    for (std::size_t j : it->second) {
      if (j == target && !include_target) continue;
      const std::int64_t t = log.events[j].timestamp.millis_since_epoch;
      if (!frame) {
        frame.emplace(t, t);
      } else {
        frame->first = std::min(frame->first, t);
        frame->second = std::max(frame->second, t);
      }
    }
  }
  return frame;
}

std::vector<std::size_t> related_events(const ObjectCentricLog& log,
                                        std::size_t anchor,
                                        const ObjectIndex& by_object) {
  std::vector<std::size_t> out;
  for (const std::string& obj : log.events[anchor].object_refs) {
    auto it = by_object.find(obj);
    if (it != by_object.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// One fresh activity label per injection run, chosen against the log's
// original activities; event ids are fresh per injected event.
struct FreshNames {
  std::string activity;
  std::unordered_set<std::string> ids;
  std::size_t next = 1;

  explicit FreshNames(const ObjectCentricLog& log) {
    for (std::size_t m = 1;; ++m) {
      activity = "<anomalous_act_" + std::to_string(m) + ">";
      if (!log.activities.contains(activity)) break;
    }
    for (const Event& ev : log.events) ids.insert(ev.id);
  }

  std::string take_id() {
    for (;; ++next) {
      std::string id = "anomalous_event_" + std::to_string(next);
      if (ids.insert(id).second) return id;
    }
  }
};

InjectedEvent add_random_activity(ObjectCentricLog& log, std::size_t anchor,
                                  Rng& rng, ObjectIndex& by_object,
                                  FreshNames& names) {
  const auto related = related_events(log, anchor, by_object);
  const auto frame = related_frame(log, anchor, by_object, true);
  const std::int64_t lo = frame->first;
  const std::int64_t hi = frame->second;
  const auto when = static_cast<std::int64_t>(
      std::llround(rng.uniform(static_cast<double>(lo), static_cast<double>(hi))));
  const std::size_t source = related[rng.uniform_index(related.size())];

  std::string id = names.take_id();
  std::string activity = names.activity;
  Event ev;
  ev.id = id;
  ev.activity = activity;
  ev.timestamp = Timestamp{std::clamp(when, lo, hi)};
  ev.object_refs = log.events[anchor].object_refs;
  ev.attributes = log.events[source].attributes;

  const std::size_t index = log.events.size();
  for (const std::string& obj : ev.object_refs) by_object[obj].push_back(index);
  log.activities.insert(activity);
  log.events.push_back(std::move(ev));
  return {std::move(id), std::move(activity), anchor};
}

bool shift_timestamp(ObjectCentricLog& log, std::size_t target, Rng& rng,
                     const ObjectIndex& by_object) {
  const auto frame = related_frame(log, target, by_object, false);
  if (!frame || frame->second == frame->first) {
    throw Error(Errc::kDegenerateSpan,
                "event '" + log.events[target].id + "' has no related time span");
  }
  const double lo = static_cast<double>(frame->first);
  const double hi = static_cast<double>(frame->second);
  const double margin = kFrameMargin * (hi - lo);
  const std::int64_t old = log.events[target].timestamp.millis_since_epoch;
  for (int draw = 0; draw < kMaxShiftDraws; ++draw) {
    const auto t =
        static_cast<std::int64_t>(std::llround(rng.uniform(lo - margin, hi + margin)));
    if (t != old) {
      log.events[target].timestamp = Timestamp{t};
      return true;
    }
  }
  return false;
}

}  // namespace

InjectionPlan plan_injection(std::size_t n_original, double rate,
                             std::uint64_t seed) {
  if (!std::isfinite(rate) || rate < 0.0 || rate >= 1.0) {
    throw Error(Errc::kInvalidRate, "rate must lie in [0, 1)");
  }
  if (rate > 0.0 && n_original < 30) {
    throw Error(Errc::kInvalidRate, "injection needs at least 30 events");
  }
  InjectionPlan plan;
  plan.rate = rate;
  plan.seed = seed;
  const auto c = static_cast<std::size_t>(
      std::llround(rate * static_cast<double>(n_original) / (3.0 - rate)));
  plan.counts = {c, c, c};
  return plan;
}

std::map<std::string, AnomalyType> GroundTruth::as_map() const {
  return {labels.begin(), labels.end()};
}

std::size_t GroundTruth::count(AnomalyType type) const {
  return static_cast<std::size_t>(std::count_if(
      labels.begin(), labels.end(), [type](const auto& l) { return l.second == type; }));
}

void write_truth_csv(std::ostream& out, const GroundTruth& truth) {
  out << "event_id,label\n";
  for (const auto& [id, type] : truth.labels) out << id << ',' << to_string(type) << '\n';
}

GroundTruth read_truth_csv(std::istream& in) {
  GroundTruth truth;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::kMalformedDocument, "truth CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "event_id,label") {
    throw Error(Errc::kMalformedDocument, "truth CSV header must be event_id,label");
  }
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(Errc::kMalformedDocument, "truth CSV line without comma");
    }
    std::string id = line.substr(0, comma);
    if (!seen.insert(id).second) {
      throw Error(Errc::kMalformedDocument, "duplicate truth id " + id);
    }
    truth.labels.emplace_back(std::move(id),
                              anomaly_type_from_string(line.substr(comma + 1)));
  }
  return truth;
}

GroundTruth read_truth_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  return read_truth_csv(in);
}

DenseMatrix attribute_space(const ObjectCentricLog& log) {
  FeatureLayout layout = build_layout(log);
  const DenseMatrix full = encode_features(log, layout, true);
  const std::size_t skip = layout.groups.front().width();
  DenseMatrix out(full.rows(), full.cols() - skip);
  for (std::size_t u = 0; u < full.rows(); ++u) {
    auto src = full.row(u);
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(skip), src.end(),
              out.row(u).begin());
  }
  return out;
}

std::optional<std::size_t> choose_swap_partner(const DenseMatrix& space,
                                               const ObjectCentricLog& log,
                                               std::size_t target, Rng& rng,
                                               std::size_t subsample) {
  const std::size_t n = space.rows();
  if (target >= n) throw Error(Errc::kIndexOutOfRange, "swap target");

  std::vector<std::size_t> pool;
  if (subsample > 0 && subsample < n - 1) {
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != target) others.push_back(j);
    }
    for (std::size_t i = 0; i < subsample; ++i) {
      std::swap(others[i], others[i + rng.uniform_index(others.size() - i)]);
    }
    pool.assign(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(subsample));
  } else {
    pool.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != target) pool.push_back(j);
    }
  }

  auto xi = space.row(target);
  std::optional<std::size_t> best;
  double best_d2 = 0.0;
  for (std::size_t j : pool) {
    auto xj = space.row(j);
    double d2 = 0.0;
    for (std::size_t c = 0; c < xi.size(); ++c) {
      const double d = xi[c] - xj[c];
      d2 += d * d;
    }
    if (d2 <= 0.0) continue;
    if (!best || d2 > best_d2 ||
        (d2 == best_d2 && log.events[j].id < log.events[*best].id)) {
      best = j;
      best_d2 = d2;
    }
  }
  return best;
}

std::optional<std::size_t> inject_attribute_swap(ObjectCentricLog& log,
                                                 std::size_t target, Rng& rng,
                                                 std::size_t subsample) {
  if (log.schema.empty()) {
    throw Error(Errc::kNoAttributes, "log has no attributes to swap");
  }
  if (target >= log.events.size()) {
    throw Error(Errc::kIndexOutOfRange, "swap target");
  }
  const DenseMatrix space = attribute_space(log);
  const auto partner = choose_swap_partner(space, log, target, rng, subsample);
  if (partner) log.events[target].attributes = log.events[*partner].attributes;
  return partner;
}

ObjectIndex events_by_object(const ObjectCentricLog& log) {
  ObjectIndex index;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    for (const std::string& obj : log.events[i].object_refs) index[obj].push_back(i);
  }
  return index;
}

bool inject_timestamp_shift(ObjectCentricLog& log, std::size_t target,
                            Rng& rng) {
  return inject_timestamp_shift(log, target, rng, events_by_object(log));
}

bool inject_timestamp_shift(ObjectCentricLog& log, std::size_t target,
                            Rng& rng, const ObjectIndex& by_object) {
  if (target >= log.events.size()) {
    throw Error(Errc::kIndexOutOfRange, "shift target");
  }
  return shift_timestamp(log, target, rng, by_object);
}

InjectedEvent inject_random_activity(ObjectCentricLog& log, Rng& rng) {
  if (log.events.empty()) {
    throw Error(Errc::kInvalidArgument, "cannot inject into an empty log");
  }
  ObjectIndex by_object = events_by_object(log);
  FreshNames names(log);
  const std::size_t anchor = rng.uniform_index(log.events.size());
  return add_random_activity(log, anchor, rng, by_object, names);
}

std::pair<ObjectCentricLog, GroundTruth> inject_all(const ObjectCentricLog& log,
                                                    const InjectionPlan& plan) {
  const std::size_t n = log.events.size();
  const InjectionCounts& want = plan.counts;
  ObjectCentricLog out = log;
  std::vector<AnomalyType> truth(n, AnomalyType::kNormal);
  Rng rng(plan.seed);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  auto shortfall = [](const char* type, std::size_t got, std::size_t wanted) {
    return Error(Errc::kInsufficientCandidates,
                 std::string(type) + ": only " + std::to_string(got) + " of " +
                     std::to_string(wanted) + " eligible events");
  };

  if (want.attr_swap > 0) {
    if (log.schema.empty()) throw shortfall("attr_swap", 0, want.attr_swap);
    // Distances and replacement attributes both come from the clean log.
    const DenseMatrix space = attribute_space(log);
    std::size_t done = 0;
    for (std::size_t i : order) {
      if (done == want.attr_swap) break;
      const auto partner =
          choose_swap_partner(space, log, i, rng, plan.swap_subsample);
      if (!partner) continue;
      out.events[i].attributes = log.events[*partner].attributes;
      truth[i] = AnomalyType::kAttrSwap;
      ++done;
    }
    if (done < want.attr_swap) throw shortfall("attr_swap", done, want.attr_swap);
  }

  ObjectIndex by_object = events_by_object(out);
  if (want.timestamp_shift > 0) {
    std::size_t done = 0;
    for (std::size_t i : order) {
      if (done == want.timestamp_shift) break;
      if (truth[i] != AnomalyType::kNormal) continue;
      try {
        if (!shift_timestamp(out, i, rng, by_object)) continue;
      } catch (const Error& e) {
        if (e.code() != Errc::kDegenerateSpan) throw;
        continue;
      }
      truth[i] = AnomalyType::kTimestampShift;
      ++done;
    }
    if (done < want.timestamp_shift) {
      throw shortfall("timestamp_shift", done, want.timestamp_shift);
    }
  }

  GroundTruth gt;
  gt.labels.reserve(n + want.random_activity);
  for (std::size_t i = 0; i < n; ++i) gt.labels.emplace_back(out.events[i].id, truth[i]);

  if (want.random_activity > 0) {
    if (n == 0) throw shortfall("random_activity", 0, want.random_activity);
    FreshNames names(log);
    for (std::size_t m = 0; m < want.random_activity; ++m) {
      const std::size_t anchor = rng.uniform_index(n);
      InjectedEvent injected = add_random_activity(out, anchor, rng, by_object, names);
      gt.labels.emplace_back(std::move(injected.event_id),
                             AnomalyType::kRandomActivity);
    }
  }
  return {std::move(out), std::move(gt)};
}

}  // namespace ocgad
