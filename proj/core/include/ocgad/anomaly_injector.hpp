#pragma once

// Benchmark contamination: attribute swaps, timestamp shifts and events with
// unseen activities, injected in equal parts into a clean log.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ocgad/numerics.hpp"
#include "ocgad/ocel.hpp"
#include "ocgad/scoring_eval.hpp"

namespace ocgad {

struct InjectionCounts {
  std::size_t attr_swap = 0;
  std::size_t timestamp_shift = 0;
  std::size_t random_activity = 0;

  std::size_t total() const { return attr_swap + timestamp_shift + random_activity; }
  bool operator==(const InjectionCounts&) const = default;
};

struct InjectionPlan {
  double rate = 0.10;
  InjectionCounts counts;
  std::uint64_t seed = 0;
  // 0 scans every event for the attribute-swap partner; otherwise a seeded
  // sample of this many events is scanned.
  std::size_t swap_subsample = 0;
};

// Per-type count c = round(rate · n / (3 − rate)): three types of c events
// each, and only random activities add events, so 3c / (n + c) ≈ rate.
// Throws Error(kInvalidRate) unless 0 ≤ rate < 1, and for rate > 0 on fewer
// than 30 events.
InjectionPlan plan_injection(std::size_t n_original, double rate,
                             std::uint64_t seed);

struct GroundTruth {
  // One entry per event of the contaminated log, in log order.
  std::vector<std::pair<std::string, AnomalyType>> labels;

  std::map<std::string, AnomalyType> as_map() const;
  std::size_t count(AnomalyType type) const;
};

void write_truth_csv(std::ostream& out, const GroundTruth& truth);
GroundTruth read_truth_csv(std::istream& in);
GroundTruth read_truth_file(const std::filesystem::path& path);

// Encoded attribute vectors (categorical one-hots + min-max scaled numerics,
// activity excluded), one row per event.
DenseMatrix attribute_space(const ObjectCentricLog& log);

// Event j ≠ target maximising ‖x_target − x_j‖; ties go to the smallest
// event id. Returns nullopt when the maximum distance is 0. With
// `subsample` > 0 only that many randomly drawn events are considered.
std::optional<std::size_t> choose_swap_partner(const DenseMatrix& space,
                                               const ObjectCentricLog& log,
                                               std::size_t target, Rng& rng,
                                               std::size_t subsample = 0);

// Replaces the target's attribute map with that of its swap partner. Returns
// the partner, or nullopt (log untouched) when every candidate has identical
// attributes. Throws Error(kNoAttributes) when the log has no attributes.
std::optional<std::size_t> inject_attribute_swap(ObjectCentricLog& log,
                                                 std::size_t target, Rng& rng,
                                                 std::size_t subsample = 0);

using ObjectIndex = std::unordered_map<std::string, std::vector<std::size_t>>;
ObjectIndex events_by_object(const ObjectCentricLog& log);

// Moves the target's timestamp to a uniform draw over the time frame of the
// other events sharing an object with it, widened by 5% of its span on each
// side. Returns false (log untouched) if ten draws all hit the old value.
// Throws Error(kDegenerateSpan) when that frame has zero length.
bool inject_timestamp_shift(ObjectCentricLog& log, std::size_t target,
                            Rng& rng);
bool inject_timestamp_shift(ObjectCentricLog& log, std::size_t target,
                            Rng& rng, const ObjectIndex& by_object);

struct InjectedEvent {
  std::string event_id;
  std::string activity;
  std::size_t anchor = 0;
};

// Appends an event whose `<anomalous_act_m>` activity is absent from `log`, the objects of
// a uniformly drawn anchor, a timestamp within the anchor's related time
// frame and the attributes of a uniformly drawn related event.
InjectedEvent inject_random_activity(ObjectCentricLog& log, Rng& rng);

// Applies attribute swaps, timestamp shifts and random activities in that
// order to a copy of `log`, each original event targeted at most once.
// Throws Error(kInsufficientCandidates) if a type cannot be filled.
std::pair<ObjectCentricLog, GroundTruth> inject_all(const ObjectCentricLog& log,
                                                    const InjectionPlan& plan);

}  // namespace ocgad
