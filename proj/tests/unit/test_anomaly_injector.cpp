#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "ocgad/anomaly_injector.hpp"
#include "ocgad/error.hpp"
#include "ocgad/loggen.hpp"
#include "support.hpp"

using namespace ocgad;

namespace {

template <typename F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::kIo;
}

Event make_event(std::string id, std::string activity, std::int64_t minute,
                 std::set<std::string> objects, double size, std::string colour) {
  Event ev;
  ev.id = std::move(id);
  ev.activity = std::move(activity);
  ev.timestamp = Timestamp{minute * 60'000};
  ev.object_refs = std::move(objects);
  ev.attributes.emplace("size", AttributeValue::numeric(size));
  ev.attributes.emplace("colour", AttributeValue::categorical(std::move(colour)));
  return ev;
}

ObjectCentricLog small_log(std::vector<Event> events) {
  ObjectCentricLog log;
  log.object_types = {"A"};
  std::set<std::string> objects;
  for (const Event& ev : events) objects.insert(ev.object_refs.begin(), ev.object_refs.end());
  for (const auto& o : objects) log.objects.push_back({o, "A"});
  log.schema = {{"colour", AttributeKind::kCategorical}, {"size", AttributeKind::kNumeric}};
  log.events = std::move(events);
  refresh_activities(log);
  return log;
}

// Generated log with exactly `target` events.
ObjectCentricLog generated_log_of_size(std::size_t target) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (std::size_t orders = 420; orders <= 500; ++orders) {
      GenConfig cfg;
      cfg.n_orders = orders;
      cfg.seed = seed;
      auto log = generate(cfg);
      if (log.events.size() == target) return log;
    }
  }
  FAIL("no generated log of the requested size");
  return {};
}

}  // namespace

TEST_CASE("plan arithmetic") {
  const auto mid = plan_injection(22367, 0.10, 0);
  CHECK(mid.counts == InjectionCounts{771, 771, 771});
  CHECK(mid.counts.total() == 2313);
  CHECK(22367 + mid.counts.random_activity == 23138);

  const auto large = plan_injection(393931, 0.10, 0);
  CHECK(large.counts.attr_swap == 13584);
  CHECK(393931 + large.counts.random_activity == 407515);
  CHECK(large.counts.total() == 40752);

  const auto small = plan_injection(2000, 0.10, 7);
  CHECK(small.counts == InjectionCounts{69, 69, 69});
  CHECK(small.seed == 7);
  CHECK(small.rate == 0.10);

  CHECK(plan_injection(10, 0.0, 0).counts.total() == 0);
  CHECK(plan_injection(30, 0.05, 0).counts.total() == 3);
  CHECK(error_of([] { plan_injection(100, 1.0, 0); }) == Errc::kInvalidRate);
  CHECK(error_of([] { plan_injection(100, -0.1, 0); }) == Errc::kInvalidRate);
  CHECK(error_of([] { plan_injection(100, std::nan(""), 0); }) == Errc::kInvalidRate);
  CHECK(error_of([] { plan_injection(29, 0.1, 0); }) == Errc::kInvalidRate);
}

TEST_CASE("zero rate leaves the log untouched") {
  GenConfig cfg;
  cfg.n_orders = 20;
  const auto log = generate(cfg);
  const auto [out, truth] = inject_all(log, plan_injection(log.events.size(), 0.0, 3));
  CHECK(out == log);
  REQUIRE(truth.labels.size() == log.events.size());
  CHECK(truth.count(AnomalyType::kNormal) == log.events.size());
}

TEST_CASE("2000-event log at ten percent") {
  const auto log = generated_log_of_size(2000);
  const auto plan = plan_injection(log.events.size(), 0.10, 42);
  const auto [out, truth] = inject_all(log, plan);

  CHECK(out.events.size() == 2069);
  CHECK(truth.labels.size() == 2069);
  CHECK(truth.count(AnomalyType::kAttrSwap) == 69);
  CHECK(truth.count(AnomalyType::kTimestampShift) == 69);
  CHECK(truth.count(AnomalyType::kRandomActivity) == 69);
  CHECK(truth.count(AnomalyType::kNormal) == 2000 - 138);
  CHECK(validate_log(out).empty());

  for (std::size_t i = 0; i < out.events.size(); ++i) {
    REQUIRE(truth.labels[i].first == out.events[i].id);
  }
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const Event& before = log.events[i];
    const Event& after = out.events[i];
    CHECK(before.id == after.id);
    CHECK(before.activity == after.activity);
    CHECK(before.object_refs == after.object_refs);
    switch (truth.labels[i].second) {
      case AnomalyType::kNormal:
        CHECK(before == after);
        break;
      case AnomalyType::kAttrSwap:
        CHECK(before.timestamp == after.timestamp);
        CHECK(before.attributes != after.attributes);
        break;
      case AnomalyType::kTimestampShift:
        CHECK(before.attributes == after.attributes);
        CHECK(before.timestamp != after.timestamp);
        break;
      case AnomalyType::kRandomActivity:
        FAIL("original event labelled as random activity");
    }
  }

  const auto by_id = index_events_by_id(log);
  for (std::size_t i = log.events.size(); i < out.events.size(); ++i) {
    const Event& ev = out.events[i];
    CHECK(truth.labels[i].second == AnomalyType::kRandomActivity);
    CHECK(ev.id == "anomalous_event_" + std::to_string(i - log.events.size() + 1));
    CHECK(ev.activity == "<anomalous_act_1>");
    CHECK_FALSE(log.activities.contains(ev.activity));
    CHECK_FALSE(by_id.contains(ev.id));
  }
  CHECK(out.activities.size() == log.activities.size() + 1);
}

TEST_CASE("injection is deterministic per seed") {
  GenConfig cfg;
  cfg.n_orders = 60;
  const auto log = generate(cfg);
  const auto plan = plan_injection(log.events.size(), 0.10, 9);
  const auto a = inject_all(log, plan);
  const auto b = inject_all(log, plan);
  CHECK(a.first == b.first);
  CHECK(a.second.labels == b.second.labels);
  const auto c = inject_all(log, plan_injection(log.events.size(), 0.10, 10));
  CHECK(c.second.labels != a.second.labels);

  auto sub = plan;
  sub.swap_subsample = 16;
  const auto d = inject_all(log, sub);
  const auto e = inject_all(log, sub);
  CHECK(d.first == e.first);
  CHECK(d.second.count(AnomalyType::kAttrSwap) == plan.counts.attr_swap);
}

TEST_CASE("truth csv round trip") {
  GroundTruth truth;
  truth.labels = {{"e1", AnomalyType::kNormal},
                  {"e2", AnomalyType::kAttrSwap},
                  {"anomalous_event_1", AnomalyType::kRandomActivity},
                  {"e,3", AnomalyType::kTimestampShift}};
  std::stringstream buf;
  write_truth_csv(buf, truth);
  CHECK(buf.str().starts_with("event_id,label\ne1,normal\n"));
  const auto back = read_truth_csv(buf);
  CHECK(back.labels == truth.labels);
  CHECK(back.as_map().size() == 4);

  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_truth_csv(in);
  };
  CHECK(parse("event_id,label\r\ne1,normal\r\n\n").labels.size() == 1);
  CHECK(error_of([&] { parse(""); }) == Errc::kMalformedDocument);
  CHECK(error_of([&] { parse("id,label\n"); }) == Errc::kMalformedDocument);
  CHECK(error_of([&] { parse("event_id,label\ne1\n"); }) == Errc::kMalformedDocument);
  CHECK(error_of([&] { parse("event_id,label\ne1,odd\n"); }) == Errc::kMalformedDocument);
  CHECK(error_of([&] { parse("event_id,label\ne1,normal\ne1,normal\n"); }) ==
        Errc::kMalformedDocument);
  CHECK(error_of([] { read_truth_file("/nonexistent/truth.csv"); }) == Errc::kIo);
}

TEST_CASE("swap partner is the farthest event, smallest id on ties") {
  auto log = small_log({make_event("e1", "a", 0, {"x"}, 0.0, "red"),
                        make_event("e2", "a", 1, {"x"}, 10.0, "blue"),
                        make_event("e3", "a", 2, {"x"}, 10.0, "blue"),
                        make_event("e0", "a", 3, {"x"}, 5.0, "red")});
  Rng rng(0);
  const auto space = attribute_space(log);
  CHECK(space.cols() == 3 + 1);
  // e2 and e3 are equidistant from e1; "e2" < "e3".
  CHECK(choose_swap_partner(space, log, 0, rng) == std::optional<std::size_t>{1});
  CHECK(choose_swap_partner(space, log, 1, rng) == std::optional<std::size_t>{0});
  // From e0, e2 and e3 tie again.
  CHECK(choose_swap_partner(space, log, 3, rng) == std::optional<std::size_t>{1});

  auto swapped = log;
  CHECK(inject_attribute_swap(swapped, 0, rng) == std::optional<std::size_t>{1});
  CHECK(swapped.events[0].attributes == log.events[1].attributes);
  CHECK(error_of([&] { inject_attribute_swap(swapped, 9, rng); }) == Errc::kIndexOutOfRange);

  auto flat = small_log({make_event("e1", "a", 0, {"x"}, 1.0, "red"),
                         make_event("e2", "b", 1, {"x"}, 1.0, "red")});
  CHECK_FALSE(inject_attribute_swap(flat, 0, rng).has_value());
  auto bare = flat;
  bare.schema.clear();
  for (auto& ev : bare.events) ev.attributes.clear();
  CHECK(error_of([&] { inject_attribute_swap(bare, 0, rng); }) == Errc::kNoAttributes);
}

TEST_CASE("swap subsample only scans drawn candidates") {
  std::mt19937_64 gen(3);
  const auto log = testing::random_log(gen, 80, 10);
  const auto space = attribute_space(log);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng full_rng(seed);
    Rng sub_rng(seed);
    const auto full = choose_swap_partner(space, log, 5, full_rng);
    const auto sub = choose_swap_partner(space, log, 5, sub_rng, 1);
    REQUIRE(full.has_value());
    if (sub) CHECK(*sub != 5);
    Rng all_rng(seed);
    CHECK(choose_swap_partner(space, log, 5, all_rng, 79) == full);
  }
}

TEST_CASE("timestamp shift stays in the widened related frame") {
  auto log = small_log({make_event("e1", "a", 0, {"x"}, 0.0, "red"),
                        make_event("e2", "b", 100, {"x"}, 1.0, "red"),
                        make_event("e3", "c", 50, {"x", "y"}, 2.0, "red"),
                        make_event("e4", "d", 500, {"z"}, 3.0, "red"),
                        make_event("e5", "d", 900, {"z"}, 3.0, "red")});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto copy = log;
    Rng rng(seed);
    CHECK(inject_timestamp_shift(copy, 2, rng));
    const auto t = copy.events[2].timestamp.millis_since_epoch;
    CHECK(t != 50 * 60'000);
    CHECK(t >= -5 * 60'000);
    CHECK(t <= 105 * 60'000);
    copy.events[2].timestamp = log.events[2].timestamp;
    CHECK(copy == log);
  }
  // e1 has a single related instant, e2 a real span.
  auto lone = small_log({make_event("e1", "a", 0, {"x"}, 0.0, "red"),
                         make_event("e2", "a", 5, {"x", "y"}, 0.0, "red"),
                         make_event("e3", "a", 7, {"y"}, 0.0, "red")});
  Rng rng(0);
  CHECK(error_of([&] { inject_timestamp_shift(lone, 0, rng); }) == Errc::kDegenerateSpan);
  CHECK(inject_timestamp_shift(lone, 1, rng));
  CHECK(error_of([&] { inject_timestamp_shift(lone, 7, rng); }) == Errc::kIndexOutOfRange);
}

TEST_CASE("random activity copies anchor objects and a related event") {
  std::mt19937_64 gen(8);
  const auto log = testing::random_log(gen, 60, 8);
  const auto by_object = events_by_object(log);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto copy = log;
    Rng rng(seed);
    const auto injected = inject_random_activity(copy, rng);
    REQUIRE(copy.events.size() == log.events.size() + 1);
    const Event& ev = copy.events.back();
    const Event& anchor = log.events[injected.anchor];
    CHECK(ev.id == injected.event_id);
    CHECK(ev.activity == "<anomalous_act_1>");
    CHECK(copy.activities.contains(ev.activity));
    CHECK(ev.object_refs == anchor.object_refs);

    std::int64_t lo = anchor.timestamp.millis_since_epoch, hi = lo;
    bool attributes_found = false;
    for (const auto& obj : anchor.object_refs) {
      for (std::size_t j : by_object.at(obj)) {
        lo = std::min(lo, log.events[j].timestamp.millis_since_epoch);
        hi = std::max(hi, log.events[j].timestamp.millis_since_epoch);
        attributes_found |= log.events[j].attributes == ev.attributes;
      }
    }
    CHECK(ev.timestamp.millis_since_epoch >= lo);
    CHECK(ev.timestamp.millis_since_epoch <= hi);
    CHECK(attributes_found);
    CHECK(validate_log(copy).empty());
  }

  auto taken = log;
  taken.events[0].activity = "<anomalous_act_1>";
  taken.events[1].id = "anomalous_event_1";
  refresh_activities(taken);
  Rng rng(1);
  const auto injected = inject_random_activity(taken, rng);
  CHECK(injected.activity == "<anomalous_act_2>");
  CHECK(injected.event_id == "anomalous_event_2");

  ObjectCentricLog empty;
  CHECK(error_of([&] { inject_random_activity(empty, rng); }) == Errc::kInvalidArgument);
}

TEST_CASE("infeasible plans raise insufficient candidates") {
  std::vector<Event> events;
  for (int i = 0; i < 40; ++i) {
    events.push_back(make_event("e" + std::to_string(i), "a", i, {"x"}, 1.0, "red"));
  }
  const auto flat = small_log(events);
  const auto plan = plan_injection(flat.events.size(), 0.2, 0);
  CHECK(error_of([&] { inject_all(flat, plan); }) == Errc::kInsufficientCandidates);

  // Every object has one event, so no timestamp frame exists.
  std::vector<Event> isolated;
  for (int i = 0; i < 40; ++i) {
    isolated.push_back(make_event("e" + std::to_string(i), "a", i,
                                  {"o" + std::to_string(i)}, i, "red"));
  }
  const auto lonely = small_log(isolated);
  CHECK(error_of([&] { inject_all(lonely, plan); }) == Errc::kInsufficientCandidates);

  auto bare = flat;
  bare.schema.clear();
  for (auto& ev : bare.events) ev.attributes.clear();
  CHECK(error_of([&] { inject_all(bare, plan); }) == Errc::kInsufficientCandidates);
}
