#pragma once

#include <filesystem>
#include <string>

#include "ocgad/ocel.hpp"

namespace ocgad::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(OCGAD_TEST_DATA_DIR) / name;
}

inline ObjectCentricLog worked_example_log() { return read_ocel_file(data_path("worked_example.jsonocel")); }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ocgad_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ocgad::testing

#include <random>

namespace ocgad::testing {

// Small random valid log: `n_events` events over `n_objects` objects of two
// types, coarse timestamps (ties are common), one numeric and one categorical
// attribute that are sometimes absent.
inline ObjectCentricLog random_log(std::mt19937_64& gen, std::size_t n_events,
                                   std::size_t n_objects) {
  ObjectCentricLog log;
  log.object_types = {"A", "B"};
  for (std::size_t o = 0; o < n_objects; ++o) {
    log.objects.push_back({"o" + std::to_string(o), o % 2 ? "B" : "A"});
  }
  log.schema = {{"colour", AttributeKind::kCategorical}, {"size", AttributeKind::kNumeric}};
  const char* colours[] = {"red", "green", "blue"};
  for (std::size_t i = 0; i < n_events; ++i) {
    Event ev;
    ev.id = "ev" + std::to_string(i);
    ev.activity = "act" + std::to_string(gen() % 4);
    ev.timestamp = Timestamp{static_cast<std::int64_t>(gen() % 20) * 60'000};
    const std::size_t refs = 1 + gen() % 2;
    for (std::size_t r = 0; r < refs; ++r) ev.object_refs.insert("o" + std::to_string(gen() % n_objects));
    if (gen() % 4 != 0) {
      ev.attributes.emplace("size", AttributeValue::numeric(static_cast<double>(gen() % 1000) / 10.0));
    }
    if (gen() % 4 != 0) ev.attributes.emplace("colour", AttributeValue::categorical(colours[gen() % 3]));
    log.activities.insert(ev.activity);
    log.events.push_back(std::move(ev));
  }
  return log;
}

}  // namespace ocgad::testing
