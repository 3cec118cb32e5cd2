#pragma once

// Object-centric event log domain model and the OCEL 1.0 JSON reader/writer.

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ocgad/timestamp.hpp"

namespace ocgad {

enum class AttributeKind { kNumeric, kCategorical };

const char* to_string(AttributeKind kind);

// Numeric(finite real) | Categorical(text).
class AttributeValue {
 public:
  AttributeValue() : value_(0.0) {}

  // Throws Error(kInvalidArgument) for NaN or infinities.
  static AttributeValue numeric(double value);
  static AttributeValue categorical(std::string value);

  AttributeKind kind() const {
    return std::holds_alternative<double>(value_) ? AttributeKind::kNumeric
                                                  : AttributeKind::kCategorical;
  }
  bool is_numeric() const { return kind() == AttributeKind::kNumeric; }
  double as_number() const { return std::get<double>(value_); }
  const std::string& as_text() const { return std::get<std::string>(value_); }

  bool operator==(const AttributeValue&) const = default;

 private:
  explicit AttributeValue(std::variant<double, std::string> v)
      : value_(std::move(v)) {}

  std::variant<double, std::string> value_;
};

struct Event {
  std::string id;
  std::string activity;
  Timestamp timestamp;
  std::set<std::string> object_refs;
  std::map<std::string, AttributeValue> attributes;

  bool operator==(const Event&) const = default;
};

struct ObjectEntry {
  std::string id;
  std::string object_type;

  bool operator==(const ObjectEntry&) const = default;
};

using AttributeSchema = std::map<std::string, AttributeKind>;

struct ObjectCentricLog {
  std::vector<Event> events;
  std::vector<ObjectEntry> objects;
  std::set<std::string> object_types;
  std::set<std::string> activities;
  AttributeSchema schema;

  bool operator==(const ObjectCentricLog&) const = default;
};

enum class DiagnosticKind {
  kDuplicateEventId,
  kDuplicateObjectId,
  kDanglingObjectRef,
  kEmptyObjectRefs,
  kUnknownActivity,
  kUnknownObjectType,
  kUnknownAttribute,
  kInconsistentAttributeKind,
  kUnknownKey,
};

const char* to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string subject_id;  // offending event/object id, or the JSON key
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

// Strict OCEL 1.0 JSON reader. Events keep file order. Unknown keys are
// skipped and reported through `warnings` when it is non-null.
//
// Attribute kinds: a JSON number is numeric, a JSON string (or boolean) is
// categorical. An attribute that appears with both kinds is rejected.
// Attributes declared in `ocel:attribute-names` but never observed are numeric.
ObjectCentricLog parse_ocel_json(std::string_view bytes,
                                 std::vector<Diagnostic>* warnings = nullptr);

std::string write_ocel_json(const ObjectCentricLog& log);

// One diagnostic per invariant violation; empty iff the log is valid.
std::vector<Diagnostic> validate_log(const ObjectCentricLog& log);

ObjectCentricLog read_ocel_file(const std::filesystem::path& path,
                                std::vector<Diagnostic>* warnings = nullptr);
void write_ocel_file(const ObjectCentricLog& log,
                     const std::filesystem::path& path);

std::unordered_map<std::string, std::size_t> index_events_by_id(
    const ObjectCentricLog& log);

// Recomputes `activities` from the events.
void refresh_activities(ObjectCentricLog& log);

}  // namespace ocgad
