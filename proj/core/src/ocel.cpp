#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ocgad/error.hpp"
#include "ocgad/ocel.hpp"

namespace ocgad {

const char* to_string(AttributeKind kind) {
  return kind == AttributeKind::kNumeric ? "numeric" : "categorical";
}

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kDuplicateEventId: return "DuplicateEventId";
    case DiagnosticKind::kDuplicateObjectId: return "DuplicateObjectId";
    case DiagnosticKind::kDanglingObjectRef: return "DanglingObjectRef";
    case DiagnosticKind::kEmptyObjectRefs: return "EmptyObjectRefs";
    case DiagnosticKind::kUnknownActivity: return "UnknownActivity";
    case DiagnosticKind::kUnknownObjectType: return "UnknownObjectType";
    case DiagnosticKind::kUnknownAttribute: return "UnknownAttribute";
    case DiagnosticKind::kInconsistentAttributeKind:
      return "InconsistentAttributeKind";
    case DiagnosticKind::kUnknownKey: return "UnknownKey";
  }
  return "Unknown";
}

AttributeValue AttributeValue::numeric(double value) {
  if (!std::isfinite(value)) {
    throw Error(Errc::kInvalidArgument, "numeric attribute must be finite");
  }
  return AttributeValue(std::variant<double, std::string>(value));
}

AttributeValue AttributeValue::categorical(std::string value) {
  return AttributeValue(std::variant<double, std::string>(std::move(value)));
}

std::vector<Diagnostic> validate_log(const ObjectCentricLog& log) {
  std::vector<Diagnostic> out;

  std::unordered_set<std::string> object_ids;
  for (const ObjectEntry& obj : log.objects) {
    if (!object_ids.insert(obj.id).second) {
      out.push_back({DiagnosticKind::kDuplicateObjectId, obj.id,
                     "object id declared more than once"});
    }
    if (!log.object_types.contains(obj.object_type)) {
      out.push_back({DiagnosticKind::kUnknownObjectType, obj.id,
                     "object type '" + obj.object_type + "' not declared"});
    }
  }

  std::unordered_set<std::string> event_ids;
  for (const Event& ev : log.events) {
    if (!event_ids.insert(ev.id).second) {
      out.push_back({DiagnosticKind::kDuplicateEventId, ev.id,
                     "event id occurs more than once"});
    }
    if (!log.activities.contains(ev.activity)) {
      out.push_back({DiagnosticKind::kUnknownActivity, ev.id,
                     "activity '" + ev.activity + "' not in activity set"});
    }
    if (ev.object_refs.empty()) {
      out.push_back({DiagnosticKind::kEmptyObjectRefs, ev.id,
                     "event references no object"});
    }
    for (const std::string& ref : ev.object_refs) {
      if (!object_ids.contains(ref)) {
        out.push_back({DiagnosticKind::kDanglingObjectRef, ev.id,
                       "object '" + ref + "' not declared"});
      }
    }
    for (const auto& [name, value] : ev.attributes) {
      auto it = log.schema.find(name);
      if (it == log.schema.end()) {
        out.push_back({DiagnosticKind::kUnknownAttribute, ev.id,
                       "attribute '" + name + "' not in schema"});
      } else if (it->second != value.kind()) {
        out.push_back({DiagnosticKind::kInconsistentAttributeKind, ev.id,
                       "attribute '" + name + "' is " +
                           to_string(value.kind()) + ", schema says " +
                           to_string(it->second)});
      }
    }
  }
  return out;
}

ObjectCentricLog read_ocel_file(const std::filesystem::path& path,
                                std::vector<Diagnostic>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ocel_json(buf.str(), warnings);
}

void write_ocel_file(const ObjectCentricLog& log,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << write_ocel_json(log);
  if (!out) throw Error(Errc::kIo, "write failed for " + path.string());
}

std::unordered_map<std::string, std::size_t> index_events_by_id(
    const ObjectCentricLog& log) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(log.events.size());
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    index.emplace(log.events[i].id, i);
  }
  return index;
}

void refresh_activities(ObjectCentricLog& log) {
  log.activities.clear();
  for (const Event& ev : log.events) log.activities.insert(ev.activity);
}

}  // namespace ocgad
